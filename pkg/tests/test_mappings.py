import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import load
from moufang.construct import cyclic, direct_product, paige_loop
from moufang.errors import ClosureBudgetExceeded
from moufang.loopcore import commutator, map_R, map_T, nucleus
from moufang.mappings import (identity_pair, is_pseudoautomorphism, make_pair,
                              prime_power_base, psaut_compose, psaut_inverse,
                              psinn_generators, psinn_group)
from moufang.permgrp import inner_mapping_group


def test_identity_pair():
    L = load("chein-s3")
    assert is_pseudoautomorphism(L, np.arange(L.order), 0)


def test_T_pairs_chein_s3():
    L = load("chein-s3")
    inv = L.inverse
    for x in range(L.order):
        assert is_pseudoautomorphism(L, map_T(L, x), inv[L.power(x, 3)])


def test_R_pairs_paige2():
    L = paige_loop(2)
    rng = np.random.default_rng(5)
    for x, y in rng.integers(0, L.order, size=(40, 2)):
        assert is_pseudoautomorphism(L, map_R(L, x, y), commutator(L, x, y))


def test_wrong_companion_rejected():
    L = load("chein-s3")
    x = 7
    good = L.inverse[L.power(x, 3)]
    bad = [a for a in range(L.order) if not is_pseudoautomorphism(L, map_T(L, x), a)]
    assert good not in bad and bad


def test_non_permutation_rejected():
    L = load("chein-s3")
    assert not is_pseudoautomorphism(L, np.zeros(L.order, dtype=int), 0)


def _pairs(L):
    return list(psinn_generators(L))


def test_compose_with_identity():
    L = load("chein-d4")
    e = identity_pair(L)
    for g in _pairs(L)[:20]:
        assert psaut_compose(g, e, L) == g == psaut_compose(e, g, L)


def test_inverse_pair():
    L = load("chein-s3")
    for g in _pairs(L):
        assert psaut_compose(g, psaut_inverse(g, L), L).is_identity
        assert psaut_compose(psaut_inverse(g, L), g, L).is_identity


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=3, max_size=3))
def test_compose_associative(idx):
    L = load("chein-s3")
    pairs = _pairs(L)
    a, b, c = (pairs[i % len(pairs)] for i in idx)
    left = psaut_compose(psaut_compose(a, b, L), c, L)
    right = psaut_compose(a, psaut_compose(b, c, L), L)
    assert left == right
    assert is_pseudoautomorphism(L, left.A, left.a)


def test_exponent3_abelian_trivial():
    L = direct_product(cyclic(3), cyclic(3))
    P = psinn_group(L)
    assert P.order == 1


@pytest.mark.parametrize("name", ["chein-d4", "chein-q8"])
def test_psinn_of_2_loops(name):
    L = load(name)
    P = psinn_group(L)
    assert prime_power_base(P.order) == 2
    assert all(is_pseudoautomorphism(L, p.A, p.a) for p in P.pairs)


def test_psinn_chein_s3():
    L = load("chein-s3")
    P = psinn_group(L)
    assert set(_prime_factors(P.order)) <= {2, 3}
    nuc = set(nucleus(L).to_list())
    assert set(P.kernel_companions()) <= nuc


@pytest.mark.parametrize("name", ["chein-s3", "chein-d4", "s3", "a4"])
def test_projection_lands_in_inner_mapping_group(name):
    L = load(name)
    P = psinn_group(L)
    Inn = inner_mapping_group(L)
    proj = P.projections()
    assert all(Inn.contains(A) for A in proj)
    assert len(proj) == Inn.order()
    assert P.order == Inn.order() * len(P.kernel_companions())


def test_budget():
    with pytest.raises(ClosureBudgetExceeded):
        psinn_group(load("chein-d4"), budget=10)
    with pytest.raises(ClosureBudgetExceeded):
        psinn_group(paige_loop(2))


def test_prime_power_base():
    assert prime_power_base(1) is None
    assert prime_power_base(128) == 2
    assert prime_power_base(81) == 3
    assert prime_power_base(12) is None


def _prime_factors(n):
    out, d = [], 2
    while n > 1:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    return out
