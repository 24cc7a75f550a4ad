import numpy as np
import pytest

import oracles
from moufang.construct import alternating, cyclic, named_group
from moufang.errors import (CarrierTooLarge, InvalidParameter, TrialityViolated,
                            UnknownName)
from moufang.loopcore import is_associative, is_isomorphic, is_moufang, minimal_normal_subloops
from moufang.triality import (ARCHETYPES, AbelianVector, CayleyGroup, MatrixMap,
                              StructuredPower, TableMap, TrialityGroup, build_s_simple,
                              commutator_with_S, conjugates_commute, dual_identity_holds,
                              exponent3, is_s_invariant, loop_elements,
                              moufang_from_triality, named_archetype,
                              p_sylow_s_subgroups, rho_extension,
                              rho_extension_is_triality, s3_inner_action, s_center,
                              s_subgroup_closure, subgroup_closure, triality_product,
                              verify_triality)

CAYLEY_ARCHETYPES = ["trivial-a5", "z3", "zpzp-2", "zpzp-5", "zpzp-7", "s3-inner"]


def _sigma_fixed(G):
    X = G.elements()
    return int((G.sigma(X) == X).sum())


# --- carriers --------------------------------------------------------------------

def test_structured_power_matches_direct_product():
    V = named_group("s3")
    C = StructuredPower(V, 2)
    X = np.arange(C.size)
    T = C.mul(X[:, None], X[None, :])
    d = C.decode(X)
    expect = C.encode(np.stack([V.table[d[:, None, i], d[None, :, i]] for i in range(2)], axis=-1))
    assert (T == expect).all()
    assert (C.mul(X, C.inv(X)) == 0).all()


def test_abelian_vector_arithmetic():
    C = AbelianVector(5, 2)
    X = np.arange(C.size)
    assert (C.decode(C.encode(C.decode(X))) == C.decode(X)).all()
    assert (C.mul(X, C.inv(X)) == 0).all()
    assert (C.decode(C.mul(7, 13)) == (C.decode(7) + C.decode(13)) % 5).all()


def test_materialize_large_refused():
    G = build_s_simple("wreath3")
    with pytest.raises(CarrierTooLarge):
        G.materialize()


# --- verify_triality ---------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(ARCHETYPES))
def test_archetypes_pass(name):
    G = named_archetype(name)
    rep = verify_triality(G)
    assert rep.ok and rep.violation is None
    assert rep.loop.order * _sigma_fixed(G) == G.size
    assert is_moufang(rep.loop)[0]


def test_z3_gives_z3():
    rep = verify_triality(build_s_simple("z3"))
    assert rep.ok and is_isomorphic(rep.loop, cyclic(3))


@pytest.mark.parametrize("p", [2, 5, 7])
def test_zpzp_gives_zp(p):
    G = build_s_simple("zpzp", p=p)
    assert G.size == p * p
    rep = verify_triality(G)
    assert rep.ok and is_isomorphic(rep.loop, cyclic(p))


def test_wreath3_gives_a5():
    G = build_s_simple("wreath3")
    assert G.size == 216_000
    rep = verify_triality(G)
    assert rep.ok and rep.loop.order == 60
    assert is_associative(rep.loop) and not rep.loop.is_commutative
    assert is_isomorphic(rep.loop, alternating(5))


def test_trivial_action_gives_trivial_loop():
    rep = verify_triality(build_s_simple("trivial_action"))
    assert rep.ok and rep.loop.order == 1


def test_z4_inversion_fails_with_order4_witness():
    Z = cyclic(4)
    G = TrialityGroup(CayleyGroup(Z), TableMap(Z.inverse), TableMap(np.arange(4)), "Z4")
    rep = verify_triality(G)
    assert rep.relations_ok and rep.automorphism_ok and not rep.identity_ok
    assert rep.violation == 1 and Z.element_orders[rep.violation] == 4
    # [x, sigma]^3 = x^-6 vanishes exactly off the order-4 elements
    bad = {x for x in range(4) if (-6 * x) % 4}
    assert bad == {1, 3}
    with pytest.raises(TrialityViolated):
        moufang_from_triality(G)


def test_non_automorphism_detected():
    Z = cyclic(5)
    sigma = np.array([0, 2, 1, 3, 4])
    G = TrialityGroup(CayleyGroup(Z), TableMap(sigma), TableMap(np.arange(5)), "bad")
    rep = verify_triality(G)
    assert not rep.automorphism_ok and not rep.ok


def test_broken_relations_detected():
    C = AbelianVector(5, 2)
    G = TrialityGroup(C, MatrixMap(C, [[2, 0], [0, 1]]), MatrixMap(C, [[1, 0], [0, 1]]))
    assert not verify_triality(G).relations_ok


# --- identities on M -----------------------------------------------------------------

@pytest.mark.parametrize("name", CAYLEY_ARCHETYPES)
def test_conjugates_commute_and_dual_identity(name):
    G = named_archetype(name)
    assert conjugates_commute(G)
    assert dual_identity_holds(G)


def test_identities_brute_force_on_zpzp5():
    G = named_archetype("zpzp-5").materialize()
    T = G.carrier.group.table
    M = loop_elements(G).tolist()
    r = lambda x: int(G.rho(np.array([x]))[0])
    inv = G.carrier.group.inverse
    for m in M:
        for a, b in ((m, r(m)), (m, r(r(m))), (r(m), r(r(m)))):
            assert T[a, b] == T[b, a]
        for n in M:
            lhs = T[T[inv[r(m)], n], inv[r(r(m))]]
            rhs = T[T[inv[r(r(n))], m], inv[r(n)]]
            assert lhs == rhs


def test_loop_elements_invert_under_sigma():
    for name in CAYLEY_ARCHETYPES:
        G = named_archetype(name)
        M = loop_elements(G)
        assert (G.sigma(M) == G.inv(M)).all()


def test_embedding_is_injective():
    rep = verify_triality(named_archetype("zpzp-7"))
    assert len(set(rep.embedding.tolist())) == rep.loop.order
    assert rep.embedding[0] == 0


# --- subgroups -------------------------------------------------------------------

def test_subgroup_closure_matches_oracle():
    G = named_archetype("s3-inner")
    for gens in ([1], [1, 2], [3], [0]):
        H = subgroup_closure(G, gens)
        assert set(H.tolist()) == oracles.generated(oracles.rows(G.carrier.group), gens)


def test_s_subgroup_closure_examples():
    G = named_archetype("z3")
    assert s_subgroup_closure(G, []).tolist() == [0]
    M = loop_elements(G)
    assert np.array_equal(s_subgroup_closure(G, M), commutator_with_S(G))
    G5 = named_archetype("zpzp-5")
    M5 = loop_elements(G5)
    Q = s_subgroup_closure(G5, [int(M5[1])])
    assert Q.size == 25 and is_s_invariant(G5, Q)


def test_commutator_with_S_and_center():
    triv = build_s_simple("trivial_action")
    assert commutator_with_S(triv).tolist() == [0]
    assert s_center(triv).size == 60
    z3 = build_s_simple("z3")
    assert commutator_with_S(z3).size == 3
    assert s_center(z3).tolist() == [0]


def test_center_of_product_is_fixed_factor():
    triv = TrialityGroup(CayleyGroup(cyclic(5)), TableMap(np.arange(5)), TableMap(np.arange(5)), "Z5")
    G = triality_product(triv, build_s_simple("z3"))
    assert verify_triality(G).ok
    assert s_center(G).tolist() == [0, 3, 6, 9, 12]
    assert commutator_with_S(G).tolist() == [0, 1, 2]


@pytest.mark.parametrize("name", CAYLEY_ARCHETYPES)
def test_commutator_idempotent(name):
    G = named_archetype(name)
    K = commutator_with_S(G)
    assert np.array_equal(commutator_with_S(G, K, check=False), K)
    assert is_s_invariant(G, K)


def test_structured_carrier_guarded():
    with pytest.raises(CarrierTooLarge):
        s_center(build_s_simple("wreath3"))


# --- rho extension ---------------------------------------------------------------

def test_rho_extension_is_group_of_triple_order():
    G = named_archetype("zpzp-5")
    E = rho_extension(G)
    assert E.size == 75
    assert is_associative(E.carrier.group)
    assert oracles.moufang_violations(oracles.rows(E.carrier.group)) == []


@pytest.mark.parametrize("name,expect", [("z3", True), ("zpzp-2", False),
                                         ("zpzp-5", False), ("trivial-a5", True)])
def test_rho_extension_matches_exponent3(name, expect):
    G = named_archetype(name)
    loop = verify_triality(G).loop
    assert rho_extension_is_triality(G) == exponent3(loop) == expect


# --- S3 counterexample ---------------------------------------------------------------

def test_s3_inner_has_no_invariant_2_sylow():
    G = s3_inner_action()
    rep = verify_triality(G)
    assert rep.ok and is_isomorphic(rep.loop, cyclic(3))
    subs = p_sylow_s_subgroups(G, 2)
    assert len(subs) == 3
    assert not any(inv for _, inv in subs)
    for H, _ in subs:
        assert not set(G.rho(H).tolist()) <= set(H.tolist())


# --- builder errors ---------------------------------------------------------------

@pytest.mark.parametrize("p", [3, 4, 1, None])
def test_zpzp_rejects(p):
    with pytest.raises(InvalidParameter):
        build_s_simple("zpzp", p=p)


def test_wreath_rejects_non_simple():
    with pytest.raises(InvalidParameter):
        build_s_simple("wreath3", V=named_group("s3"))
    with pytest.raises(InvalidParameter):
        build_s_simple("mystery")


def test_unknown_archetype():
    with pytest.raises(UnknownName):
        named_archetype("nope")
