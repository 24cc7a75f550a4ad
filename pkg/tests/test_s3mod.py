import numpy as np
import pytest

from moufang.errors import NotTriality, RelationsViolated, UnknownRow
from moufang.loopcore import is_isomorphic
from moufang.construct import cyclic
from moufang.s3mod import (PRINTED_SIGMA_V3_CHAR2, S3Module, TABLE1, as_triality_group,
                           expected_verdict, is_triality_module, table1_module,
                           table1_report, table1_rows)
from moufang.triality import verify_triality

ROWS = table1_rows()
SURROGATES = [5, 7, 11]


def _fixed_index(V):
    # |F^dim : Fix(sigma)| by brute force over all vectors
    q, n = V.modulus, V.dim
    vecs = np.indices((q,) * n).reshape(n, -1).T
    fixed = ((vecs @ V.mat_sigma) % q == vecs).all(axis=1).sum()
    return q**n // fixed


def test_twelve_rows_nine_checks():
    assert len(ROWS) == 12
    verdicts = [expected_verdict(*r) for r in ROWS]
    assert verdicts.count(True) == 9
    assert [r for r in ROWS if not expected_verdict(*r)] == [(0, 2), (2, 3), (3, 6)]


@pytest.mark.parametrize("surrogate", SURROGATES)
@pytest.mark.parametrize("row", ROWS)
def test_relations_and_verdicts(row, surrogate):
    V = table1_module(*row, surrogate=surrogate)
    assert V.relations_hold()
    assert is_triality_module(V) == expected_verdict(*row)


@pytest.mark.parametrize("row", [r for r in ROWS if expected_verdict(*r)])
def test_triality_rows_give_loops_of_fixed_index(row):
    V = table1_module(*row)
    rep = verify_triality(as_triality_group(V))
    assert rep.ok
    assert rep.loop.order == _fixed_index(V)


@pytest.mark.parametrize("row", [r for r in ROWS if not expected_verdict(*r)])
def test_refused_rows(row):
    V = table1_module(*row)
    with pytest.raises(NotTriality):
        as_triality_group(V)


def test_refused_rows_fail_the_group_identity():
    # the module criterion and the group-level identity agree on refusals
    from moufang.triality import AbelianVector, MatrixMap, TrialityGroup
    for row in [r for r in ROWS if not expected_verdict(*r)]:
        V = table1_module(*row)
        C = AbelianVector(V.modulus, V.dim)
        G = TrialityGroup(C, MatrixMap(C, V.mat_sigma), MatrixMap(C, V.mat_rho))
        rep = verify_triality(G, extract=False)
        assert rep.relations_ok and not rep.identity_ok


def test_spec_examples():
    V = table1_module(0, 1)
    assert V.mat_sigma.tolist() == [[1]] == V.mat_rho.tolist()
    V = table1_module(2, 2)
    assert V.mat_sigma.tolist() == [[0, 1], [1, 0]]
    assert V.mat_rho.tolist() == [[0, 1], [1, 1]]
    V = table1_module(3, 6)
    R = V.mat_rho
    assert (np.tril(R, -1) == 0).all() and (np.diag(R) == 1).all()
    assert R.tolist() == [[1, 2, 1], [0, 1, 1], [0, 0, 1]]  # -1 reduced mod 3


def test_v3_char0_loop_is_z7():
    rep = verify_triality(as_triality_group(table1_module(0, 3)))
    assert rep.loop.order == 7 and is_isomorphic(rep.loop, cyclic(7))


def test_v2_char3_and_v1_char2():
    assert verify_triality(as_triality_group(table1_module(3, 2))).loop.order == 3
    assert verify_triality(as_triality_group(table1_module(2, 1))).loop.order == 1


def test_printed_char2_sigma_is_not_an_involution():
    S = np.array(PRINTED_SIGMA_V3_CHAR2)
    assert not np.array_equal((S @ S) % 2, np.eye(2, dtype=int))
    assert np.array_equal(np.linalg.matrix_power(S, 3) % 2, np.eye(2, dtype=int))
    bad = S3Module(2, 3, 2, S, np.asarray(TABLE1[(2, 3)][1]))
    assert not bad.relations_hold()
    with pytest.raises(RelationsViolated):
        is_triality_module(bad)


def test_unknown_rows():
    with pytest.raises(UnknownRow):
        table1_module(2, 4)
    with pytest.raises(UnknownRow):
        table1_module(5, 1)
    with pytest.raises(UnknownRow):
        table1_module(0, 1, surrogate=3)


def test_report():
    rows = table1_report()
    assert len(rows) == 12
    assert all(r["relations"] and r["triality"] == r["expected"] for r in rows)
    assert len(table1_report(chi=3)) == 6
