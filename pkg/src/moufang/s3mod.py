"""Indecomposable S3-modules in characteristic 0, 2, 3 and the triality test.

Matrices act on row vectors, so the representation is a homomorphism for the
right action and the relations read ``S^2 = R^3 = (R S)^2 = I``. Sigma is
bound to the transposition (12) and rho to the 3-cycle (123). Rows of
characteristic 0 are realised over a surrogate prime other than 2 and 3.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotTriality, RelationsViolated, UnknownRow
from .triality import AbelianVector, MatrixMap, TrialityGroup

DEFAULT_SURROGATE = 7

# (chi, i) -> (sigma matrix, rho matrix, expected triality verdict)
TABLE1 = {
    (0, 1): ([[1]], [[1]], True),
    (0, 2): ([[-1]], [[1]], False),
    (0, 3): ([[0, 1], [1, 0]], [[0, 1], [-1, -1]], True),
    (2, 1): ([[1]], [[1]], True),
    (2, 2): ([[0, 1], [1, 0]], [[0, 1], [1, 1]], True),
    # printed sigma [[1,1],[1,0]] has order 3 mod 2; the Jordan block is used
    (2, 3): ([[1, 1], [0, 1]], [[1, 0], [0, 1]], False),
    (3, 1): ([[1]], [[1]], True),
    (3, 2): ([[-1]], [[1]], True),
    (3, 3): ([[1, 0], [0, -1]], [[1, 1], [0, 1]], True),
    (3, 4): ([[-1, 0], [0, 1]], [[1, 1], [0, 1]], True),
    (3, 5): ([[1, 0, 0], [0, -1, 0], [0, 0, 1]], [[1, 1, 1], [0, 1, -1], [0, 0, 1]], True),
    (3, 6): ([[-1, 0, 0], [0, 1, 0], [0, 0, -1]], [[1, -1, 1], [0, 1, 1], [0, 0, 1]], False),
}

PRINTED_SIGMA_V3_CHAR2 = [[1, 1], [1, 0]]


@dataclass
class S3Module:
    characteristic: int
    index: int
    modulus: int
    mat_sigma: np.ndarray
    mat_rho: np.ndarray

    @property
    def dim(self):
        return self.mat_sigma.shape[0]

    @property
    def name(self):
        return f"V_{self.index}^({self.characteristic})"

    def _mm(self, a, b):
        return (a @ b) % self.modulus

    def relations_hold(self):
        eye = np.eye(self.dim, dtype=np.int64)
        S, R = self.mat_sigma, self.mat_rho
        RS = self._mm(R, S)
        return bool(np.array_equal(self._mm(S, S), eye)
                    and np.array_equal(self._mm(R, self._mm(R, R)), eye)
                    and np.array_equal(self._mm(RS, RS), eye))


def table1_rows():
    return sorted(TABLE1)


def table1_module(chi, i, surrogate=DEFAULT_SURROGATE):
    try:
        s, r, _ = TABLE1[(chi, i)]
    except KeyError:
        raise UnknownRow(f"no Table row ({chi}, {i})") from None
    mod = surrogate if chi == 0 else chi
    if chi == 0 and surrogate in (2, 3):
        raise UnknownRow("characteristic-0 surrogate must differ from 2 and 3")
    return S3Module(chi, i, mod, np.asarray(s, dtype=np.int64) % mod,
                    np.asarray(r, dtype=np.int64) % mod)


def expected_verdict(chi, i):
    return TABLE1[(chi, i)][2]


def is_triality_module(V):
    """``(S - I)(I + R + R^2) == 0`` over the field."""
    if not V.relations_hold():
        raise RelationsViolated(f"{V.name} mod {V.modulus} violates the S3 relations")
    eye = np.eye(V.dim, dtype=np.int64)
    R = V.mat_rho
    N = (eye + R + V._mm(R, R)) % V.modulus
    return not V._mm((V.mat_sigma - eye) % V.modulus, N).any()


def as_triality_group(V):
    if not is_triality_module(V):
        raise NotTriality(f"{V.name} is not a triality module")
    C = AbelianVector(V.modulus, V.dim)
    return TrialityGroup(C, MatrixMap(C, V.mat_sigma), MatrixMap(C, V.mat_rho),
                         f"{V.name}/F{V.modulus}")


def table1_report(chi=None, surrogate=DEFAULT_SURROGATE):
    """Rows with computed and expected verdicts, optionally for one characteristic."""
    out = []
    for c, i in table1_rows():
        if chi is not None and c != chi:
            continue
        V = table1_module(c, i, surrogate)
        out.append({"chi": c, "index": i, "dim": V.dim, "field": V.modulus,
                    "relations": V.relations_hold(), "triality": is_triality_module(V),
                    "expected": expected_verdict(c, i)})
    return out
