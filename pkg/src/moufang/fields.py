"""Small finite fields GF(p) and GF(p^2) backed by lookup tables.

Elements are encoded as integers ``0 .. q-1``. For GF(p) the code is the
residue itself; for GF(p^2) the element ``c0 + c1*x`` is encoded as
``c0 + p*c1`` (polynomial-coefficient order), so the natural integer order
of codes is the ordering used for canonical representatives elsewhere.
"""

from functools import lru_cache
from itertools import product

import numpy as np

from .errors import UnsupportedFieldSize

# monic irreducible quadratics x^2 + c1*x + c0, stored as (c0, c1)
_QUADRATIC_MODULI = {
    2: (1, 1),  # x^2 + x + 1
    3: (1, 0),  # x^2 + 1
}

MAX_FIELD_SIZE = 9


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _split_prime_power(q):
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else (None, None)
    return None, None


class FieldSpec:
    """Finite field of order ``q = p**k`` with ``k`` in {1, 2} and ``q <= 9``.

    ``add``, ``mul`` are ``q x q`` tables and ``neg``, ``inv`` are length-``q``
    arrays (``inv[0]`` is set to 0 and never meaningful). All tables are
    numpy arrays so they can be used for vectorised fancy indexing.
    """

    def __init__(self, q):
        p, k = _split_prime_power(q)
        if p is None or k not in (1, 2) or q > MAX_FIELD_SIZE:
            raise UnsupportedFieldSize(f"GF({q}) is not supported (need p or p^2, q <= 9)")
        if k == 2 and p not in _QUADRATIC_MODULI:
            raise UnsupportedFieldSize(f"no modulus recorded for GF({q})")
        self.q = q
        self.p = p
        self.k = k
        self.modulus = _QUADRATIC_MODULI[p] if k == 2 else None

        if k == 1:
            r = np.arange(q)
            add = (r[:, None] + r[None, :]) % q
            mul = (r[:, None] * r[None, :]) % q
        else:
            c0, c1 = self.modulus
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a, b in product(range(q), repeat=2):
                a0, a1 = a % p, a // p
                b0, b1 = b % p, b // p
                add[a, b] = (a0 + b0) % p + p * ((a1 + b1) % p)
                # (a0 + a1 x)(b0 + b1 x), reduce x^2 = -c1 x - c0
                t0 = a0 * b0
                t1 = a0 * b1 + a1 * b0
                t2 = a1 * b1
                r0 = (t0 - t2 * c0) % p
                r1 = (t1 - t2 * c1) % p
                mul[a, b] = r0 + p * r1
        self.add = add.astype(np.int64)
        self.mul = mul.astype(np.int64)
        self.neg = np.array([int(np.flatnonzero(self.add[a] == 0)[0]) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self.inv = inv
        self.sub = self.add[np.arange(q)[:, None], self.neg[None, :]]
        for t in (self.add, self.mul, self.neg, self.inv, self.sub):
            t.flags.writeable = False
        self.verify_axioms()

    def __repr__(self):
        return f"FieldSpec(q={self.q})"

    @property
    def elements(self):
        return range(self.q)

    @property
    def squares(self):
        """Codes of the nonzero squares."""
        return sorted({int(self.mul[a, a]) for a in range(1, self.q)})

    def verify_axioms(self):
        """Exhaustively check the field axioms on the tables; raises on failure."""
        q, A, M = self.q, self.add, self.mul
        r = np.arange(q)
        checks = {
            "add commutative": (A == A.T).all(),
            "mul commutative": (M == M.T).all(),
            "add identity": (A[0] == r).all(),
            "mul identity": (M[1] == r).all(),
            "add associative": (A[A[:, :, None], r[None, None, :]]
                                == A[r[:, None, None], A[None, :, :]]).all(),
            "mul associative": (M[M[:, :, None], r[None, None, :]]
                                == M[r[:, None, None], M[None, :, :]]).all(),
            "distributive": (M[r[:, None, None], A[None, :, :]]
                             == A[M[:, :, None], M[:, None, :]]).all(),
            "additive inverses": (A[r, self.neg] == 0).all(),
            "multiplicative inverses": (M[r[1:], self.inv[1:]] == 1).all(),
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            raise UnsupportedFieldSize(f"GF({q}) tables fail: {', '.join(bad)}")


@lru_cache(maxsize=None)
def gf(q):
    return FieldSpec(q)
