"""Pseudoautomorphisms of Moufang loops and the group PsInn(M).

A pseudoautomorphism pair ``(A, a)`` consists of a permutation ``A`` of the
loop indices (acting on the right, ``x -> A[x]``) and a right companion
``a`` with ``xA * (yA * a) == (x*y)A * a`` for all ``x, y``. Pairs compose as
``(A, a)(B, b) = (AB, aB * b)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureBudgetExceeded
from .loopcore import commutator, map_R, map_T
from .permgrp import inner_mapping_group

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class PseudoautPair:
    A: np.ndarray = field(repr=False)
    a: int

    def key(self):
        return self.A.tobytes() + int(self.a).to_bytes(4, "little")

    def __eq__(self, other):
        return isinstance(other, PseudoautPair) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def is_identity(self):
        return self.a == 0 and bool((self.A == np.arange(self.A.size)).all())


def _perm(A):
    return np.ascontiguousarray(A, dtype=np.int32)


def make_pair(A, a):
    return PseudoautPair(_perm(A), int(a))


def identity_pair(L):
    return make_pair(np.arange(L.order), 0)


def is_pseudoautomorphism(L, A, a):
    """Exhaustive check of ``xA(yA*a) == (xy)A*a`` over all pairs."""
    A = np.asarray(A)
    if A.shape != (L.order,) or not np.array_equal(np.sort(A), np.arange(L.order)):
        return False
    T = L.table
    lhs = T[A[:, None], T[A, a][None, :]]
    rhs = T[A[T], a]
    return bool((lhs == rhs).all())


def psaut_compose(p1, p2, L, check=False):
    """``(A,a)(B,b) = (AB, aB*b)``; ``AB`` means apply A first."""
    A, B = p1.A, p2.A
    out = PseudoautPair(B[A], int(L.table[B[p1.a], p2.a]))
    if check and not is_pseudoautomorphism(L, out.A, out.a):
        raise AssertionError("composition left PsAut(M)")
    return out


def psaut_inverse(p, L):
    """Inverse pair ``(A^{-1}, (aA^{-1})^{-1})``."""
    Ainv = np.empty_like(p.A)
    Ainv[p.A] = np.arange(p.A.size, dtype=p.A.dtype)
    return PseudoautPair(Ainv, int(L.inverse[Ainv[p.a]]))


def psinn_generators(L):
    """Distinct pairs ``(T_x, x^{-3})`` and ``(R_{x,y}, [[x,y]])``."""
    seen = set()
    inv = L.inverse
    for x in range(L.order):
        g = make_pair(map_T(L, x), inv[L.power(x, 3)])
        if g.key() not in seen:
            seen.add(g.key())
            yield g
    for x in range(L.order):
        for y in range(L.order):
            g = make_pair(map_R(L, x, y), commutator(L, x, y))
            if g.key() not in seen:
                seen.add(g.key())
                yield g


@dataclass
class PsInnGroup:
    """Closure of the PsInn generators: every pair plus a reduced generating set."""

    pairs: list
    generators: list

    @property
    def order(self):
        return len(self.pairs)

    def kernel_companions(self):
        """Companions of pairs whose permutation is trivial."""
        return sorted(p.a for p in self.pairs
                      if bool((p.A == np.arange(p.A.size)).all()))

    def projections(self):
        """Distinct permutation parts, i.e. the image in the inner mapping group."""
        seen = {}
        for p in self.pairs:
            seen.setdefault(p.A.tobytes(), p.A)
        return list(seen.values())


def psinn_group(L, budget=DEFAULT_BUDGET):
    """BFS closure of PsInn(L) with a cap of ``budget`` pairs.

    The projection to permutations maps PsInn onto the inner mapping group,
    so its order bounds the closure from below and is checked first.
    """
    inn_order = inner_mapping_group(L).order()
    if inn_order > budget:
        raise ClosureBudgetExceeded(
            f"|PsInn| >= |Inn| = {inn_order} exceeds budget {budget}")
    ident = identity_pair(L)
    elements = {ident.key(): ident}
    order = [ident]
    essential = []
    for g in psinn_generators(L):
        if g.key() in elements:
            continue
        essential.append(g)
        # re-close: every element times every essential generator
        i = 0
        while i < len(order):
            e = order[i]
            for s in essential:
                h = psaut_compose(e, s, L)
                k = h.key()
                if k not in elements:
                    elements[k] = h
                    order.append(h)
                    if len(order) > budget:
                        raise ClosureBudgetExceeded(
                            f"PsInn closure passed {budget} pairs")
            i += 1
    return PsInnGroup(pairs=order, generators=essential)


def prime_power_base(n):
    """The prime p with ``n == p**k`` (k >= 1), or None; 1 maps to None."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None
