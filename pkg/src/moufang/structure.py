"""Chief decompositions, Sylow primes, Sylow searches and radicals.

Chief factors are read off an ascending chain built from minimal normal
subloops of successive quotients. A nonassociative chief factor is a Paige
loop, recognised by its order; associative ones split into cyclic primes or
powers of a nonabelian simple group.
"""

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .construct import paige_order
from .errors import NotSylowPrime, RadicalNotTrivial, UnrecognizedSimpleFactor
from .fields import _is_prime
from .loopcore import (Subloop, generated_subloop, inner_orbit_labels, is_associative,
                       is_normal, join, minimal_normal_subloops, normal_closure,
                       preimage, quotient, trivial_subloop, whole)

# prime powers whose Paige order is below any table we can hold, and then some
PAIGE_Q_RANGE = [2, 3, 4, 5, 7, 8, 9, 11, 13]

# orders of nonabelian simple groups up to 5000, each unique at that order
SIMPLE_GROUP_NAMES = {60: "A5", 168: "PSL2(7)", 360: "A6", 504: "PSL2(8)",
                      660: "PSL2(11)", 1092: "PSL2(13)", 2448: "PSL2(17)",
                      2520: "A7", 3420: "PSL2(19)", 4080: "PSL2(16)"}


def factorize(n):
    out = Counter()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] += 1
            n //= d
        d += 1
    if n > 1:
        out[n] += 1
    return dict(out)


def p_part(n, p):
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def sylow_obstruction(q):
    """``(q^2+1)/d`` with ``d = gcd(2, q-1)``."""
    return (q * q + 1) // gcd(2, q - 1)


# --- factor kinds ------------------------------------------------------------

@dataclass(frozen=True)
class CyclicPrime:
    p: int

    @property
    def order(self):
        return self.p

    def __str__(self):
        return f"Z{self.p}"


@dataclass(frozen=True)
class SimpleGroup:
    order: int
    name: str = None

    def __str__(self):
        return self.name or f"Simple({self.order})"


@dataclass(frozen=True)
class Paige:
    q: int

    @property
    def order(self):
        return paige_order(self.q)

    def __str__(self):
        return f"M({self.q})"


def factor_p_part(kind, p):
    """p-part of a factor's order, or 1 when p is not Sylow for it."""
    if isinstance(kind, Paige) and sylow_obstruction(kind.q) % p == 0:
        return 1
    return p_part(kind.order, p)


@dataclass
class CompositionData:
    chain: list
    factors: list = field(default_factory=list)

    def all_factors(self):
        c = Counter()
        for step in self.factors:
            for kind, mult in step:
                c[kind] += mult
        return c

    def has_paige(self):
        return any(isinstance(k, Paige) for k in self.all_factors())

    def as_dict(self):
        return {
            "chain_orders": [N.order for N in self.chain],
            "factors": [[{"kind": type(k).__name__, "name": str(k), "order": k.order,
                          "multiplicity": m} for k, m in step] for step in self.factors],
        }


def _paige_q_for_order(n):
    for q in PAIGE_Q_RANGE:
        if paige_order(q) == n:
            return q
    return None


def _is_simple(L):
    mins = minimal_normal_subloops(L)
    return len(mins) == 1 and mins[0].order == L.order


def decompose_chief_factor(F):
    """Split a characteristically simple loop into (kind, multiplicity) pairs."""
    n = F.order
    if not is_associative(F):
        q = _paige_q_for_order(n)
        if q is None or not _is_simple(F):
            raise UnrecognizedSimpleFactor(f"nonassociative factor of order {n} is not a Paige loop")
        return [(Paige(q), 1)]
    if F.is_commutative:
        fac = factorize(n)
        if len(fac) != 1:
            raise UnrecognizedSimpleFactor(f"abelian chief factor of order {n} is not a p-group")
        (p, k), = fac.items()
        return [(CyclicPrime(p), k)]
    T = minimal_normal_subloops(F)[0]
    t, k, m = T.order, 0, n
    while m % t == 0 and m > 1:
        m //= t
        k += 1
    if m != 1 or not _is_simple(T.as_loop()):
        raise UnrecognizedSimpleFactor(f"group chief factor of order {n} is not a simple power")
    return [(SimpleGroup(t, SIMPLE_GROUP_NAMES.get(t)), k)]


def chief_decomposition(L):
    """Ascending chain ``1 = N_0 < ... < N_k = L`` with decomposed factors.

    Each step takes the smallest minimal normal subloop of the current
    quotient (ties broken by element list).
    """
    cached = getattr(L, "_chief", None)
    if cached is not None:
        return cached
    chain = [trivial_subloop(L)]
    factors = []
    Q = L
    proj = np.arange(L.order)
    while Q.order > 1:
        N = minimal_normal_subloops(Q)[0]
        factors.append(decompose_chief_factor(N.as_loop()))
        chain.append(preimage(L, proj, N) if Q is not L else N)
        Q, p2 = quotient(Q, N)
        proj = p2[proj]
    cd = CompositionData(chain, factors)
    L._chief = cd
    return cd


def is_group_type(L):
    return is_associative(L) or not chief_decomposition(L).has_paige()


# --- Sylow primes -------------------------------------------------------------

@dataclass
class SylowVerdict:
    p: int
    sylow: bool
    witnesses: list

    def as_dict(self):
        return {"p": self.p, "sylow": self.sylow, "witnesses": self.witnesses}


def sylow_verdict(L, p):
    paige = sorted({k.q for k in chief_decomposition(L).all_factors() if isinstance(k, Paige)})
    bad = [q for q in paige if sylow_obstruction(q) % p == 0]
    return SylowVerdict(p, not bad, bad)


def sylow_primes(L):
    """Verdict for every prime dividing ``|L|``."""
    return [sylow_verdict(L, p) for p in sorted(factorize(L.order))]


def _p_mask(L, p):
    orders = L.element_orders
    return np.array([p_part(int(o), p) == o for o in orders])


def find_p_sylow(L, p):
    """A subloop of order ``p^k`` with ``p^k || |L|``, by backtracking.

    Extends the current p-subloop by the least-index p-element that keeps the
    closure inside the p-elements; visited subloops are memoised.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    v = sylow_verdict(L, p)
    if not v.sylow:
        raise NotSylowPrime(p, v.witnesses)
    target = p_part(L.order, p)
    allowed = _p_mask(L, p)
    pel = np.flatnonzero(allowed)[1:]
    seen = set()

    def extend(Q):
        if Q.order == target:
            return Q
        for y in pel:
            if Q.mask[y]:
                continue
            R = generated_subloop(L, np.append(Q.elems, y), limit=target, allowed=allowed)
            if R is None or R.key in seen:
                continue
            seen.add(R.key)
            found = extend(R)
            if found is not None:
                return found
        return None

    found = extend(trivial_subloop(L))
    if found is None:
        raise NotSylowPrime(p, [])
    return found


def enumerate_subloops(L, allowed=None, max_order=None):
    """Every subloop (inside ``allowed``, of order at most ``max_order``).

    Breadth-first over single-element extensions, so every subloop within the
    bounds is reached through a chain of smaller ones that also are.
    """
    start = trivial_subloop(L)
    found = {start.key: start}
    queue = [start]
    cands = np.arange(1, L.order) if allowed is None else np.flatnonzero(allowed)
    cands = cands[cands != 0]
    while queue:
        S = queue.pop()
        for y in cands:
            if S.mask[y]:
                continue
            R = generated_subloop(L, np.append(S.elems, y), limit=max_order, allowed=allowed)
            if R is not None and R.key not in found:
                found[R.key] = R
                queue.append(R)
    return sorted(found.values(), key=lambda s: (s.order, s.elems.tolist()))


def p_subloops(L, p):
    return enumerate_subloops(L, allowed=_p_mask(L, p))


def sylow_subloops(L, p):
    target = p_part(L.order, p)
    return [S for S in p_subloops(L, p) if S.order == target]


def maximal_p_subloops(L, p):
    subs = p_subloops(L, p)
    return [S for S in subs if not any(S < T for T in subs)]


def has_subloop_of_order(L, n):
    """Exhaustive search over subloops of order at most ``n``."""
    return any(S.order == n for S in enumerate_subloops(L, max_order=n))


# --- quasi-Sylow and radicals --------------------------------------------------

def quasi_sylow_order(L, p):
    o = 1
    for kind, mult in chief_decomposition(L).all_factors().items():
        o *= factor_p_part(kind, p) ** mult
    return o


def _orbit_closures(L):
    lab = inner_orbit_labels(L)
    out = {}
    for r in np.unique(lab[lab != 0]):
        C = normal_closure(L, [int(r)])
        out.setdefault(C.key, C)
    return list(out.values())


def _normal_join(L, subs):
    return normal_closure(L, np.concatenate([s.elems for s in subs])) if subs else trivial_subloop(L)


def group_type_radical(L, verify=True):
    """Largest normal subloop of group type, as a join of element closures."""
    if is_associative(L):
        return whole(L)
    parts = [C for C in _orbit_closures(L) if is_group_type(C.as_loop())]
    R = _normal_join(L, parts)
    if verify:
        assert is_normal(L, R) and is_group_type(R.as_loop())
        if R.order > 1:
            Q, _ = quotient(L, R)
            assert group_type_radical(Q, verify=False).order == 1
    return R


def gr_p(L, p, verify=True):
    """Product of all normal subloops for which ``p`` is a Sylow prime."""
    if sylow_verdict(L, p).sylow:
        return whole(L)
    parts = [C for C in _orbit_closures(L) if sylow_verdict(C.as_loop(), p).sylow]
    R = _normal_join(L, parts)
    if verify:
        assert is_normal(L, R) and sylow_verdict(R.as_loop(), p).sylow
        Q, _ = quotient(L, R)
        assert not (Q.element_orders % p == 0).any()
    return R


def find_quasi_p_sylow(L, p):
    """Quasi-p-Sylow subloop: a p-Sylow subloop of ``gr_p(L)``."""
    G = gr_p(L, p)
    inner = find_p_sylow(G.as_loop(), p)
    S = Subloop(L, G.elems[inner.elems])
    assert S.order == quasi_sylow_order(L, p)
    return S


@dataclass
class SocleReport:
    socle: Subloop
    minimal: list
    kinds: list
    quotient_order: int
    quotient_elementary_2: bool

    @property
    def ok(self):
        return self.quotient_elementary_2 and all(isinstance(k, Paige) for k in self.kinds)

    def as_dict(self):
        return {"socle_order": self.socle.order,
                "minimal_orders": [m.order for m in self.minimal],
                "kinds": [str(k) for k in self.kinds],
                "quotient_order": self.quotient_order,
                "quotient_elementary_abelian_2": self.quotient_elementary_2,
                "ok": self.ok}


def socle_check(L):
    """Socle as the join of minimal normal subloops, for ``Gr(L) = 1``."""
    if group_type_radical(L).order != 1:
        raise RadicalNotTrivial("group-type radical is nontrivial")
    mins = minimal_normal_subloops(L)
    kinds = [decompose_chief_factor(m.as_loop())[0][0] for m in mins]
    soc = join(L, mins)
    Q, _ = quotient(L, soc)
    elem2 = bool(Q.is_commutative and is_associative(Q) and (Q.element_orders <= 2).all())
    return SocleReport(soc, mins, kinds, Q.order, elem2)
