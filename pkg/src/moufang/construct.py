"""Builders for concrete loops: Paige loops from Zorn vector matrices, the
two-fold extension of M(q) for odd q, Chein doubles, and stock groups.
"""

from dataclasses import dataclass
from functools import lru_cache
import re

import numpy as np

from .errors import NotAGroup, TableTooLarge, UnknownName, UnsupportedFieldSize, InvalidParameter
from .fields import gf
from .loopcore import (FiniteLoop, Subloop, direct_product, from_cayley_table,
                       is_associative, is_moufang)

MAX_TABLE_ORDER = 4096

# coordinate order of a flattened Zorn matrix
ZORN_COORDS = ("a", "v0", "v1", "v2", "w0", "w1", "w2", "b")
IDENTITY_ZORN = (1, 0, 0, 0, 0, 0, 0, 1)


def paige_order(q):
    d = 2 if q % 2 else 1
    return q**3 * (q**4 - 1) // d


@dataclass(frozen=True)
class ZornMatrix:
    a: int
    v: tuple
    w: tuple
    b: int

    @classmethod
    def from_flat(cls, t):
        t = tuple(int(c) for c in t)
        return cls(t[0], t[1:4], t[4:7], t[7])

    def flat(self):
        return (self.a, *self.v, *self.w, self.b)


def _dot(F, u, v):
    s = 0
    for x, y in zip(u, v):
        s = int(F.add[s, F.mul[x, y]])
    return s


def _cross(F, u, v):
    m, sub = F.mul, F.sub
    return (int(sub[m[u[1], v[2]], m[u[2], v[1]]]),
            int(sub[m[u[2], v[0]], m[u[0], v[2]]]),
            int(sub[m[u[0], v[1]], m[u[1], v[0]]]))


def _vadd(F, *vs):
    out = (0, 0, 0)
    for v in vs:
        out = tuple(int(F.add[x, y]) for x, y in zip(out, v))
    return out


def _smul(F, c, v):
    return tuple(int(F.mul[c, x]) for x in v)


def zorn_multiply(x, y, F):
    """Product of two Zorn vector matrices over the field ``F``.

    (a1 v1; w1 b1)(a2 v2; w2 b2) =
        (a1a2 + v1.w2        a1v2 + b2v1 - w1 x w2;
         a2w1 + b1w2 + v1xv2  b1b2 + w1.v2)
    """
    neg = lambda v: tuple(int(F.neg[c]) for c in v)
    a = int(F.add[F.mul[x.a, y.a], _dot(F, x.v, y.w)])
    v = _vadd(F, _smul(F, x.a, y.v), _smul(F, y.b, x.v), neg(_cross(F, x.w, y.w)))
    w = _vadd(F, _smul(F, y.a, x.w), _smul(F, x.b, y.w), _cross(F, x.v, y.v))
    b = int(F.add[F.mul[x.b, y.b], _dot(F, x.w, y.v)])
    return ZornMatrix(a, v, w, b)


def zorn_det(x, F):
    return int(F.sub[F.mul[x.a, x.b], _dot(F, x.v, x.w)])


# --- vectorised forms on (N, 8) code arrays ---------------------------------

def _vdot(F, U, V):
    M, A = F.mul, F.add
    return A[A[M[U[:, 0], V[:, 0]], M[U[:, 1], V[:, 1]]], M[U[:, 2], V[:, 2]]]


def _vcross(F, U, V):
    M, S = F.mul, F.sub
    return np.stack([S[M[U[:, 1], V[:, 2]], M[U[:, 2], V[:, 1]]],
                     S[M[U[:, 2], V[:, 0]], M[U[:, 0], V[:, 2]]],
                     S[M[U[:, 0], V[:, 1]], M[U[:, 1], V[:, 0]]]], axis=1)


def zorn_multiply_array(X, Y, F):
    """Row-wise :func:`zorn_multiply` on broadcast ``(N, 8)`` arrays."""
    X, Y = np.broadcast_arrays(np.asarray(X), np.asarray(Y))
    M, A, S = F.mul, F.add, F.sub
    a1, v1, w1, b1 = X[:, 0], X[:, 1:4], X[:, 4:7], X[:, 7]
    a2, v2, w2, b2 = Y[:, 0], Y[:, 1:4], Y[:, 4:7], Y[:, 7]
    a = A[M[a1, a2], _vdot(F, v1, w2)]
    v = S[A[M[a1[:, None], v2], M[b2[:, None], v1]], _vcross(F, w1, w2)]
    w = A[A[M[a2[:, None], w1], M[b1[:, None], w2]], _vcross(F, v1, v2)]
    b = A[M[b1, b2], _vdot(F, w1, v2)]
    return np.concatenate([a[:, None], v, w, b[:, None]], axis=1)


def zorn_det_array(X, F):
    return F.sub[F.mul[X[:, 0], X[:, 7]], _vdot(F, X[:, 1:4], X[:, 4:7])]


def _codes(X, q):
    return (X * (q ** np.arange(7, -1, -1))).sum(axis=1)


def _all_zorn(q):
    return np.indices((q,) * 8).reshape(8, -1).T.astype(np.int64)


@dataclass
class _ZornClasses:
    q: int
    reps: np.ndarray        # (n, 8) canonical representatives, identity first
    class_of: np.ndarray    # code -> class index, -1 for non-members
    dets: np.ndarray        # determinant of each representative


def _zorn_classes(q, det_one):
    F = gf(q)
    allm = _all_zorn(q)
    d = zorn_det_array(allm, F)
    if det_one:
        members = d == 1
        scalars = [c for c in range(1, q) if F.mul[c, c] == 1]
    else:
        members = d != 0
        scalars = list(range(1, q))
    X = allm[members]
    canon = np.min(np.stack([_codes(F.mul[c, X], q) for c in scalars]), axis=0)
    reps_codes = np.unique(canon)
    ident = int(_codes(np.array([IDENTITY_ZORN]), q)[0])
    reps_codes = np.concatenate([[ident], reps_codes[reps_codes != ident]])
    pos = {int(c): i for i, c in enumerate(reps_codes)}
    class_of = np.full(q**8, -1, dtype=np.int64)
    class_of[_codes(X, q)] = [pos[int(c)] for c in canon]
    reps = allm[reps_codes]
    return _ZornClasses(q, reps, class_of, zorn_det_array(reps, F))


def _zorn_table(zc, chunk=64):
    F = gf(zc.q)
    n = len(zc.reps)
    table = np.empty((n, n), dtype=np.int64)
    R = zc.reps
    for start in range(0, n, chunk):
        rows = R[start:start + chunk]
        X = np.repeat(rows, n, axis=0)
        Y = np.tile(R, (len(rows), 1))
        prod = zorn_multiply_array(X, Y, F)
        table[start:start + len(rows)] = zc.class_of[_codes(prod, zc.q)].reshape(len(rows), n)
    if (table < 0).any():
        raise InvalidParameter("Zorn product left the chosen class set")
    return table


def _zorn_labels(reps):
    return ["{}|{}{}{}|{}{}{}|{}".format(*r) for r in reps.tolist()]


@lru_cache(maxsize=None)
def _paige_classes(q):
    return _zorn_classes(q, det_one=True)


@lru_cache(maxsize=None)
def paige_loop(q, validate=True):
    """Paige loop M(q): determinant-one Zorn matrices modulo {+1, -1}.

    Only q <= 3 fits under the full-table cap; q in {4, 5} raise
    :class:`TableTooLarge` (use :func:`paige_elements` for their elements).
    """
    if q not in (2, 3, 4, 5):
        raise UnsupportedFieldSize(f"paige_loop supports q in {{2,3,4,5}}, got {q}")
    if paige_order(q) > MAX_TABLE_ORDER:
        raise TableTooLarge(f"M({q}) has order {paige_order(q)} > {MAX_TABLE_ORDER}")
    zc = _paige_classes(q)
    L = FiniteLoop(_zorn_table(zc), labels=_zorn_labels(zc.reps), name=f"M({q})")
    if validate:
        if L.order != paige_order(q):
            raise InvalidParameter(f"M({q}) built with order {L.order}")
        ok, bad = is_moufang(L)
        if not ok:
            raise InvalidParameter(f"M({q}) fails the Moufang identity at {bad}")
        if is_associative(L):
            raise InvalidParameter(f"M({q}) came out associative")
    return L


def paige_elements(q):
    """Canonical class representatives of M(q) as an ``(n, 8)`` array (no table)."""
    if q not in (2, 3, 4, 5):
        raise UnsupportedFieldSize(f"paige_elements supports q in {{2,3,4,5}}, got {q}")
    return _paige_classes(q).reps.copy()


@lru_cache(maxsize=None)
def _hat_classes(q):
    return _zorn_classes(q, det_one=False)


@lru_cache(maxsize=None)
def paige_hat(q, validate=False):
    """M(q).2 for odd q: invertible Zorn matrices modulo nonzero scalars.

    For even q this is :func:`paige_loop`. The Moufang check at order 2160
    takes minutes, so it only runs when ``validate`` is set.
    """
    if q % 2 == 0:
        return paige_loop(q)
    if q not in (3, 5):
        raise UnsupportedFieldSize(f"paige_hat supports q in {{2,3,4,5}}, got {q}")
    if 2 * paige_order(q) > MAX_TABLE_ORDER:
        raise TableTooLarge(f"M({q}).2 has order {2 * paige_order(q)} > {MAX_TABLE_ORDER}")
    zc = _hat_classes(q)
    L = FiniteLoop(_zorn_table(zc), labels=_zorn_labels(zc.reps), name=f"M({q}).2")
    if L.order != 2 * paige_order(q):
        raise InvalidParameter(f"M({q}).2 built with order {L.order}")
    if validate:
        ok, bad = is_moufang(L)
        if not ok:
            raise InvalidParameter(f"M({q}).2 fails the Moufang identity at {bad}")
    return L


def paige_hat_socle(q):
    """The index-2 subloop of ``paige_hat(q)`` made of square-determinant classes."""
    L = paige_hat(q)
    if q % 2 == 0:
        return Subloop(L, np.arange(L.order))
    zc = _hat_classes(q)
    sq = np.array(gf(q).squares)
    return Subloop(L, np.flatnonzero(np.isin(zc.dets, sq)))


def chein_double(G, name=None):
    """Chein double M(G, 2) on ``G u Gu`` (``gu`` has index ``|G| + g``).

    g*h = gh,  g*(hu) = (hg)u,  (gu)*h = (g h^-1)u,  (gu)*(hu) = h^-1 g
    """
    if not is_associative(G):
        raise NotAGroup("Chein doubling needs an associative loop")
    n, T, inv = G.order, G.table.astype(np.int64), G.inverse.astype(np.int64)
    t = np.empty((2 * n, 2 * n), dtype=np.int64)
    t[:n, :n] = T
    t[:n, n:] = n + T.T              # [g, h] -> h*g
    t[n:, :n] = n + T[:, inv]        # [g, h] -> g*h^-1
    t[n:, n:] = T[inv].T       # [g, h] -> h^-1 * g
    labels = None
    if G.labels is not None:
        labels = list(G.labels) + [f"{G.label(g)}u" for g in range(n)]
    return FiniteLoop(t, labels=labels, name=name or f"M({G.name},2)")


# --- stock groups -----------------------------------------------------------

def _table_from_elements(elems, mul, labels=None, name=None):
    """Cayley table of a finite group given its element list (identity first)."""
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    t = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            t[i, j] = index[mul(a, b)]
    return from_cayley_table(t, labels=labels, name=name)


def _perm_mul(p, q):
    return tuple(q[i] for i in p)


def _perm_closure(gens, degree):
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = _perm_mul(a, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)  # identity is lexicographically first


def _cycle_str(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [i], p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"


def _perm_group(gens, degree, name):
    elems = _perm_closure([tuple(g) for g in gens], degree)
    return _table_from_elements(elems, _perm_mul, labels=[_cycle_str(p) for p in elems], name=name)


def cyclic(n):
    r = np.arange(n)
    return FiniteLoop((r[:, None] + r[None, :]) % n, labels=[str(i) for i in range(n)], name=f"Z{n}")


def dihedral(n):
    """Dihedral group of order 2n; ``r^i s^j`` has index ``j*n + i``."""
    elems = [(i, j) for j in range(2) for i in range(n)]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (c if b == 0 else -c)) % n, (b + d) % 2)

    labels = [f"r{i}" + ("s" if j else "") for i, j in elems]
    return _table_from_elements(elems, mul, labels=labels, name=f"D{n}")


_QUAT = {  # unit * unit -> (sign, unit); units 0=1, 1=i, 2=j, 3=k
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8():
    elems = [(s, u) for u in range(4) for s in (1, -1)]

    def mul(x, y):
        (s1, u1), (s2, u2) = x, y
        if u1 == 0:
            s, u = 1, u2
        elif u2 == 0:
            s, u = 1, u1
        else:
            s, u = _QUAT[(u1, u2)]
        return (s * s1 * s2, u)

    labels = [("-" if s < 0 else "") + "1ijk"[u] for s, u in elems]
    return _table_from_elements(elems, mul, labels=labels, name="Q8")


def symmetric(n):
    if n <= 1:
        return cyclic(1)
    gens = [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]
    return _perm_group(gens, n, f"S{n}")


def alternating(n):
    if n <= 2:
        return cyclic(1)
    gens = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = i + 1, i + 2, i
        gens.append(tuple(p))
    return _perm_group(gens, n, f"A{n}")


def psl2(q):
    """PSL(2, q) as 2x2 determinant-one matrices modulo -1."""
    F = gf(q)
    M, S = F.mul, F.sub
    mats = [(a, b, c, d) for a in range(q) for b in range(q) for c in range(q) for d in range(q)
            if S[M[a, d], M[b, c]] == 1]
    neg = lambda m: tuple(int(F.neg[x]) for x in m)
    canon = sorted({min(m, neg(m)) for m in mats})

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        r = (int(F.add[M[a, e], M[b, g]]), int(F.add[M[a, f], M[b, h]]),
             int(F.add[M[c, e], M[d, g]]), int(F.add[M[c, f], M[d, h]]))
        return min(r, neg(r))

    ident = (1, 0, 0, 1)
    elems = [ident] + [m for m in canon if m != ident]
    return _table_from_elements(elems, mul, labels=[str(m) for m in elems], name=f"PSL2({q})")


_STOCK = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
    "psl2": psl2,
}


@lru_cache(maxsize=None)
def stock_group(name, n=None):
    """Cayley table of a named group.

    ``name`` is one of ``cyclic``, ``dihedral`` (order 2n), ``quaternion8``,
    ``symmetric`` and ``alternating`` (n <= 5), ``psl2`` (n = q), ``klein``.
    """
    if name == "quaternion8":
        return quaternion8()
    if name == "klein":
        return direct_product(cyclic(2), cyclic(2), name="K4")
    if name not in _STOCK:
        raise UnknownName(name)
    if n is None or n < 1:
        raise InvalidParameter(f"{name} needs a positive size parameter")
    if name in ("symmetric", "alternating") and n > 5:
        raise InvalidParameter(f"{name} groups limited to n <= 5")
    if name == "psl2" and n not in (2, 3, 4, 5, 7, 9):
        raise InvalidParameter(f"PSL2({n}) not supported")
    return _STOCK[name](n)


_GROUP_ALIASES = [
    (r"(?:cyclic-|z)(\d+)", "cyclic"),
    (r"(?:dihedral-|d)(\d+)", "dihedral"),
    (r"(?:symmetric-|s)(\d+)", "symmetric"),
    (r"(?:alternating-|a)(\d+)", "alternating"),
    (r"psl2-?(\d+)", "psl2"),
]


def named_group(spec):
    """Parse group names such as ``cyclic-6``, ``z6``, ``s3``, ``q8``, ``psl2-5``."""
    s = spec.lower()
    if s in ("quaternion8", "q8"):
        return stock_group("quaternion8")
    if s in ("klein", "k4"):
        return stock_group("klein")
    for pat, kind in _GROUP_ALIASES:
        m = re.fullmatch(pat, s)
        if m:
            return stock_group(kind, int(m.group(1)))
    raise UnknownName(spec)


def named_loop(name):
    """Resolve the construct names used by the command line.

    ``paige-q<q>``, ``paige-hat-q<q>``, ``chein-<group>``, ``group-<group>``.
    """
    s = name.lower()
    m = re.fullmatch(r"paige-q(\d+)", s)
    if m:
        return paige_loop(int(m.group(1)))
    m = re.fullmatch(r"paige-hat-q(\d+)", s)
    if m:
        return paige_hat(int(m.group(1)))
    if s.startswith("chein-"):
        G = named_group(s[len("chein-"):])
        return chein_double(G, name=f"M({G.name},2)")
    if s.startswith("group-"):
        return named_group(s[len("group-"):])
    raise UnknownName(name)
