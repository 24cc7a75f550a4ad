"""Finite loops stored as Cayley tables over element indices.

The identity of every :class:`FiniteLoop` is index 0. Tables are read-only
``int32`` numpy arrays, so most operations here are written as vectorised
gathers over rows and columns of the table rather than Python loops.

Maps on loop elements follow the right-action convention used for
permutations throughout the package: ``y L_x = x*y``, ``y R_x = y*x`` and a
product ``A B`` means "apply A, then B". As image arrays that is ``B[A]``.
"""

from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidParameter, NoIdentity, NotLatinSquare, NotNormal

INDEX_DTYPE = np.int32


class FiniteLoop:
    """A validated finite loop with identity 0.

    Construct through :func:`from_cayley_table`; the initializer trusts its
    input and only freezes it.
    """

    def __init__(self, table, labels=None, name=None):
        table = np.ascontiguousarray(table, dtype=INDEX_DTYPE)
        table.flags.writeable = False
        self.table = table
        self.order = int(table.shape[0])
        self.identity = 0
        self.labels = tuple(labels) if labels is not None else None
        self.name = name

    def __repr__(self):
        name = f" {self.name!r}" if self.name else ""
        return f"<FiniteLoop{name} of order {self.order}>"

    def __len__(self):
        return self.order

    def mul(self, x, y):
        return int(self.table[x, y])

    def label(self, x):
        return self.labels[x] if self.labels is not None else str(x)

    @cached_property
    def ldiv(self):
        """``ldiv[a, b] = a \\ b``, the unique ``x`` with ``a*x = b``."""
        t = np.argsort(self.table, axis=1).astype(INDEX_DTYPE)
        t.flags.writeable = False
        return t

    @cached_property
    def rdiv(self):
        """``rdiv[b, a] = b / a``, the unique ``x`` with ``x*a = b``."""
        t = np.argsort(self.table, axis=0).astype(INDEX_DTYPE)
        t.flags.writeable = False
        return t

    @cached_property
    def inverse(self):
        """Right inverses: ``x * inverse[x] == 0`` (two-sided for Moufang loops)."""
        inv = self.ldiv[:, 0].copy()
        inv.flags.writeable = False
        return inv

    @cached_property
    def element_orders(self):
        n, T = self.order, self.table
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        cur = np.arange(n)
        k = 1
        pending = np.arange(1, n)
        while pending.size:
            k += 1
            cur[pending] = T[cur[pending], pending]
            hit = cur[pending] == 0
            orders[pending[hit]] = k
            pending = pending[~hit]
            if k > n:
                raise InvalidParameter("element powers never reach the identity")
        orders.flags.writeable = False
        return orders

    @cached_property
    def is_commutative(self):
        return bool((self.table == self.table.T).all())

    @cached_property
    def fingerprint(self):
        """Cheap isomorphism invariant: order, flags and element-order histogram."""
        hist = tuple(sorted(np.unique(self.element_orders, return_counts=True)[1].tolist()))
        ords = tuple(np.unique(self.element_orders).tolist())
        return (self.order, is_associative(self), self.is_commutative, ords, hist)

    def power(self, x, k):
        r = 0
        for _ in range(k):
            r = int(self.table[r, x])
        return r


def from_cayley_table(table, labels=None, name=None):
    """Validate a square index table and return a :class:`FiniteLoop`.

    If the identity sits at some index ``e != 0``, indices ``0`` and ``e`` are
    swapped so that the returned loop has identity 0.
    """
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare("table must be a nonempty square array")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise NotLatinSquare("table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise NotLatinSquare("table entries out of range")
    r = np.arange(n)
    if not (np.sort(t, axis=1) == r).all() or not (np.sort(t, axis=0) == r[:, None]).all():
        raise NotLatinSquare("some row or column is not a permutation")
    row_ok = (t == r[None, :]).all(axis=1)
    col_ok = (t == r[:, None]).all(axis=0)
    ids = np.flatnonzero(row_ok & col_ok)
    if ids.size == 0:
        raise NoIdentity("no two-sided identity element")
    e = int(ids[0])
    if e != 0:
        perm = r.copy()
        perm[0], perm[e] = e, 0
        # perm is an involution, so it relabels both indices and values
        t = perm[t[np.ix_(perm, perm)]]
        if labels is not None:
            labels = [labels[i] for i in perm]
    return FiniteLoop(t, labels=labels, name=name)


class Subloop:
    """A closed subset of a parent loop, stored as sorted indices plus a mask."""

    def __init__(self, parent, elems):
        e = np.unique(np.asarray(elems, dtype=np.int64))
        e.flags.writeable = False
        self.parent = parent
        self.elems = e

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.elems] = True
        m.flags.writeable = False
        return m

    @property
    def order(self):
        return int(self.elems.size)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elems.tolist())

    def __contains__(self, x):
        return bool(self.mask[x])

    @cached_property
    def key(self):
        return self.elems.tobytes()

    def __hash__(self):
        return hash((id(self.parent), self.key))

    def __eq__(self, other):
        if not isinstance(other, Subloop):
            return NotImplemented
        return self.parent is other.parent and self.key == other.key

    def __le__(self, other):
        return bool(other.mask[self.elems].all())

    def __lt__(self, other):
        return self.order < other.order and self <= other

    def __repr__(self):
        return f"<Subloop of order {self.order} in {self.parent!r}>"

    def intersection(self, other):
        return Subloop(self.parent, self.elems[other.mask[self.elems]])

    def as_loop(self, name=None):
        """The subloop as a stand-alone :class:`FiniteLoop` (index order kept)."""
        P = self.parent
        pos = np.full(P.order, -1, dtype=np.int64)
        pos[self.elems] = np.arange(self.order)
        sub = pos[P.table[np.ix_(self.elems, self.elems)]]
        if (sub < 0).any():
            raise InvalidParameter("subset is not closed under the product")
        labels = [P.label(int(x)) for x in self.elems] if P.labels is not None else None
        return FiniteLoop(sub, labels=labels, name=name)

    def to_list(self):
        return self.elems.tolist()


def trivial_subloop(L):
    return Subloop(L, [0])


def whole(L):
    return Subloop(L, np.arange(L.order))


def is_moufang(L):
    """Exhaustive check of ``(x*y)*(z*x) == (x*(y*z))*x``.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` with the first violating
    triple in lexicographic order.
    """
    T = L.table
    for x in range(L.order):
        lhs = T[T[x]][:, T[:, x]]
        rhs = T[:, x][T[x][T]]
        bad = lhs != rhs
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return False, (x, int(y), int(z))
    return True, None


def associativity_witness(L, prefilter=2048, seed=0):
    """First triple with ``(xy)z != x(yz)``, or None.

    A random prefilter finds witnesses in nonassociative loops quickly; the
    returned triple is then the one found by the prefilter, not necessarily
    the lexicographically first.
    """
    T, n = L.table, L.order
    if prefilter and n > 8:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, prefilter))
        bad = np.flatnonzero(T[T[x, y], z] != T[x, T[y, z]])
        if bad.size:
            i = bad[0]
            return int(x[i]), int(y[i]), int(z[i])
    for x in range(n):
        bad = T[T[x]] != T[x][T]
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return x, int(y), int(z)
    return None


def is_associative(L):
    return associativity_witness(L) is None


def element_order(L, x):
    return int(L.element_orders[x])


def commutator(L, x, y):
    """The unique ``c`` with ``x*y = (y*x)*c``."""
    T = L.table
    return int(L.ldiv[T[y, x], T[x, y]])


def nucleus(L, prefilter=64, seed=0):
    """Elements that associate with every pair, in all three positions."""
    T, n = L.table, L.order
    cand = np.arange(n)
    if prefilter and n > 8:
        rng = np.random.default_rng(seed)
        xs, ys = rng.integers(0, n, size=(2, prefilter))
        A = cand[:, None]
        ok = (T[A, T[xs, ys]] == T[T[A, xs], ys]).all(axis=1)
        ok &= (T[T[xs, A], ys] == T[xs, T[A, ys]]).all(axis=1)
        ok &= (T[T[xs, ys], A] == T[xs, T[ys, A]]).all(axis=1)
        cand = cand[ok]
    keep = []
    for a in cand:
        a = int(a)
        if not (T[a][T] == T[T[a]]).all():
            continue
        if not (T[T[:, a]] == T[:, T[a]]).all():
            continue
        if not (T[:, a][T] == T[:, T[:, a]]).all():
            continue
        keep.append(a)
    return Subloop(L, keep)


def generated_subloop(L, gens, limit=None, allowed=None):
    """Least closed subset containing ``gens`` and the identity.

    ``limit`` aborts (returning None) once the closure exceeds that many
    elements; ``allowed`` is a boolean mask and aborts as soon as an element
    outside it appears. Both exist for the Sylow searches.
    """
    T, n = L.table, L.order
    start = np.unique(np.concatenate([[0], np.asarray(list(gens), dtype=np.int64)]))
    if allowed is not None and not allowed[start].all():
        return None
    if limit is not None and start.size > limit:
        return None
    mask = np.zeros(n, dtype=bool)
    mask[start] = True
    members = start
    frontier = start
    while frontier.size:
        cand = np.concatenate([T[np.ix_(frontier, members)].ravel(),
                               T[np.ix_(members, frontier)].ravel()])
        cand = np.unique(cand[~mask[cand]])
        if not cand.size:
            break
        if allowed is not None and not allowed[cand].all():
            return None
        if limit is not None and members.size + cand.size > limit:
            return None
        mask[cand] = True
        members = np.concatenate([members, cand])
        frontier = cand
    return Subloop(L, members)


def subloop(L, elems):
    """Wrap ``elems`` as a :class:`Subloop` after checking closure."""
    S = Subloop(L, np.concatenate([[0], np.asarray(list(elems), dtype=np.int64)]))
    if not S.mask[L.table[np.ix_(S.elems, S.elems)]].all():
        raise InvalidParameter("subset is not closed under the product")
    return S


def join(L, subloops):
    gens = [s.elems for s in subloops]
    return generated_subloop(L, np.concatenate(gens) if gens else [])


def left_coset_labels(L, N):
    """``lab[x] = min(x*N)``, the least element of each left coset."""
    return L.table[:, N.elems].min(axis=1)


def is_normal(L, N):
    """True iff the left cosets of ``N`` are the classes of a congruence.

    A subloop is normal exactly when it is the identity class of some
    congruence, and that congruence then has the left cosets ``xN`` as its
    classes, so checking the coset partition for compatibility with the
    product decides normality in O(n^2).
    """
    T = L.table
    lab = left_coset_labels(L, N)
    if not (lab[T[:, N.elems]] == lab[:, None]).all():
        return False
    counts = np.bincount(lab, minlength=L.order)
    if not (counts[counts > 0] == N.order).all():
        return False
    LT = lab[T]
    return bool((LT == LT[lab, :]).all() and (LT == LT[:, lab]).all())


def is_normal_by_inner_maps(L, N):
    """Normality as invariance under every ``T_x``, ``L_{x,y}``, ``R_{x,y}``.

    O(n^2 |N|); meant as an independent check on small loops.
    """
    for perm in inner_maps(L):
        if not N.mask[perm[N.elems]].all():
            return False
    return True


# --- inner mappings -------------------------------------------------------

def map_T(L, x):
    """``T_x = L_x^{-1} R_x``: ``y -> (x \\ y) * x``."""
    return L.table[:, x][L.ldiv[x]]


def map_L(L, x, y):
    """``L_{x,y} = L_x L_y L_{yx}^{-1}``: ``z -> (yx) \\ (y(xz))``."""
    T = L.table
    return L.ldiv[T[y, x]][T[y][T[x]]]


def map_R(L, x, y):
    """``R_{x,y} = R_x R_y R_{xy}^{-1}``: ``z -> ((zx)y) / (xy)``."""
    T = L.table
    return L.rdiv[:, T[x, y]][T[:, y][T[:, x]]]


def inner_maps(L, elems=None):
    """Yield ``T_x`` for every x, then ``L_{x,y}`` and ``R_{x,y}`` for all pairs.

    ``elems`` restricts the x, y ranging set (default: the whole loop).
    """
    xs = range(L.order) if elems is None else list(elems)
    for x in xs:
        yield map_T(L, x)
    for x in xs:
        for y in xs:
            yield map_L(L, x, y)
            yield map_R(L, x, y)


def generating_set(L):
    """Greedy generating set: scan indices upward, keep those not yet generated."""
    cached = getattr(L, "_gens", None)
    if cached is not None:
        return cached
    gens = []
    S = trivial_subloop(L)
    for x in range(1, L.order):
        if S.order == L.order:
            break
        if not S.mask[x]:
            gens.append(x)
            S = generated_subloop(L, gens)
    L._gens = gens
    return gens


def _saturation_maps(L):
    """Stacked inner maps used to saturate candidate normal subloops.

    All ``T_x`` plus ``L_{x,y}``, ``R_{x,y}`` over a generating set. They need
    not generate the whole inner mapping group: every closure built from them
    is a lower bound and is confirmed with :func:`is_normal`.
    """
    cached = getattr(L, "_satmaps", None)
    if cached is not None:
        return cached
    X = generating_set(L)
    n = L.order
    # row x is T_x: y -> T[ldiv[x, y], x]
    rows = [L.table.T[np.arange(n)[:, None], L.ldiv]]
    extra = [map_L(L, x, y) for x in X for y in X] + [map_R(L, x, y) for x in X for y in X]
    if extra:
        rows.append(np.stack(extra))
    maps = np.ascontiguousarray(np.concatenate(rows).astype(INDEX_DTYPE))
    maps.flags.writeable = False
    L._satmaps = maps
    return maps


def inner_orbit_labels(L):
    """Orbit label (least element) of every point under the saturation maps."""
    cached = getattr(L, "_orbits", None)
    if cached is not None:
        return cached
    maps = _saturation_maps(L)
    n = L.order
    src = np.tile(np.arange(n), maps.shape[0])
    lab = _component_min(n, src, maps.ravel())
    L._orbits = lab
    return lab


def _component_min(n, u, v):
    g = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    _, comp = connected_components(g, directed=False)
    mins = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(mins, comp, np.arange(n))
    return mins[comp]


def _congruence_closure(L, seeds):
    """Identity class of the least congruence identifying ``seeds`` with 0."""
    T, n = L.table, L.order
    seeds = np.asarray(list(seeds), dtype=np.int64)
    u = np.concatenate([np.arange(n), np.zeros(seeds.size, dtype=np.int64)])
    v = np.concatenate([np.arange(n), seeds])
    while True:
        lab = _component_min(n, u, v)
        LT = lab[T]
        A, B = LT[lab, :], LT[:, lab]
        d1, d2 = LT != A, LT != B
        if not d1.any() and not d2.any():
            return Subloop(L, np.flatnonzero(lab == 0))
        u = np.concatenate([np.arange(n), LT[d1], LT[d2]])
        v = np.concatenate([lab, A[d1], B[d2]])


def normal_closure(L, gens):
    """Least normal subloop containing ``gens``.

    Alternates subloop generation with saturation under inner maps until a
    fixed point, then confirms normality; if the reduced map set was not
    enough, falls back to the exact congruence closure.
    """
    gens = list(gens)
    if not gens:
        return trivial_subloop(L)
    maps = _saturation_maps(L)
    S = generated_subloop(L, gens)
    while True:
        imgs = np.unique(maps[:, S.elems])
        if S.mask[imgs].all():
            break
        S = generated_subloop(L, imgs)
    if is_normal(L, S):
        return S
    return _congruence_closure(L, gens)


def minimal_normal_subloops(L):
    """Inclusion-minimal normal closures of single nonidentity elements.

    Sorted by order, then lexicographically by elements. Points in the same
    inner-map orbit share a normal closure, so one closure per orbit suffices.
    """
    if L.order == 1:
        return []
    lab = inner_orbit_labels(L)
    reps = np.unique(lab[lab != 0])
    found = {}
    for r in reps:
        C = normal_closure(L, [int(r)])
        found.setdefault(C.key, C)
    cands = sorted(found.values(), key=lambda s: (s.order, s.elems.tolist()))
    return [C for C in cands if not any(D < C for D in cands)]


def quotient(L, N):
    """Factor loop ``L/N`` and the projection (index -> coset index).

    Cosets are numbered by increasing least representative.
    """
    if not is_normal(L, N):
        raise NotNormal("subloop is not normal")
    lab = left_coset_labels(L, N)
    reps = np.unique(lab)
    pos = np.full(L.order, -1, dtype=np.int64)
    pos[reps] = np.arange(reps.size)
    proj = pos[lab]
    qt = proj[L.table[np.ix_(reps, reps)]]
    labels = None
    if L.labels is not None:
        labels = [L.label(int(r)) + "N" for r in reps]
    return FiniteLoop(qt, labels=labels), proj


def preimage(L, proj, S):
    """Full preimage in ``L`` of a subloop ``S`` of a quotient."""
    return Subloop(L, np.flatnonzero(S.mask[proj]))


def direct_product(L1, L2, name=None):
    """Componentwise product; ``(a, b)`` has index ``a*|L2| + b``."""
    n1, n2 = L1.order, L2.order
    T1 = L1.table.astype(np.int64)
    T2 = L2.table.astype(np.int64)
    t = (T1[:, None, :, None] * n2 + T2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    labels = None
    if L1.labels is not None or L2.labels is not None:
        labels = [f"({L1.label(a)},{L2.label(b)})" for a in range(n1) for b in range(n2)]
    nm = f"{L1.name}x{L2.name}" if name is None and L1.name and L2.name else name
    return FiniteLoop(t, labels=labels, name=nm)


def _derivation(L, gens):
    """Order in which closure under products reaches each element, with parents."""
    T = L.table
    known = [0] + [g for g in gens if g != 0]
    seen = {x: None for x in known}
    parents = {}
    i = 0
    while i < len(known):
        a = known[i]
        for b in known[: i + 1]:
            for c in (int(T[a, b]), int(T[b, a])):
                if c not in seen:
                    seen[c] = None
                    parents[c] = (a, b) if c == int(T[a, b]) else (b, a)
                    known.append(c)
        i += 1
    return known, parents


def find_isomorphism(L1, L2, max_order=60):
    """An isomorphism ``L1 -> L2`` as an index array, or None.

    Backtracks over images of a greedy generating set, pruning by element
    order and by partial homomorphism checks. Restricted to small loops.
    """
    if L1.order != L2.order or L1.fingerprint != L2.fingerprint:
        return None
    if L1.order > max_order:
        raise InvalidParameter(f"isomorphism search limited to order <= {max_order}")
    gens = generating_set(L1)
    order, parents = _derivation(L1, gens)
    o1, o2 = L1.element_orders, L2.element_orders
    T2 = L2.table

    def extend(assign):
        phi = {0: 0}
        phi.update(zip(gens, assign))
        for c in order:
            if c in phi or c not in parents:
                continue
            a, b = parents[c]
            if a not in phi or b not in phi:
                continue
            phi[c] = int(T2[phi[a], phi[b]])
        return phi

    def consistent(phi):
        if len(set(phi.values())) != len(phi):
            return False
        keys = np.array(list(phi))
        vals = np.array([phi[k] for k in keys])
        img = np.full(L1.order, -1, dtype=np.int64)
        img[keys] = vals
        prod = L1.table[np.ix_(keys, keys)]
        known = img[prod]
        ok = known >= 0
        return bool((known[ok] == T2[np.ix_(vals, vals)][ok]).all())

    def search(assign):
        if len(assign) == len(gens):
            phi = extend(assign)
            if len(phi) != L1.order or not consistent(phi):
                return None
            img = np.array([phi[i] for i in range(L1.order)])
            return img
        g = gens[len(assign)]
        for y in np.flatnonzero(o2 == o1[g]):
            y = int(y)
            if y in assign:
                continue
            trial = assign + [y]
            if not consistent(extend(trial)):
                continue
            res = search(trial)
            if res is not None:
                return res
        return None

    return search([])


def is_isomorphic(L1, L2, max_order=60):
    return find_isomorphism(L1, L2, max_order) is not None
