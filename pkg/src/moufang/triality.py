"""Groups with triality and the Moufang loops they carry.

A group with triality is a group G with automorphisms sigma, rho satisfying
``rho^3 = sigma^2 = (rho sigma)^2 = 1`` and

    [x,sigma] [x,sigma]^rho [x,sigma]^(rho^2) = 1     for all x,

where ``[x,sigma] = x^-1 x^sigma``. The set M of all such commutators is a
Moufang loop under ``m.n = m^(-rho) n m^(-rho^2)``.

Carrier elements are integer codes ``0 .. size-1`` with 0 the identity, and
every carrier operation is vectorised over numpy code arrays. Maps act on
the right, so ``x^(rho sigma)`` means "apply rho, then sigma".
"""

from dataclasses import dataclass, field

import numpy as np

from .construct import alternating, cyclic, named_group
from .errors import (CarrierTooLarge, ClosureBudgetExceeded, InvalidParameter,
                     TrialityViolated)
from .fields import _is_prime
from .loopcore import (FiniteLoop, direct_product, from_cayley_table,
                       generated_subloop, is_moufang, minimal_normal_subloops)

MAX_CAYLEY = 5000
MAX_POWER = 4
DEFAULT_BUDGET = 10**6


# --- carriers -------------------------------------------------------------------

class CayleyGroup:
    """A group given by its Cayley table (a FiniteLoop that is associative)."""

    kind = "cayley"

    def __init__(self, group):
        if group.order > MAX_CAYLEY:
            raise CarrierTooLarge(f"Cayley carrier of order {group.order} > {MAX_CAYLEY}")
        self.group = group
        self.size = group.order

    def mul(self, x, y):
        return self.group.table[x, y]

    def inv(self, x):
        return self.group.inverse[x]

    def describe(self):
        return f"Cayley({self.group.name or self.size})"


class StructuredPower:
    """``V^n`` with componentwise product; code = sum of ``v_i * |V|**i``."""

    kind = "power"

    def __init__(self, base, n):
        if not 1 <= n <= MAX_POWER:
            raise InvalidParameter(f"exponent {n} outside 1..{MAX_POWER}")
        self.base = base
        self.n = n
        self.m = base.order
        self.size = self.m ** n
        self._w = self.m ** np.arange(n, dtype=np.int64)

    def decode(self, x):
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._w) % self.m

    def encode(self, d):
        return (np.asarray(d, dtype=np.int64) * self._w).sum(axis=-1)

    def mul(self, x, y):
        return self.encode(self.base.table[self.decode(x), self.decode(y)])

    def inv(self, x):
        return self.encode(self.base.inverse[self.decode(x)])

    def describe(self):
        return f"Power({self.base.name or self.m}^{self.n})"


class AbelianVector:
    """``Z_p^k`` written additively; code = sum of ``c_i * p**i``."""

    kind = "vector"

    def __init__(self, p, k):
        if not _is_prime(p):
            raise InvalidParameter(f"{p} is not prime")
        self.p = p
        self.k = k
        self.size = p ** k
        self._w = p ** np.arange(k, dtype=np.int64)

    def decode(self, x):
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._w) % self.p

    def encode(self, d):
        return ((np.asarray(d, dtype=np.int64) % self.p) * self._w).sum(axis=-1)

    def mul(self, x, y):
        return self.encode(self.decode(x) + self.decode(y))

    def inv(self, x):
        return self.encode(-self.decode(x))

    def describe(self):
        return f"Vector(Z{self.p}^{self.k})"


# --- automorphisms ----------------------------------------------------------------

class TableMap:
    """Arbitrary map given by its image array over carrier codes."""

    def __init__(self, images):
        self.images = np.asarray(images, dtype=np.int64)

    def __call__(self, x):
        return self.images[x]


class CoordinateMap:
    """On ``V^n``: coordinate ``j`` of the image is ``auto_j(x[perm[j]])``."""

    def __init__(self, carrier, perm, autos=None):
        self.carrier = carrier
        self.perm = list(perm)
        m = carrier.m
        self.autos = [np.arange(m) if a is None else np.asarray(a) for a in
                      (autos or [None] * carrier.n)]

    def __call__(self, x):
        d = self.carrier.decode(x)
        out = np.stack([self.autos[j][d[..., self.perm[j]]]
                        for j in range(self.carrier.n)], axis=-1)
        return self.carrier.encode(out)


class MatrixMap:
    """On ``Z_p^k``: row vector times matrix."""

    def __init__(self, carrier, matrix):
        self.carrier = carrier
        self.matrix = np.asarray(matrix, dtype=np.int64) % carrier.p

    def __call__(self, x):
        return self.carrier.encode(self.carrier.decode(x) @ self.matrix)


@dataclass
class TrialityGroup:
    carrier: object
    sigma: object
    rho: object
    name: str = ""

    @property
    def size(self):
        return self.carrier.size

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def mul(self, x, y):
        return self.carrier.mul(x, y)

    def inv(self, x):
        return self.carrier.inv(x)

    def sigma_commutators(self, x=None):
        """``[x, sigma] = x^-1 x^sigma`` for every (or the given) element."""
        x = self.elements() if x is None else np.asarray(x, dtype=np.int64)
        return self.mul(self.inv(x), self.sigma(x))

    def materialize(self):
        """Cayley-table form of the carrier, with sigma and rho as image arrays."""
        if self.size > MAX_CAYLEY:
            raise CarrierTooLarge(f"carrier of order {self.size} > {MAX_CAYLEY}")
        if isinstance(self.carrier, CayleyGroup):
            return self
        X = self.elements()
        table = self.mul(X[:, None], X[None, :])
        group = FiniteLoop(table, name=self.name or self.carrier.describe())
        return TrialityGroup(CayleyGroup(group), TableMap(self.sigma(X)),
                             TableMap(self.rho(X)), self.name)


@dataclass
class TrialityReport:
    relations_ok: bool
    automorphism_ok: bool
    identity_ok: bool
    coset_index: int
    violation: int = None
    loop: FiniteLoop = field(default=None, repr=False)
    embedding: np.ndarray = field(default=None, repr=False)

    @property
    def ok(self):
        return self.relations_ok and self.automorphism_ok and self.identity_ok

    def as_dict(self):
        d = {"relations_ok": self.relations_ok, "automorphism_ok": self.automorphism_ok,
             "identity_ok": self.identity_ok, "coset_index": self.coset_index,
             "violation": self.violation}
        if self.loop is not None:
            d["loop_order"] = self.loop.order
        return d


# --- verification -----------------------------------------------------------------

def _is_bijection(images, size):
    return images.shape == (size,) and np.array_equal(np.sort(images), np.arange(size))


def _table_is_hom(table, images, chunk=512):
    n = table.shape[0]
    for s in range(0, n, chunk):
        rows = table[s:s + chunk]
        if not (images[rows] == table[images[s:s + chunk, None], images[None, :]]).all():
            return False
    return True


def _automorphism_ok(G, f):
    c = G.carrier
    X = G.elements()
    if not _is_bijection(f(X), G.size):
        return False
    if isinstance(c, CayleyGroup):
        return _table_is_hom(c.group.table, f(X))
    if isinstance(c, StructuredPower):
        if not isinstance(f, CoordinateMap) or sorted(f.perm) != list(range(c.n)):
            return False
        return all(_is_bijection(a, c.m) and _table_is_hom(c.base.table, a) for a in f.autos)
    if isinstance(c, AbelianVector):
        # linear maps are homomorphisms; bijectivity was checked above
        return isinstance(f, MatrixMap)
    return False


def verify_triality(G, extract=True):
    """Check automorphisms, S3 relations and the triality identity.

    The reported violation is the least carrier code breaking the identity.
    When everything holds and ``extract`` is set, the loop is attached.
    """
    X = G.elements()
    s, r = G.sigma, G.rho
    relations_ok = bool((s(s(X)) == X).all() and (r(r(r(X))) == X).all()
                        and (s(r(s(r(X)))) == X).all())
    automorphism_ok = _automorphism_ok(G, s) and _automorphism_ok(G, r)
    c = G.sigma_commutators(X)
    t = G.mul(G.mul(c, r(c)), r(r(c)))
    bad = np.flatnonzero(t != 0)
    fixed = int((s(X) == X).sum())
    rep = TrialityReport(relations_ok, automorphism_ok, bad.size == 0,
                         coset_index=G.size // fixed,
                         violation=int(bad[0]) if bad.size else None)
    if rep.ok and extract:
        rep.loop, rep.embedding = moufang_from_triality(G, verified=True)
    return rep


def loop_elements(G):
    """Carrier codes of M = {[x, sigma]}, in first-found order."""
    c = G.sigma_commutators()
    _, first = np.unique(c, return_index=True)
    return c[np.sort(first)]


def moufang_from_triality(G, verified=False, check_moufang=True):
    """Loop M(G) under ``m.n = m^(-rho) n m^(-rho^2)`` plus its carrier embedding."""
    if not verified:
        rep = verify_triality(G, extract=False)
        if not rep.ok:
            raise TrialityViolated(f"not a group with triality: {rep.as_dict()}")
    M = loop_elements(G)
    k = M.size
    fixed = int((G.sigma(G.elements()) == G.elements()).sum())
    if k * fixed != G.size:
        raise TrialityViolated(f"|M| = {k} differs from |G:C_G(sigma)| = {G.size // fixed}")
    if not (G.sigma(M) == G.inv(M)).all():
        raise TrialityViolated("m^sigma != m^-1 for some m in M")
    a = G.inv(G.rho(M))
    b = G.inv(G.rho(G.rho(M)))
    prod = G.mul(G.mul(a[:, None], M[None, :]), b[:, None])
    order = np.argsort(M)
    pos = np.searchsorted(M[order], prod)
    if (pos >= k).any() or not (M[order][np.minimum(pos, k - 1)] == prod).all():
        raise TrialityViolated("M is not closed under the loop product")
    table = order[pos]
    loop = from_cayley_table(table, name=f"M({G.name or G.carrier.describe()})")
    if check_moufang and not is_moufang(loop)[0]:
        raise TrialityViolated("extracted loop is not Moufang")
    return loop, M


# --- identities on M ----------------------------------------------------------------

def conjugates_commute(G, M=None):
    """For all m in M: m, m^rho, m^(rho^2) pairwise commute."""
    M = loop_elements(G) if M is None else M
    trip = [M, G.rho(M), G.rho(G.rho(M))]
    for i in range(3):
        for j in range(i + 1, 3):
            if not (G.mul(trip[i], trip[j]) == G.mul(trip[j], trip[i])).all():
                return False
    return True


def dual_identity_holds(G, M=None):
    """``m^(-rho) n m^(-rho^2) == n^(-rho^2) m n^(-rho)`` for all m, n in M."""
    M = loop_elements(G) if M is None else M
    r1 = G.inv(G.rho(M))
    r2 = G.inv(G.rho(G.rho(M)))
    lhs = G.mul(G.mul(r1[:, None], M[None, :]), r2[:, None])
    rhs = G.mul(G.mul(r2[None, :], M[:, None]), r1[None, :])
    return bool((lhs == rhs).all())


# --- subgroups of the carrier -----------------------------------------------------

def subgroup_closure(G, gens, budget=DEFAULT_BUDGET):
    """Sorted carrier codes of the subgroup generated by ``gens``."""
    member = np.zeros(G.size, dtype=bool)
    member[0] = True
    elems = np.zeros(1, dtype=np.int64)
    essential = []
    for g in np.unique(np.asarray(list(gens), dtype=np.int64)):
        if member[g]:
            continue
        essential.append(g)
        gen_arr = np.asarray(essential)
        frontier = elems
        while True:
            new = np.unique(G.mul(frontier[:, None], gen_arr[None, :]).ravel())
            new = new[~member[new]]
            if not new.size:
                break
            member[new] = True
            elems = np.concatenate([elems, new])
            if elems.size > budget:
                raise ClosureBudgetExceeded(f"subgroup closure passed {budget} elements")
            frontier = new
    return np.flatnonzero(member)


def is_s_invariant(G, H):
    Hs = set(H.tolist())
    return set(G.sigma(H).tolist()) <= Hs and set(G.rho(H).tolist()) <= Hs


def _guard(G):
    if G.size > MAX_CAYLEY:
        raise CarrierTooLarge(f"carrier of order {G.size} > {MAX_CAYLEY}")


def commutator_with_S(G, H=None, check=True):
    """``[H, S]``: the subgroup generated by ``x^-1 x^tau``, tau in {sigma, rho}."""
    _guard(G)
    H = G.elements() if H is None else np.asarray(H, dtype=np.int64)
    gens = np.concatenate([G.mul(G.inv(H), G.sigma(H)), G.mul(G.inv(H), G.rho(H))])
    K = subgroup_closure(G, gens)
    if check and H.size == G.size:
        if not np.array_equal(commutator_with_S(G, K, check=False), K):
            raise TrialityViolated("[[G,S],S] != [G,S]")
    return K


def s_center(G):
    """``Z_S(G) = C_G([G,S]) ∩ Fix(sigma) ∩ Fix(rho)``."""
    _guard(G)
    K = commutator_with_S(G)
    X = G.elements()
    keep = (G.sigma(X) == X) & (G.rho(X) == X)
    for h in K:
        keep &= G.mul(X, h) == G.mul(h, X)
    return np.flatnonzero(keep)


def s_subgroup_closure(G, P, loop=None, embedding=None):
    """``Q = <P ∪ P^rho>`` for loop elements P given as carrier codes.

    Checks that Q is S-invariant and that M(Q) is the subloop generated by P.
    """
    P = np.asarray(list(P), dtype=np.int64)
    Q = subgroup_closure(G, np.concatenate([P, G.rho(P)]))
    if not is_s_invariant(G, Q):
        raise TrialityViolated("closure of P and P^rho is not S-invariant")
    if loop is None:
        loop, embedding = moufang_from_triality(G, verified=True, check_moufang=False)
    index = {int(c): i for i, c in enumerate(embedding)}
    sub = generated_subloop(loop, [index[int(c)] for c in P])
    mq = set(np.unique(G.sigma_commutators(Q)).tolist())
    if mq != {int(embedding[i]) for i in sub}:
        raise TrialityViolated("M(Q) differs from the subloop generated by P")
    return Q


def p_sylow_s_subgroups(G, p):
    """All p-Sylow subgroups of a Cayley carrier, with their S-invariance flags."""
    from .structure import sylow_subloops

    G = G.materialize()
    out = []
    for S in sylow_subloops(G.carrier.group, p):
        H = np.asarray(S.to_list(), dtype=np.int64)
        out.append((H, is_s_invariant(G, H)))
    return out


# --- extension by rho ------------------------------------------------------------

def rho_extension(G):
    """``G ⋊ <rho>`` as a Cayley carrier; element ``g rho^i`` has code ``i*|G| + g``."""
    G = G.materialize()
    n = G.size
    if 3 * n > MAX_CAYLEY:
        raise CarrierTooLarge(f"extension of order {3 * n} > {MAX_CAYLEY}")
    T = G.carrier.group.table
    X = np.arange(n)
    rpow = [X, G.rho(X), G.rho(G.rho(X))]
    table = np.empty((3 * n, 3 * n), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            # (g rho^i)(h rho^j) = g h^(rho^-i) rho^(i+j)
            h = rpow[(-i) % 3]
            table[i * n:(i + 1) * n, j * n:(j + 1) * n] = T[X[:, None], h[None, :]] + ((i + j) % 3) * n
    ext = FiniteLoop(table, name=f"{G.name}:rho")
    code = np.arange(3 * n)
    g, i = code % n, code // n
    sigma = G.sigma(g) + ((-i) % 3) * n
    rho = G.rho(g) + i * n
    return TrialityGroup(CayleyGroup(ext), TableMap(sigma), TableMap(rho), f"{G.name}:rho")


def rho_extension_is_triality(G):
    return verify_triality(rho_extension(G), extract=False).ok


def exponent3(loop):
    return bool(np.all(3 % loop.element_orders == 0))


# --- builders ---------------------------------------------------------------------

def _cayley_triality(group, sigma, rho, name):
    return TrialityGroup(CayleyGroup(group), TableMap(sigma), TableMap(rho), name)


def _is_simple_nonabelian(V):
    return not V.is_commutative and len(minimal_normal_subloops(V)) == 1 and \
        minimal_normal_subloops(V)[0].order == V.order


def build_s_simple(kind, p=None, V=None):
    """S-simple archetypes: ``trivial_action``, ``z3``, ``zpzp`` and ``wreath3``."""
    if kind == "trivial_action":
        V = alternating(5) if V is None else V
        ident = np.arange(V.order)
        return _cayley_triality(V, ident, ident, f"trivial({V.name})")
    if kind == "z3":
        Z = cyclic(3)
        return _cayley_triality(Z, Z.inverse, np.arange(3), "Z3")
    if kind == "zpzp":
        if p is None or not _is_prime(p):
            raise InvalidParameter(f"zpzp needs a prime p, got {p}")
        if p == 3:
            raise InvalidParameter("zpzp requires p != 3")
        C = AbelianVector(p, 2)
        return TrialityGroup(C, MatrixMap(C, [[0, 1], [1, 0]]),
                             MatrixMap(C, [[0, 1], [-1, -1]]), f"Z{p}xZ{p}")
    if kind == "wreath3":
        V = alternating(5) if V is None else V
        if not _is_simple_nonabelian(V):
            raise InvalidParameter(f"{V.name} is not a nonabelian simple group")
        C = StructuredPower(V, 3)
        return TrialityGroup(C, CoordinateMap(C, [1, 0, 2]), CoordinateMap(C, [2, 0, 1]),
                             f"{V.name}^3")
    raise InvalidParameter(f"unknown archetype {kind!r}")


def conjugation_action(group, x):
    """Image array of ``g -> x^-1 g x``."""
    T = group.table
    return T[T[group.inverse[x]], x]


def s3_inner_action():
    """S3 with sigma, rho acting as conjugation by a transposition and a 3-cycle."""
    G = named_group("s3")
    orders = G.element_orders
    t = int(np.flatnonzero(orders == 2)[0])
    r = int(np.flatnonzero(orders == 3)[0])
    return _cayley_triality(G, conjugation_action(G, t), conjugation_action(G, r), "S3-inner")


def triality_product(G1, G2):
    """Direct product of two triality groups with componentwise maps."""
    A, B = G1.materialize(), G2.materialize()
    L = direct_product(A.carrier.group, B.carrier.group)
    n2 = B.size
    X = np.arange(L.order)
    a, b = X // n2, X % n2
    sigma = A.sigma(a) * n2 + B.sigma(b)
    rho = A.rho(a) * n2 + B.rho(b)
    return _cayley_triality(L, sigma, rho, f"{A.name}x{B.name}")


ARCHETYPES = {
    "trivial-a5": lambda: build_s_simple("trivial_action"),
    "z3": lambda: build_s_simple("z3"),
    "zpzp-2": lambda: build_s_simple("zpzp", p=2),
    "zpzp-5": lambda: build_s_simple("zpzp", p=5),
    "zpzp-7": lambda: build_s_simple("zpzp", p=7),
    "wreath3-a5": lambda: build_s_simple("wreath3"),
    "s3-inner": s3_inner_action,
}


def named_archetype(name):
    try:
        return ARCHETYPES[name]()
    except KeyError:
        from .errors import UnknownName
        raise UnknownName(f"unknown triality archetype {name!r}; known: {sorted(ARCHETYPES)}")
