"""Permutation groups via a deterministic Schreier-Sims stabilizer chain.

Permutations are numpy index arrays ``p`` acting on the right: the image of
``i`` is ``p[i]``, and the product ``p*q`` (first ``p``, then ``q``) is the
array ``q[p]``.
"""

import numpy as np

from .errors import DegreeMismatch
from .loopcore import inner_maps

PERM_DTYPE = np.int32


def perm_mul(p, q):
    return q[p]


def perm_inv(p):
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size, dtype=p.dtype)
    return inv


def is_identity(p):
    return bool((p == np.arange(p.size)).all())


def perm_order(p):
    """Order of a permutation, as the lcm of its cycle lengths."""
    seen = np.zeros(p.size, dtype=bool)
    o = 1
    for i in range(p.size):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        o = np.lcm(o, n)
    return int(o)


class _Level:
    """One level of the chain: base point, strong generators, Schreier vector."""

    def __init__(self, base, degree):
        self.base = base
        self.degree = degree
        self.gens = []
        self.inv_gens = []
        self.checked = set()
        self._reset_orbit()

    def _reset_orbit(self):
        self.back = np.full(self.degree, -2, dtype=np.int64)
        self.back[self.base] = -1
        self.orbit = [self.base]
        self._u = {}
        self._uinv = {}
        self.checked = set()

    def add(self, g):
        self.gens.append(g)
        self.inv_gens.append(perm_inv(g))
        self.recompute()

    def recompute(self):
        self._reset_orbit()
        orbit, back = self.orbit, self.back
        i = 0
        while i < len(orbit):
            x = orbit[i]
            for k, g in enumerate(self.gens):
                y = int(g[x])
                if back[y] == -2:
                    back[y] = k
                    orbit.append(y)
            i += 1

    def __contains__(self, pt):
        return self.back[pt] != -2

    def transversal(self, pt):
        """Element mapping the base point to ``pt``, rebuilt from the tree."""
        u = self._u.get(pt)
        if u is not None:
            return u
        path = []
        x = pt
        while self.back[x] >= 0 and x not in self._u:
            k = int(self.back[x])
            path.append(k)
            x = int(self.inv_gens[k][x])
        u = self._u.get(x)
        if u is None:
            u = np.arange(self.degree, dtype=PERM_DTYPE)
        for k in reversed(path):
            u = self.gens[k][u]
            x = int(u[self.base])
            self._u[x] = u
        self._u[pt] = u
        return u

    def transversal_inv(self, pt):
        ui = self._uinv.get(pt)
        if ui is None:
            ui = perm_inv(self.transversal(pt))
            self._uinv[pt] = ui
        return ui


class PermGroup:
    """Group generated by ``generators`` on points ``0 .. degree-1``.

    The stabilizer chain is built on first use. ``order`` is a Python int.
    """

    def __init__(self, generators, degree=None):
        gens = []
        for g in generators:
            g = np.asarray(g, dtype=PERM_DTYPE)
            if degree is None:
                degree = g.size
            if g.size != degree:
                raise DegreeMismatch(f"generator of degree {g.size}, expected {degree}")
            gens.append(g)
        if degree is None:
            raise ValueError("degree needed for a group without generators")
        self.degree = degree
        self.generators = gens
        self._levels = None

    def __repr__(self):
        return f"<PermGroup degree={self.degree} gens={len(self.generators)}>"

    # --- chain construction ------------------------------------------------

    @property
    def levels(self):
        if self._levels is None:
            self._levels = []
            for g in self.generators:
                self._absorb(g)
        return self._levels

    def _sift(self, h, start=0):
        levels = self._levels
        for j in range(start, len(levels)):
            lv = levels[j]
            x = int(h[lv.base])
            if x not in lv:
                return h, j
            h = lv.transversal_inv(x)[h]
        return h, len(levels)

    def _new_level_for(self, h):
        moved = np.flatnonzero(h != np.arange(self.degree))
        self._levels.append(_Level(int(moved[0]), self.degree))

    def _add_strong(self, h, upto):
        """Add ``h`` (fixing the first ``upto`` base points) to levels ``0..upto``."""
        if upto == len(self._levels):
            self._new_level_for(h)
        for lv in self._levels[: upto + 1]:
            lv.add(h)

    def _absorb(self, g):
        if is_identity(g):
            return
        h, j = self._sift(g)
        if j == len(self._levels) and is_identity(h):
            return
        self._add_strong(h, j)
        self._close(j)

    def _close(self, i):
        """Schreier-Sims main loop, working upward from level ``i``."""
        levels = self._levels
        while i >= 0:
            lv = levels[i]
            restart = None
            for beta in list(lv.orbit):
                u = lv.transversal(beta)
                for k, s in enumerate(lv.gens):
                    if (beta, k) in lv.checked:
                        continue
                    img = int(s[beta])
                    h = lv.transversal_inv(img)[s[u]]
                    r, j = self._sift(h, i + 1)
                    if j == len(levels) and is_identity(r):
                        lv.checked.add((beta, k))
                        continue
                    if j == len(levels):
                        self._new_level_for(r)
                    for l in range(i + 1, j + 1):
                        levels[l].add(r)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    # --- queries ------------------------------------------------------------

    @property
    def base(self):
        return [lv.base for lv in self.levels]

    @property
    def strong_generators(self):
        return self.levels[0].gens if self.levels else []

    def orbit_lengths(self):
        return [len(lv.orbit) for lv in self.levels]

    def order(self):
        o = 1
        for n in self.orbit_lengths():
            o *= n
        return o

    def sift(self, p):
        """Residue and level reached when sifting ``p`` through the chain."""
        p = np.asarray(p, dtype=PERM_DTYPE)
        if p.size != self.degree:
            raise DegreeMismatch(f"permutation of degree {p.size}, group degree {self.degree}")
        self.levels
        return self._sift(p)

    def contains(self, p):
        r, j = self.sift(p)
        return j == len(self.levels) and is_identity(r)

    __contains__ = contains

    def is_transitive(self):
        return self.degree <= 1 or self._orbit_of(0) == self.degree

    def _orbit_of(self, pt):
        seen = {pt}
        stack = [pt]
        while stack:
            x = stack.pop()
            for g in self.generators:
                y = int(g[x])
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen)

    def random_element(self, rng):
        """Uniform element as a product of random transversal elements."""
        p = np.arange(self.degree, dtype=PERM_DTYPE)
        for lv in reversed(self.levels):
            u = lv.transversal(lv.orbit[int(rng.integers(len(lv.orbit)))])
            p = u[p]
        return p


# --- loop-derived groups -------------------------------------------------------

def translations(L, x):
    """Left and right translations ``(L_x, R_x)`` of a loop element."""
    return (np.asarray(L.table[x], dtype=PERM_DTYPE),
            np.asarray(L.table[:, x], dtype=PERM_DTYPE))


def inner_generators(L):
    """All ``T_x``, ``L_{x,y}``, ``R_{x,y}``; a lazy iterator of O(n^2) perms."""
    for p in inner_maps(L):
        yield np.asarray(p, dtype=PERM_DTYPE)


def _dedup(perms):
    seen = set()
    for p in perms:
        k = p.tobytes()
        if k not in seen:
            seen.add(k)
            yield p


def multiplication_group(L):
    cached = getattr(L, "_mlt", None)
    if cached is None:
        gens = []
        for x in range(1, L.order):
            gens.extend(translations(L, x))
        cached = PermGroup(list(_dedup(gens)), degree=L.order)
        L._mlt = cached
    return cached


def inner_mapping_group(L):
    cached = getattr(L, "_inn", None)
    if cached is None:
        cached = PermGroup([], degree=L.order)
        cached._levels = []
        for g in _dedup(inner_generators(L)):
            cached._absorb(g)
        cached.generators = cached.strong_generators
        L._inn = cached
    return cached
