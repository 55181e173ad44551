"""Weyl groups: explicit enumeration and a stabilizer-chain oracle.

The two engines share nothing but the simple reflections.  Enumeration
closes the reflection matrices under multiplication; the stabilizer chain
works on the permutation action of those reflections on the coroot list.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import LatticeMap, MatrixSet, matmul_checked
from .rootsystem import LieType, RootSystem

log = logging.getLogger(__name__)

FAN_SCOPE_ORDER = 60_000
E7_ORDER = 2_903_040


class CapExceeded(RuntimeError):
    pass


class NotCorootAutomorphism(ValueError):
    """The map does not send the coroot set onto itself."""


# --------------------------------------------------------------------------
# permutations as tuples: p[x] is the image of x; mul(p, q) applies p first


def perm_mul(p, q):
    return tuple(q[x] for x in p)


def perm_inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_identity(n: int):
    return tuple(range(n))


@dataclass(frozen=True)
class CorootPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a bijection")

    def __len__(self):
        return len(self.images)

    def fixed_points(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i == x]

    def cycle_type(self) -> tuple[int, ...]:
        seen = set()
        lengths = []
        for i in range(len(self.images)):
            if i in seen:
                continue
            j, k = i, 0
            while j not in seen:
                seen.add(j)
                j = self.images[j]
                k += 1
            lengths.append(k)
        return tuple(sorted(lengths, reverse=True))


def coroot_images(mats: np.ndarray, rs: RootSystem) -> np.ndarray:
    """Coroot-index images of a stack of matrices; -1 where a coroot leaves Ř."""
    mats = np.asarray(mats, dtype=np.int64).reshape(-1, rs.rank, rs.rank)
    imgs = matmul_checked(mats, rs.coroot_array.T)  # (k, n, |Ř|)
    keys, bound, weights = rs.coroot_keys
    inrange = (np.abs(imgs) <= bound).all(axis=1)
    packed = np.einsum("kna,n->ka", imgs + bound, weights)
    pos = np.searchsorted(keys[0], packed)
    pos[pos >= keys[0].size] = 0
    hit = inrange & (keys[0][pos] == packed)
    return np.where(hit, keys[1][pos], -1)


def coroot_permutation(m: LatticeMap | np.ndarray, rs: RootSystem) -> CorootPermutation:
    img = coroot_images(np.asarray(m.entries if isinstance(m, LatticeMap) else m), rs)[0]
    if (img < 0).any() or len(set(img.tolist())) != len(img):
        raise NotCorootAutomorphism("map does not permute the coroot system")
    return CorootPermutation(tuple(int(x) for x in img))


# --------------------------------------------------------------------------
# breadth-first enumeration


def enumerate_elements(gens, cap: int) -> MatrixSet:
    """The group generated by ``gens``, closed by right multiplication."""
    gens = [np.array(g.entries if isinstance(g, LatticeMap) else g, dtype=np.int64) for g in gens]
    n = gens[0].shape[0]
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes()}
    found = [ident[None]]
    frontier = ident[None]
    while frontier.shape[0]:
        fresh = []
        for g in gens:
            prods = matmul_checked(frontier, g)
            for m in prods:
                b = m.tobytes()
                if b not in seen:
                    seen.add(b)
                    fresh.append(m)
            if len(seen) > cap:
                raise CapExceeded(f"group order exceeds cap {cap}")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, n, n)
        found.append(frontier)
    return MatrixSet(np.concatenate(found))


# --------------------------------------------------------------------------
# stabilizer chain


@dataclass
class _Level:
    point: int
    gens: list = field(default_factory=list)
    reps: dict = field(default_factory=dict)  # orbit point -> perm sending base point there
    inv_reps: dict = field(default_factory=dict)
    checked: set = field(default_factory=set)

    def extend_orbit(self, degree):
        if not self.reps:
            ident = perm_identity(degree)
            self.reps[self.point] = ident
            self.inv_reps[self.point] = ident
        queue = list(self.reps)
        while queue:
            gamma = queue.pop()
            u = self.reps[gamma]
            for s in self.gens:
                delta = s[gamma]
                if delta not in self.reps:
                    rep = perm_mul(u, s)
                    self.reps[delta] = rep
                    self.inv_reps[delta] = perm_inv(rep)
                    queue.append(delta)


class StabilizerChain:
    """Base and strong generating set by deterministic Schreier-Sims.

    New base points are the smallest point moved by the generator that
    forced the extension, so the chain depends only on the input order.
    """

    def __init__(self, gens, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []
        gens = [tuple(g) for g in gens if tuple(g) != perm_identity(degree)]
        for g in gens:
            if all(g[lv.point] == lv.point for lv in self.levels):
                self.levels.append(_Level(self._first_moved(g)))
        for i, lv in enumerate(self.levels):
            lv.gens = [g for g in gens if all(g[self.levels[j].point] == self.levels[j].point for j in range(i))]
            lv.extend_orbit(degree)
        self._schreier_sims()

    def _first_moved(self, g) -> int:
        return next(x for x in range(self.degree) if g[x] != x)

    def _schreier_sims(self):
        i = len(self.levels) - 1
        while i >= 0:
            restart = self._check_level(i)
            i = restart if restart is not None else i - 1

    def _check_level(self, i):
        lv = self.levels[i]
        for beta in list(lv.reps):
            u = lv.reps[beta]
            for si, s in enumerate(lv.gens):
                if (beta, si) in lv.checked:
                    continue
                h = perm_mul(perm_mul(u, s), lv.inv_reps[s[beta]])
                lv.checked.add((beta, si))
                if h == perm_identity(self.degree):
                    continue
                y, j = self.strip(h, i + 1)
                if j < len(self.levels) or y != perm_identity(self.degree):
                    if j == len(self.levels):
                        self.levels.append(_Level(self._first_moved(y)))
                    for lvl in range(i + 1, j + 1):
                        self.levels[lvl].gens.append(y)
                        self.levels[lvl].extend_orbit(self.degree)
                    return j
        return None

    def strip(self, g, start: int = 0):
        """Sift ``g`` down the chain; returns the residue and the level reached."""
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            beta = g[lv.point]
            if beta not in lv.reps:
                return g, j
            g = perm_mul(g, lv.inv_reps[beta])
        return g, len(self.levels)

    def contains(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        y, j = self.strip(g)
        return j == len(self.levels) and y == perm_identity(self.degree)

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_lengths(self) -> list[int]:
        return [len(lv.reps) for lv in self.levels]

    @property
    def order(self) -> int:
        out = 1
        for k in self.orbit_lengths:
            out *= k
        return out

    def verify(self) -> bool:
        """Re-derive every basic orbit and re-sift every Schreier generator."""
        ident = perm_identity(self.degree)
        for i, lv in enumerate(self.levels):
            orbit = {lv.point}
            queue = [lv.point]
            while queue:
                x = queue.pop()
                for s in lv.gens:
                    if s[x] not in orbit:
                        orbit.add(s[x])
                        queue.append(s[x])
            if orbit != set(lv.reps):
                return False
            for beta, u in lv.reps.items():
                if u[lv.point] != beta:
                    return False
                for s in lv.gens:
                    h = perm_mul(perm_mul(u, s), lv.inv_reps[s[beta]])
                    y, j = self.strip(h, i + 1)
                    if j != len(self.levels) or y != ident:
                        return False
        return True


def order_schreier_sims(perms, degree: int | None = None) -> int:
    perms = [p.images if isinstance(p, CorootPermutation) else tuple(p) for p in perms]
    if degree is None:
        degree = len(perms[0])
    return StabilizerChain(perms, degree).order


# --------------------------------------------------------------------------


@dataclass
class WeylGroup:
    root_system: RootSystem
    generators: tuple[LatticeMap, ...]
    coroot_action: tuple[CorootPermutation, ...]
    elements: MatrixSet | None = None

    @classmethod
    def build(cls, rs: RootSystem, enumerate: bool = True, cap: int = FAN_SCOPE_ORDER) -> WeylGroup:
        gens = rs.reflections
        action = tuple(coroot_permutation(g, rs) for g in gens)
        w = cls(rs, gens, action)
        if enumerate:
            w.enumerate(cap)
        return w

    def enumerate(self, cap: int = FAN_SCOPE_ORDER) -> MatrixSet:
        if self.elements is None:
            self.elements = enumerate_elements(self.generators, cap)
        return self.elements

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain([p.images for p in self.coroot_action], len(self.root_system.coroots))

    @property
    def order(self) -> int:
        if self.elements is not None:
            return len(self.elements)
        return self.chain.order

    @property
    def rank(self) -> int:
        return self.root_system.rank

    def is_member(self, m) -> bool:
        """Membership via sifting the coroot permutation through the chain."""
        try:
            p = coroot_permutation(m, self.root_system)
        except NotCorootAutomorphism:
            return False
        return self.chain.contains(p.images)

    def members(self, mats: np.ndarray) -> np.ndarray:
        imgs = coroot_images(mats, self.root_system)
        out = np.zeros(imgs.shape[0], dtype=bool)
        for e, row in enumerate(imgs):
            if (row >= 0).all() and len(set(row.tolist())) == row.size:
                out[e] = self.chain.contains(tuple(row.tolist()))
        return out


def weyl_order_bound(t: LieType) -> int:
    """|W| from the stabilizer chain, without enumerating anything."""
    rs = RootSystem.build(t)
    return WeylGroup.build(rs, enumerate=False).chain.order
