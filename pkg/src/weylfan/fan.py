"""The fan whose maximal cones are the Weyl chambers.

Rays live in a global table sorted lexicographically; a maximal cone is the
sorted tuple of its ray ids.  The fundamental chamber is the nonnegative
orthant spanned by the fundamental coweights (the standard basis).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd

import numpy as np

from . import _kernels
from .linalg import matmul_checked
from .rootsystem import RootSystem
from .weyl import WeylGroup


class OutOfFanScope(ValueError):
    pass


class BoundaryPoint(ValueError):
    """The point lies on a wall, so no chamber contains it strictly."""


def _row_index(table: np.ndarray) -> dict[bytes, int]:
    return {row.tobytes(): i for i, row in enumerate(np.ascontiguousarray(table))}


def _lookup(index: dict[bytes, int], rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return np.array([index.get(r.tobytes(), -1) for r in rows], dtype=np.int64)


def _pack_radix(num_rays: int, width: int) -> int | None:
    """Radix for packing sorted id rows into int64 keys, if they fit."""
    radix = max(num_rays, 2)
    return radix if radix ** max(width, 1) < 2**62 else None


@dataclass(frozen=True, eq=False)
class WeylFan:
    root_system: RootSystem
    rays: np.ndarray  # (R, n) primitive generators, sorted
    max_cones: np.ndarray  # (|W|, n) sorted ray ids, rows sorted
    chamber_of: np.ndarray  # cone index -> index into weyl.elements
    fundamental: int
    weyl: WeylGroup

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @cached_property
    def ray_index(self) -> dict[bytes, int]:
        return _row_index(self.rays)

    @cached_property
    def cone_index(self) -> dict[bytes, int]:
        return _row_index(self.max_cones)

    def ray_id(self, v) -> int:
        return self.ray_index[np.asarray(tuple(v), dtype=np.int64).tobytes()]

    def ray_matrices(self) -> np.ndarray:
        """Stack of matrices whose columns are each cone's ray generators."""
        return np.transpose(self.rays[self.max_cones], (0, 2, 1))

    @cached_property
    def inverse_ray_matrices(self) -> np.ndarray:
        """Exact integer inverses, certified by multiplying back."""
        mats = self.ray_matrices()
        approx = np.rint(np.linalg.inv(mats.astype(np.float64))).astype(np.int64)
        prod = matmul_checked(approx, mats)
        if not (prod == np.eye(self.rank, dtype=np.int64)).all():
            raise ArithmeticError("a chamber has no integral inverse; fan is not smooth")
        return approx

    def ray_permutation(self, m) -> np.ndarray | None:
        """Ray-id images under a lattice map, or None if a ray leaves the table."""
        m = np.asarray(m.entries if hasattr(m, "entries") else m, dtype=np.int64)
        imgs = matmul_checked(self.rays, m.T)
        ids = _lookup(self.ray_index, imgs)
        return None if (ids < 0).any() else ids

    def permutes_cones(self, m) -> bool:
        """Whether ``m`` maps the set of maximal cones onto itself."""
        perm = self.ray_permutation(m)
        if perm is None:
            return False
        mapped = _kernels.map_cones(perm, self.max_cones)
        mapped = mapped[np.lexsort(mapped.T[::-1])]
        return bool((mapped == self.max_cones).all())

    def cone_of_map(self, mats: np.ndarray) -> np.ndarray:
        """Cone index of ``g·C0`` for each matrix ``g``, -1 if not a cone."""
        mats = np.asarray(mats, dtype=np.int64)
        k, n = mats.shape[0], self.rank
        cols = np.transpose(mats, (0, 2, 1)).reshape(-1, n)
        ids = _lookup(self.ray_index, cols).reshape(k, n)
        out = np.full(k, -1, dtype=np.int64)
        good = (ids >= 0).all(axis=1)
        if good.any():
            cones = np.sort(ids[good], axis=1)
            out[good] = _lookup(self.cone_index, cones)
        return out

    def to_json(self) -> dict:
        return {
            "type": str(self.root_system.lie_type),
            "rank": self.rank,
            "rays": self.rays.tolist(),
            "max_cones": self.max_cones.tolist(),
            "fundamental": int(self.fundamental),
        }


def fan_scope_check(w: WeylGroup, allow_e7: bool = False) -> None:
    t = w.root_system.lie_type
    order = w.chain.order
    if t.family == "E" and t.rank == 8:
        raise OutOfFanScope(f"E8 fan has {order:,} chambers; out of scope")
    if t.family == "E" and t.rank == 7:
        if not allow_e7:
            raise OutOfFanScope(f"E7 fan has {order:,} chambers; pass allow_e7 to build it")
        return
    if order > _fan_scope_limit():
        raise OutOfFanScope(f"{t} fan has {order:,} chambers; exceeds the {_fan_scope_limit():,} limit")


def _fan_scope_limit() -> int:
    from .weyl import FAN_SCOPE_ORDER

    return FAN_SCOPE_ORDER


def build_fan(rs: RootSystem, w: WeylGroup) -> WeylFan:
    if w.elements is None:
        raise OutOfFanScope(f"{rs.lie_type}: Weyl group not enumerated; fan unavailable")
    elems = w.elements.array
    k, n = elems.shape[0], rs.rank
    cols = np.transpose(elems, (0, 2, 1)).reshape(-1, n)  # w·ω_j for all w, j
    g = np.gcd.reduce(np.abs(cols), axis=1)
    if (g == 0).any():
        raise ArithmeticError("zero ray")
    cols = cols // g[:, None]
    rays = np.unique(cols, axis=0)
    index = _row_index(rays)
    ids = _lookup(index, cols).reshape(k, n)
    cones = np.sort(ids, axis=1)
    order = np.lexsort(cones.T[::-1])
    cones = cones[order]
    chamber_of = order
    c0 = np.sort(_lookup(index, np.eye(n, dtype=np.int64)))
    fundamental = int(np.flatnonzero((cones == c0).all(axis=1))[0])
    return WeylFan(rs, rays, cones, chamber_of, fundamental, w)


# --------------------------------------------------------------------------
# fan predicates


def facet_pairing_complete(f: WeylFan | np.ndarray) -> bool:
    """Every facet of every maximal cone lies in exactly two maximal cones."""
    cones = f.max_cones if isinstance(f, WeylFan) else np.asarray(f)
    k, n = cones.shape
    if k == 0:
        return False
    facets = np.concatenate([np.delete(cones, i, axis=1) for i in range(n)])
    if n == 1:
        # the only facet is the origin, shared by every cone
        return k == 2
    _, counts = np.unique(facets, axis=0, return_counts=True)
    return bool((counts == 2).all())


def is_smooth(f: WeylFan) -> bool:
    dets = _kernels.batch_det(f.ray_matrices())
    return bool(np.isin(dets, (1, -1)).all())


def cone_containing(f: WeylFan, p) -> int:
    """Index of the unique maximal cone containing ``p`` in its interior."""
    p = np.asarray(tuple(p), dtype=np.int64)[None]
    inside, first, boundary = _kernels.locate_points(f.inverse_ray_matrices, p)
    if inside[0] == 0:
        raise BoundaryPoint(f"point {p[0].tolist()} lies on a wall")
    if inside[0] > 1:
        raise ArithmeticError(f"point {p[0].tolist()} lies in {inside[0]} chambers")
    return int(first[0])


def random_generic_points(rank: int, count: int, rng: np.random.Generator, bound: int = 97):
    return rng.integers(-bound, bound + 1, size=(count, rank), dtype=np.int64)


def locate_random_points(f: WeylFan, count: int = 100, seed: int = 0) -> bool:
    """Sample generic points and require each to lie in exactly one chamber."""
    rng = np.random.default_rng(seed)
    found = 0
    while found < count:
        pts = random_generic_points(f.rank, count - found, rng)
        inside, _, boundary = _kernels.locate_points(f.inverse_ray_matrices, pts)
        generic = boundary == 0
        if (inside[generic] != 1).any():
            return False
        # non-generic points touch a wall; they must still be covered
        if (inside[~generic] + boundary[~generic] < 2).any():
            return False
        found += int(generic.sum())
    return True


def weyl_permutes_cones(f: WeylFan, mats: np.ndarray) -> np.ndarray:
    """Per matrix, whether it maps the maximal-cone set onto itself.

    Exhaustive over cones for every matrix given.
    """
    mats = np.asarray(mats, dtype=np.int64)
    radix = _pack_radix(len(f.rays), f.rank)
    perms = []
    ok = np.ones(mats.shape[0], dtype=bool)
    for e, m in enumerate(mats):
        p = f.ray_permutation(m)
        if p is None:
            ok[e] = False
            p = np.arange(len(f.rays))
        perms.append(p)
    perms = np.array(perms, dtype=np.int64).reshape(-1, len(f.rays))
    if radix is None:
        return ok & np.array([f.permutes_cones(m) for m in mats], dtype=bool)
    weights = radix ** np.arange(f.rank - 1, -1, -1, dtype=np.int64)
    keys = np.sort(f.max_cones @ weights)
    return ok & _kernels.images_in_set(perms, f.max_cones, keys, radix)


def ray_orbit(rs: RootSystem, start) -> set[tuple[int, ...]]:
    """W-orbit of one vector, by reflecting until nothing new appears."""
    from .rootsystem import reflect

    start = tuple(int(x) for x in start)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(rs.rank):
                u = reflect(rs.cartan, i, v)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def primitive_rows(rows: np.ndarray) -> bool:
    g = [reduce(gcd, map(int, r), 0) for r in rows]
    return all(x == 1 for x in g)
