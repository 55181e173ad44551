"""Simple Lie types, their Cartan matrices, and coroot systems.

Coordinates are taken in the basis of fundamental coweights, so a simple
root is the coordinate functional ``v -> v[i]`` and the fundamental Weyl
chamber is the nonnegative orthant.  Node numbering follows Bourbaki and
``C[i][j] = <alpha_i, coroot_j>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from functools import reduce
from math import gcd, lcm

import numpy as np

from .linalg import LatticeMap, LatticeVector, det_exact

FAMILIES = "ABCDEFG"
CLOSURE_CAP = 10_000


class InvalidLieType(ValueError):
    pass


@dataclass(frozen=True, order=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f not in FAMILIES:
            raise InvalidLieType(
                f"unknown family {f!r}; valid families are {', '.join(FAMILIES)}"
            )
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 3,
            "D": n >= 4,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[f]
        if not ok:
            raise InvalidLieType(f"{f}{n} is not a canonical simple type")

    @classmethod
    def parse(cls, text: str) -> LieType:
        m = re.fullmatch(r"\s*([A-Za-z])\s*(\d+)\s*", text)
        if not m:
            raise InvalidLieType(
                f"cannot parse {text!r}; expected a family letter from "
                f"{', '.join(FAMILIES)} followed by a rank, e.g. D4"
            )
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def catalog_index(self) -> tuple[int, int]:
        return FAMILIES.index(self.family), self.rank


def catalog(max_rank: int = 8) -> list[LieType]:
    """Every canonical type of rank <= ``max_rank``, in catalog order."""
    out = []
    for f in FAMILIES:
        for n in range(1, max_rank + 1):
            try:
                out.append(LieType(f, n))
            except InvalidLieType:
                pass
    return out


def cartan_matrix(t: LieType) -> tuple[tuple[int, ...], ...]:
    n = t.rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, a=-1, b=-1):
        # 1-based Bourbaki nodes; c[i][j] = a, c[j][i] = b
        c[i - 1][j - 1] = a
        c[j - 1][i - 1] = b

    if t.family in "ABCD":
        chain = n if t.family != "D" else n - 1
        for i in range(1, chain):
            bond(i, i + 1)
        if t.family == "B":
            bond(n - 1, n, -2, -1)
        elif t.family == "C":
            bond(n - 1, n, -1, -2)
        elif t.family == "D":
            bond(n - 2, n)
    elif t.family == "E":
        bond(1, 3)
        bond(3, 4)
        bond(2, 4)
        for i in range(4, n):
            bond(i, i + 1)
    elif t.family == "F":
        bond(1, 2)
        bond(2, 3, -2, -1)
        bond(3, 4)
    elif t.family == "G":
        bond(1, 2, -1, -3)
    return tuple(tuple(row) for row in c)


def symmetrizer(c) -> tuple[int, ...]:
    """Positive integers ``e`` with ``e[i] * c[i][j]`` symmetric, or ValueError.

    ``e[i]`` is proportional to the squared length of the ``i``-th simple
    coroot, so ``e[i] * c[i][j]`` is the Gram matrix of simple coroots.
    """
    n = len(c)
    e: list[Fraction | None] = [None] * n
    for start in range(n):
        if e[start] is not None:
            continue
        e[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or c[i][j] == 0:
                    continue
                if c[j][i] == 0:
                    raise ValueError("zero pattern of Cartan matrix is not symmetric")
                ej = e[i] * c[i][j] / c[j][i]
                if e[j] is None:
                    e[j] = ej
                    stack.append(j)
                elif e[j] != ej:
                    raise ValueError("Cartan matrix is not symmetrizable")
    if any(x <= 0 for x in e):
        raise ValueError("symmetrizer is not positive")
    scale = lcm(*(x.denominator for x in e))
    ints = [int(x * scale) for x in e]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)


def validate_cartan(c) -> None:
    n = len(c)
    for i in range(n):
        if c[i][i] != 2:
            raise ValueError(f"diagonal entry {i} is {c[i][i]}, expected 2")
        for j in range(n):
            if i != j:
                if c[i][j] not in (0, -1, -2, -3):
                    raise ValueError(f"off-diagonal entry ({i},{j}) = {c[i][j]}")
                if (c[i][j] == 0) != (c[j][i] == 0):
                    raise ValueError(f"zero pattern broken at ({i},{j})")
    e = symmetrizer(c)
    gram = [[e[i] * c[i][j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if det_exact(LatticeMap([row[:k] for row in gram[:k]])) <= 0:
            raise ValueError("Cartan matrix is not of finite type")


def simple_coroot_vectors(c) -> list[LatticeVector]:
    # coroot_j has coweight coordinates given by column j of C
    n = len(c)
    return [LatticeVector(c[k][j] for k in range(n)) for j in range(n)]


def reflection_matrix(c, i: int) -> LatticeMap:
    """Matrix of ``v -> v - v[i] * coroot_i`` (0-based ``i``)."""
    n = len(c)
    rows = [[int(r == s) for s in range(n)] for r in range(n)]
    for r in range(n):
        rows[r][i] -= c[r][i]
    return LatticeMap(rows)


def reflect(c, i: int, v: tuple[int, ...]) -> tuple[int, ...]:
    vi = v[i]
    if vi == 0:
        return v
    return tuple(v[k] - vi * c[k][i] for k in range(len(v)))


def generate_coroots(c, cap: int = CLOSURE_CAP) -> list[LatticeVector]:
    """Closure of the simple coroots under all simple reflections, sorted."""
    n = len(c)
    seeds = [tuple(v) for v in simple_coroot_vectors(c)]
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = reflect(c, i, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > cap:
                        raise ValueError(
                            f"coroot closure exceeded {cap} vectors; "
                            "Cartan matrix is not of finite type"
                        )
        frontier = nxt
    return [LatticeVector(v) for v in sorted(seen)]


@dataclass(frozen=True)
class RootSystem:
    lie_type: LieType
    cartan: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[LatticeVector, ...]
    coroots: tuple[LatticeVector, ...]
    reflections: tuple[LatticeMap, ...]
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    @classmethod
    def build(cls, t: LieType | str) -> RootSystem:
        if isinstance(t, str):
            t = LieType.parse(t)
        c = cartan_matrix(t)
        validate_cartan(c)
        coroots = tuple(generate_coroots(c))
        rs = cls(
            lie_type=t,
            cartan=c,
            simple_coroots=tuple(simple_coroot_vectors(c)),
            coroots=coroots,
            reflections=tuple(reflection_matrix(c, i) for i in range(t.rank)),
        )
        rs._index.update({v.coords: k for k, v in enumerate(coroots)})
        return rs

    @property
    def rank(self) -> int:
        return self.lie_type.rank

    def coroot_index(self, v) -> int:
        """Position of ``v`` in the canonical coroot list, or KeyError."""
        return self._index[tuple(v)]

    def simple_reflection(self, i: int) -> LatticeMap:
        """The reflection ``s_i`` with 1-based Bourbaki index ``i``."""
        if not 1 <= i <= self.rank:
            raise IndexError(f"reflection index {i} outside 1..{self.rank}")
        return self.reflections[i - 1]

    @cached_property
    def coroot_array(self) -> np.ndarray:
        return np.array([v.coords for v in self.coroots], dtype=np.int64)

    @cached_property
    def coroot_keys(self):
        """Sorted packed keys of the coroots, their indices, and the packing data."""
        arr = self.coroot_array
        bound = int(np.abs(arr).max())
        radix = 2 * bound + 1
        if radix**self.rank >= 2**62:
            raise OverflowError("coroot coordinates too large to pack")
        weights = radix ** np.arange(self.rank, dtype=np.int64)
        packed = (arr + bound) @ weights
        order = np.argsort(packed)
        return (packed[order], order), bound, weights

    @cached_property
    def cartan_array(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)

    @cached_property
    def symmetrizer(self) -> tuple[int, ...]:
        return symmetrizer(self.cartan)

    @cached_property
    def coroot_gram(self) -> np.ndarray:
        """Scaled invariant form on all coroots.

        Entry ``(a, b)`` is ``det(C)**2`` times the pairing of coroots ``a``
        and ``b`` under the form that makes ``e[i] * C[i][j]`` the Gram
        matrix of simple coroots.  Integral by construction.
        """
        from .linalg import adjugate

        adj = np.array(adjugate(LatticeMap(self.cartan)).entries, dtype=np.int64)
        e = np.array(self.symmetrizer, dtype=np.int64)
        simple_gram = e[:, None] * self.cartan_array
        coeffs = self.coroot_array @ adj.T  # det(C) * simple-coroot coordinates
        return coeffs @ simple_gram @ coeffs.T

    @cached_property
    def simple_gram_scaled(self) -> np.ndarray:
        d = det_exact(LatticeMap(self.cartan))
        e = np.array(self.symmetrizer, dtype=np.int64)
        return (e[:, None] * self.cartan_array) * d * d


def coroot_count(t: LieType | str) -> int:
    if isinstance(t, str):
        t = LieType.parse(t)
    return len(generate_coroots(cartan_matrix(t)))
