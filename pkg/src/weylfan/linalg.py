"""Exact integer vectors and matrices on the coweight lattice.

Everything here works on plain Python ints, so no value can overflow.
Matrices are stored row-major as tuples of tuples; column ``j`` is the
image of the ``j``-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class RankMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class LatticeVector:
    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __neg__(self) -> LatticeVector:
        return LatticeVector(-c for c in self.coords)

    def __add__(self, other: LatticeVector) -> LatticeVector:
        _check_rank(self.rank, other.rank)
        return LatticeVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        _check_rank(self.rank, other.rank)
        return LatticeVector(a - b for a, b in zip(self.coords, other.coords))

    def scale(self, k: int) -> LatticeVector:
        return LatticeVector(k * c for c in self.coords)

    def __repr__(self):
        return f"LatticeVector({list(self.coords)})"


@dataclass(frozen=True, order=True)
class LatticeMap:
    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("LatticeMap must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n: int) -> LatticeMap:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> LatticeMap:
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def rank(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> LatticeVector:
        return LatticeVector(row[j] for row in self.entries)

    def key(self) -> tuple[int, ...]:
        """Row-major flattening; the canonical hashing and sort key."""
        return tuple(x for row in self.entries for x in row)

    def __neg__(self) -> LatticeMap:
        return LatticeMap([[-x for x in row] for row in self.entries])

    def __matmul__(self, other):
        if isinstance(other, LatticeMap):
            return compose(self, other)
        return apply(self, other)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __repr__(self):
        return f"LatticeMap({self.tolist()})"


def _check_rank(a: int, b: int) -> None:
    if a != b:
        raise RankMismatch(f"rank mismatch: {a} != {b}")


def det_exact(m: LatticeMap) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = m.rank
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def compose(a: LatticeMap, b: LatticeMap) -> LatticeMap:
    """The product ``a @ b``: apply ``b`` first, then ``a``."""
    _check_rank(a.rank, b.rank)
    bcols = list(zip(*b.entries))
    return LatticeMap(
        [[sum(x * y for x, y in zip(row, col)) for col in bcols] for row in a.entries]
    )


def apply(m: LatticeMap, v: LatticeVector) -> LatticeVector:
    _check_rank(m.rank, v.rank)
    return LatticeVector(sum(x * y for x, y in zip(row, v.coords)) for row in m.entries)


def is_unimodular(m: LatticeMap) -> bool:
    return det_exact(m) in (1, -1)


def primitive(v: LatticeVector) -> LatticeVector:
    """Divide out the content of ``v``, keeping its direction."""
    g = reduce(gcd, v.coords, 0)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return LatticeVector(c // g for c in v.coords)


def adjugate(m: LatticeMap) -> LatticeMap:
    """Integer adjugate, so that ``m @ adjugate(m) == det(m) * I``."""
    n = m.rank
    if n == 1:
        return LatticeMap([[1]])
    rows = m.entries
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof[i][j] = (-1) ** (i + j) * det_exact(LatticeMap(minor))
    # adjugate is the transpose of the cofactor matrix
    return LatticeMap([[cof[j][i] for j in range(n)] for i in range(n)])


def inverse_unimodular(m: LatticeMap) -> LatticeMap:
    d = det_exact(m)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det {d})")
    adj = adjugate(m)
    return LatticeMap([[d * x for x in row] for row in adj.entries])


def multiplicative_order(m: LatticeMap, cap: int = 10_000) -> int:
    ident = LatticeMap.identity(m.rank)
    power = m
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = compose(m, power)
    raise ValueError(f"order exceeds {cap}")


# --------------------------------------------------------------------------
# batches of small matrices
#
# Group-sized collections (tens of thousands of elements) are kept as int64
# stacks.  Every product goes through ``matmul_checked``, which refuses to
# run when the entry bounds could overflow, so results are still exact.

import numpy as np  # noqa: E402


def matmul_checked(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    from ._kernels import check_int64_product

    if a.size and b.size:
        check_int64_product(np.abs(a).max(), np.abs(b).max(), a.shape[-1])
    return a @ b


def canonical_sort(mats: np.ndarray) -> np.ndarray:
    """Unique matrices in lexicographic order of their row-major keys."""
    k = mats.shape[0]
    if k == 0:
        return mats.reshape(0, *mats.shape[1:])
    flat = mats.reshape(k, -1)
    uniq = np.unique(flat, axis=0)
    return uniq.reshape(-1, *mats.shape[1:])


class MatrixSet:
    """An immutable, canonically ordered set of integer matrices."""

    def __init__(self, mats: np.ndarray):
        mats = np.asarray(mats, dtype=np.int64)
        self.array = canonical_sort(mats)
        self.array.setflags(write=False)
        self._keys = None

    @classmethod
    def from_maps(cls, maps, rank: int) -> MatrixSet:
        maps = list(maps)
        arr = np.array([m.entries for m in maps], dtype=np.int64).reshape(
            len(maps), rank, rank
        )
        return cls(arr)

    @property
    def rank(self) -> int:
        return self.array.shape[1]

    @property
    def keys(self) -> dict[bytes, int]:
        if self._keys is None:
            self._keys = {m.tobytes(): i for i, m in enumerate(self.array)}
        return self._keys

    def index(self, m) -> int:
        return self.keys[_as_array(m, self.rank).tobytes()]

    def __contains__(self, m) -> bool:
        return _as_array(m, self.rank).tobytes() in self.keys

    def contains_all(self, mats: np.ndarray) -> bool:
        keys = self.keys
        mats = np.ascontiguousarray(mats, dtype=np.int64)
        return all(m.tobytes() in keys for m in mats)

    def __len__(self):
        return self.array.shape[0]

    def __iter__(self):
        for m in self.array:
            yield LatticeMap(m.tolist())

    def __eq__(self, other):
        if not isinstance(other, MatrixSet):
            return NotImplemented
        return self.array.shape == other.array.shape and bool(
            (self.array == other.array).all()
        )

    def __hash__(self):
        return hash(self.array.tobytes())

    def __repr__(self):
        return f"MatrixSet(size={len(self)}, rank={self.rank})"


def _as_array(m, rank: int) -> np.ndarray:
    if isinstance(m, LatticeMap):
        return np.array(m.entries, dtype=np.int64)
    return np.ascontiguousarray(m, dtype=np.int64).reshape(rank, rank)
