"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``WEYLFAN_DISABLE_NUMBA`` is
unset (or ``0``).  Both paths take and return the same int64 arrays; the
module-level names (``batch_det``, ``locate_points``, ...) point at the
selected one, while ``numba_impl`` / ``numpy_impl`` expose both for tests
and benchmarks.

All kernels use int64.  Callers check magnitude bounds first (see
``check_int64_product``) so that no intermediate can overflow.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

INT64_SAFE = 2**62


def _env_disabled() -> bool:
    return os.environ.get("WEYLFAN_DISABLE_NUMBA", "").strip().lower() not in (
        "",
        "0",
        "false",
        "no",
    )


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def check_int64_product(a_max: int, b_max: int, inner: int) -> None:
    """Raise OverflowError unless a sum of ``inner`` products fits in int64."""
    if int(a_max) * int(b_max) * max(int(inner), 1) >= INT64_SAFE:
        raise OverflowError("entries too large for the int64 kernels")


def hadamard_bound_ok(mats: np.ndarray) -> bool:
    """True when every Bareiss intermediate of every matrix fits in int64.

    Intermediates are minors bounded by the Hadamard bound ``H``, and one
    step multiplies two of them, so ``H**2`` must stay below 2**62.
    """
    if mats.size == 0:
        return True
    col_norms = np.sqrt((mats.astype(np.float64) ** 2).sum(axis=1)).max(axis=0)
    bound = float(np.prod(np.maximum(col_norms, 1.0)))
    return bound * bound < INT64_SAFE / 4


# --------------------------------------------------------------------------
# loop bodies (compiled by numba when available)


def _det_loop(mats):
    k, n, _ = mats.shape
    out = np.empty(k, dtype=np.int64)
    a = np.empty((n, n), dtype=np.int64)
    for t in range(k):
        for i in range(n):
            for j in range(n):
                a[i, j] = mats[t, i, j]
        sign = 1
        prev = 1
        singular = False
        for c in range(n - 1):
            if a[c, c] == 0:
                r = c + 1
                while r < n and a[r, c] == 0:
                    r += 1
                if r == n:
                    singular = True
                    break
                for j in range(n):
                    tmp = a[c, j]
                    a[c, j] = a[r, j]
                    a[r, j] = tmp
                sign = -sign
            piv = a[c, c]
            for i in range(c + 1, n):
                aic = a[i, c]
                for j in range(c + 1, n):
                    a[i, j] = (a[i, j] * piv - aic * a[c, j]) // prev
            prev = piv
        out[t] = 0 if singular else sign * a[n - 1, n - 1]
    return out


def _locate_loop(inv_mats, points):
    k, n, _ = inv_mats.shape
    p = points.shape[0]
    inside = np.zeros(p, dtype=np.int64)
    first = np.full(p, -1, dtype=np.int64)
    boundary = np.zeros(p, dtype=np.int64)
    for q in range(p):
        for t in range(k):
            closed = True
            strict = True
            for i in range(n):
                s = 0
                for j in range(n):
                    s += inv_mats[t, i, j] * points[q, j]
                if s < 0:
                    closed = False
                    break
                if s == 0:
                    strict = False
            if closed:
                if strict:
                    if inside[q] == 0:
                        first[q] = t
                    inside[q] += 1
                else:
                    boundary[q] += 1
    return inside, first, boundary


def _map_cones_loop(perm, cones):
    k, n = cones.shape
    out = np.empty((k, n), dtype=cones.dtype)
    for t in range(k):
        for i in range(n):
            v = perm[cones[t, i]]
            j = i
            while j > 0 and out[t, j - 1] > v:
                out[t, j] = out[t, j - 1]
                j -= 1
            out[t, j] = v
    return out


def _search_loop(gram, target, order, first, out):
    """Depth-first enumeration of Gram-compatible coroot tuples.

    Fills ``out`` (when it has rows) and returns the number of solutions.
    Row ``r`` of ``out`` holds the chosen coroot index at each depth.
    """
    n = order.shape[0]
    kk = gram.shape[0]
    img = np.zeros(n, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    cap = out.shape[0]
    count = 0
    depth = 0
    while depth >= 0:
        node = order[depth]
        c = pos[depth]
        while c < kk:
            ok = gram[c, c] == target[node, node]
            if ok and depth == 0 and first >= 0 and c != first:
                ok = False
            if ok:
                for d in range(depth):
                    if gram[img[d], c] != target[order[d], node]:
                        ok = False
                        break
            if ok:
                break
            c += 1
        if c < kk:
            img[depth] = c
            pos[depth] = c + 1
            if depth == n - 1:
                if count < cap:
                    for d in range(n):
                        out[count, d] = img[d]
                count += 1
            else:
                depth += 1
                pos[depth] = 0
        else:
            depth -= 1
    return count


def _images_in_set_loop(perms, cones, sorted_keys, radix):
    """For each ray permutation, test that it maps every cone into the set."""
    m = perms.shape[0]
    k, n = cones.shape
    ok = np.ones(m, dtype=np.bool_)
    row = np.empty(n, dtype=np.int64)
    for e in range(m):
        for t in range(k):
            for i in range(n):
                v = perms[e, cones[t, i]]
                j = i
                while j > 0 and row[j - 1] > v:
                    row[j] = row[j - 1]
                    j -= 1
                row[j] = v
            key = 0
            for i in range(n):
                key = key * radix + row[i]
            lo, hi = 0, sorted_keys.shape[0]
            while lo < hi:
                mid = (lo + hi) >> 1
                if sorted_keys[mid] < key:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= sorted_keys.shape[0] or sorted_keys[lo] != key:
                ok[e] = False
                break
    return ok


# --------------------------------------------------------------------------
# numpy implementations


def _det_numpy(mats):
    a = np.array(mats, dtype=np.int64, copy=True)
    k, n, _ = a.shape
    if n == 0:
        return np.ones(k, dtype=np.int64)
    sign = np.ones(k, dtype=np.int64)
    prev = np.ones(k, dtype=np.int64)
    alive = np.ones(k, dtype=bool)
    rows = np.arange(k)
    for c in range(n - 1):
        sub = a[:, c:, c] != 0
        has = sub.any(axis=1)
        alive &= has
        r = c + np.argmax(sub, axis=1)
        swap = (r != c) & alive
        if swap.any():
            idx = rows[swap]
            tmp = a[idx, c].copy()
            a[idx, c] = a[idx, r[swap]]
            a[idx, r[swap]] = tmp
            sign[swap] = -sign[swap]
        piv = a[:, c, c].copy()
        piv[~alive] = 1
        lower = a[:, c + 1 :, c + 1 :]
        upd = lower * piv[:, None, None] - a[:, c + 1 :, c][:, :, None] * a[:, c, c + 1 :][:, None, :]
        a[:, c + 1 :, c + 1 :] = upd // prev[:, None, None]
        prev = piv
    out = sign * a[:, n - 1, n - 1]
    out[~alive] = 0
    return out


def _locate_numpy(inv_mats, points):
    p = points.shape[0]
    inside = np.zeros(p, dtype=np.int64)
    first = np.full(p, -1, dtype=np.int64)
    boundary = np.zeros(p, dtype=np.int64)
    for q in range(p):
        coords = inv_mats @ points[q]
        closed = (coords >= 0).all(axis=1)
        strict = closed & (coords > 0).all(axis=1)
        hits = np.flatnonzero(strict)
        inside[q] = hits.size
        if hits.size:
            first[q] = hits[0]
        boundary[q] = int(closed.sum()) - hits.size
    return inside, first, boundary


def _map_cones_numpy(perm, cones):
    return np.sort(perm[cones], axis=1)


def _search_numpy(gram, target, order, first, out, chunk=1 << 22):
    n = order.shape[0]
    kk = gram.shape[0]
    node = order[0]
    cand = np.flatnonzero(np.diagonal(gram) == target[node, node])
    if first >= 0:
        cand = cand[cand == first]
    partial = cand[:, None].astype(np.int64)
    for depth in range(1, n):
        node = order[depth]
        diag_ok = np.diagonal(gram) == target[node, node]
        step = max(1, chunk // max(kk, 1))
        pieces = []
        for s in range(0, partial.shape[0], step):
            block = partial[s : s + step]
            mask = np.broadcast_to(diag_ok, (block.shape[0], kk)).copy()
            for d in range(depth):
                mask &= gram[block[:, d]] == target[order[d], node]
            r, c = np.nonzero(mask)
            pieces.append(np.column_stack([block[r], c]))
        partial = (
            np.concatenate(pieces) if pieces else np.empty((0, depth + 1), np.int64)
        )
    count = partial.shape[0]
    m = min(count, out.shape[0])
    out[:m] = partial[:m]
    return count


def _images_in_set_numpy(perms, cones, sorted_keys, radix):
    m = perms.shape[0]
    ok = np.ones(m, dtype=bool)
    weights = radix ** np.arange(cones.shape[1] - 1, -1, -1, dtype=np.int64)
    for e in range(m):
        keys = np.sort(perms[e][cones], axis=1) @ weights
        idx = np.searchsorted(sorted_keys, keys)
        idx[idx >= sorted_keys.shape[0]] = 0
        ok[e] = bool((sorted_keys[idx] == keys).all())
    return ok


numpy_impl = SimpleNamespace(
    batch_det=_det_numpy,
    locate_points=_locate_numpy,
    map_cones=_map_cones_numpy,
    tuple_search=_search_numpy,
    images_in_set=_images_in_set_numpy,
)

if HAVE_NUMBA:
    _jit = numba.njit(cache=True)
    numba_impl = SimpleNamespace(
        batch_det=_jit(_det_loop),
        locate_points=_jit(_locate_loop),
        map_cones=_jit(_map_cones_loop),
        tuple_search=_jit(_search_loop),
        images_in_set=_jit(_images_in_set_loop),
    )
else:  # pragma: no cover
    numba_impl = None

_impl = numba_impl if USE_NUMBA else numpy_impl


def backend() -> str:
    return "numba" if _impl is numba_impl else "numpy"


def batch_det(mats: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small integer matrices."""
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if not hadamard_bound_ok(mats):
        raise OverflowError("determinant intermediates could exceed int64")
    return _impl.batch_det(mats)


def locate_points(inv_mats: np.ndarray, points: np.ndarray):
    """Per point: number of cones containing it strictly, the first such
    cone, and the number of cones containing it only on their boundary."""
    inv_mats = np.ascontiguousarray(inv_mats, dtype=np.int64)
    points = np.ascontiguousarray(points, dtype=np.int64)
    if inv_mats.size and points.size:
        check_int64_product(
            np.abs(inv_mats).max(), np.abs(points).max(), inv_mats.shape[-1]
        )
    return _impl.locate_points(inv_mats, points)


def map_cones(perm: np.ndarray, cones: np.ndarray) -> np.ndarray:
    """Relabel the ray ids of each cone through ``perm`` and re-sort rows."""
    return _impl.map_cones(
        np.ascontiguousarray(perm, dtype=np.int64),
        np.ascontiguousarray(cones, dtype=np.int64),
    )


def tuple_search(
    gram: np.ndarray, target: np.ndarray, order, first: int = -1, count_only=False
):
    """All coroot-index tuples whose Gram matrix equals ``target``.

    ``order`` is the node order of the search; the returned array has one
    column per node in the original numbering.  With ``count_only`` just
    the number of solutions is returned.  ``first`` pins the image of
    ``order[0]``.
    """
    gram = np.ascontiguousarray(gram, dtype=np.int64)
    target = np.ascontiguousarray(target, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    n = order.shape[0]
    empty = np.empty((0, n), dtype=np.int64)
    count = _impl.tuple_search(gram, target, order, int(first), empty)
    if count_only:
        return int(count)
    out = np.empty((count, n), dtype=np.int64)
    _impl.tuple_search(gram, target, order, int(first), out)
    result = np.empty_like(out)
    result[:, order] = out
    return result


def images_in_set(
    perms: np.ndarray, cones: np.ndarray, sorted_keys: np.ndarray, radix: int
) -> np.ndarray:
    """Whether each row of ``perms`` maps every cone onto a listed cone key."""
    return _impl.images_in_set(
        np.ascontiguousarray(perms, dtype=np.int64),
        np.ascontiguousarray(cones, dtype=np.int64),
        np.ascontiguousarray(sorted_keys, dtype=np.int64),
        int(radix),
    )
