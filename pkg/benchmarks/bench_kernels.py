"""Time each hot kernel under numba and under the pure-numpy fallback.

    python benchmarks/bench_kernels.py E6
    python benchmarks/bench_kernels.py D5 --repeat 5 --pipeline

``--pipeline`` also times a whole certificate in two subprocesses, one
with ``WEYLFAN_DISABLE_NUMBA=1``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from weylfan import _kernels
from weylfan.automorphisms import search_order
from weylfan.fan import build_fan
from weylfan.rootsystem import RootSystem
from weylfan.weyl import WeylGroup


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(name):
    rs = RootSystem.build(name)
    w = WeylGroup.build(rs, enumerate=False)
    w.enumerate(cap=w.chain.order)
    f = build_fan(rs, w)
    n = rs.rank
    mats = f.ray_matrices()
    inv = f.inverse_ray_matrices
    pts = np.random.default_rng(0).integers(-97, 98, size=(100, n))
    perm = f.ray_permutation(rs.reflections[0])
    order = np.array(search_order(rs.cartan))
    radix = max(len(f.rays), 2)
    weights = radix ** np.arange(n - 1, -1, -1, dtype=np.int64)
    keys = np.sort(f.max_cones @ weights)
    sample = w.elements.array[:20]
    perms = np.array([f.ray_permutation(m) for m in sample])
    empty = np.empty((0, n), np.int64)

    return {
        f"batch_det ({len(mats)} x {n}x{n})": lambda k: k.batch_det(mats),
        f"locate_points (100 pts x {len(inv)} cones)": lambda k: k.locate_points(inv, pts),
        f"map_cones ({len(f.max_cones)} cones)": lambda k: k.map_cones(perm, f.max_cones),
        f"tuple_search ({len(rs.coroots)} coroots)": lambda k: k.tuple_search(
            rs.coroot_gram, rs.simple_gram_scaled, order, -1, empty),
        f"images_in_set (20 elements x {len(f.max_cones)} cones)": lambda k: k.images_in_set(
            perms, f.max_cones, keys, radix),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("type", nargs="?", default="E6")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--pipeline", action="store_true")
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    cases = kernel_cases(args.type)
    print(f"{'kernel':<48}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for label, call in cases.items():
        call(_kernels.numba_impl)  # compile
        t_np = best_of(lambda: call(_kernels.numpy_impl), args.repeat)
        t_nb = best_of(lambda: call(_kernels.numba_impl), args.repeat)
        print(f"{label:<48}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>8.1f}x")

    if args.pipeline:
        code = f"from weylfan.automorphisms import semidirect_certificate as c; assert c({args.type!r}).passed"
        for flag in ("0", "1"):
            env = dict(os.environ, WEYLFAN_DISABLE_NUMBA=flag)
            t0 = time.perf_counter()
            subprocess.run([sys.executable, "-c", code], env=env, check=True)
            label = "numpy" if flag == "1" else "numba"
            print(f"certificate {args.type} ({label} backend, incl. startup): {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
