"""Compiled vs numpy kernels: per-kernel timings and one end-to-end solve.

    python benchmarks/bench_kernels.py [--repeat 5] [--h 0.02] [--json out.json]

The end-to-end rows run each backend in a fresh interpreter, selecting the
numpy fallback with ROBIN_BOUNDS_PURE_PYTHON=1.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from robin_bounds import finsler, geometry
from robin_bounds.kernels import _pykernels

try:
    from robin_bounds.kernels import _ckernels
except ImportError:
    _ckernels = None

NORMS = {
    "euclidean": finsler.euclidean(),
    "quad": finsler.weighted_quadratic([[4.0, 0.0], [0.0, 1.0]]),
    "lq3": finsler.lq_norm(3.0),
}

END_TO_END = """
import time
from robin_bounds import finsler, geometry, pde, kernels
dom = geometry.make_disk({h})
norm = finsler.lq_norm(3.0)
t0 = time.perf_counter()
geometry.inradius(dom, norm)
t1 = time.perf_counter()
pde.solve_robin_eig(dom, norm, 1.5, 1.0)
t2 = time.perf_counter()
print(kernels.BACKEND, t1 - t0, t2 - t1)
"""


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(h, repeat):
    dom = geometry.make_disk(h)
    pts = dom.inside_points()
    samples = np.concatenate([dom.boundary_pts, dom.boundary_nodes])
    rng = np.random.default_rng(0)
    grads = rng.normal(size=(4 * len(pts), 2))
    rows = []
    for name, norm in NORMS.items():
        fam, prm = norm.polar().kernel_params()
        args = (pts, samples, fam, prm)
        rows.append(("min_norm_distance", name, len(pts) * len(samples),
                     best_time(lambda: _pykernels.min_norm_distance(*args), repeat),
                     best_time(lambda: _ckernels.min_norm_distance(*args), repeat) if _ckernels else None))
        fam, prm = norm.kernel_params()
        for p in (1.5, 3.0):
            args = (grads, fam, prm, p, 1e-3)
            rows.append((f"fp_eval p={p:g}", name, len(grads),
                         best_time(lambda: _pykernels.fp_eval(*args), repeat),
                         best_time(lambda: _ckernels.fp_eval(*args), repeat) if _ckernels else None))
    return rows


def end_to_end(h):
    out = {}
    for label, env in (("cython", {}), ("python", {"ROBIN_BOUNDS_PURE_PYTHON": "1"})):
        proc = subprocess.run([sys.executable, "-c", END_TO_END.format(h=h)], capture_output=True, text=True,
                              env={**os.environ, **env}, check=True)
        backend, t_dist, t_eig = proc.stdout.split()
        out[label] = {"backend": backend, "inradius_s": float(t_dist), "eigen_s": float(t_eig)}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--h", type=float, default=0.02)
    ap.add_argument("--json", type=str, default=None, help="also write the results here")
    args = ap.parse_args(argv)

    rows = kernel_rows(args.h, args.repeat)
    print(f"{'kernel':<22}{'norm':<11}{'size':>10}{'numpy [ms]':>13}{'cython [ms]':>13}{'speedup':>9}")
    for kernel, norm, size, t_py, t_c in rows:
        c = f"{1e3 * t_c:13.2f}{t_py / t_c:9.1f}" if t_c else f"{'n/a':>13}{'':>9}"
        print(f"{kernel:<22}{norm:<11}{size:>10}{1e3 * t_py:13.2f}{c}")

    e2e = end_to_end(args.h)
    print(f"\nend to end, disk64 h={args.h:g}, lq:q=3, p=1.5, beta=1")
    for label, r in e2e.items():
        print(f"  {label:<7} (loaded {r['backend']}): inradius {r['inradius_s']:.3f}s, eigen {r['eigen_s']:.3f}s")

    if args.json:
        payload = {
            "kernels": [dict(zip(("kernel", "norm", "size", "numpy_s", "cython_s"), r)) for r in rows],
            "end_to_end": e2e,
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)


if __name__ == "__main__":
    main()
