"""Compare the compiled stencil kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--sizes 257 513 1025]``.
Reports the median time per call of each kernel, the speedup, and the time
of one complete multigrid-preconditioned solve of the annulus 0.2 < |z| < 1
with each backend. Results of both backends are checked to agree bitwise.
"""

import argparse
import importlib
import os
import statistics
import time

import numpy as np

from confcap.capsolve import _fallback, solver as solver_mod
from confcap.capsolve import Condenser, UNIT_DISK, build_grid
from confcap.hypgeom import PiecewiseCurve

try:
    from confcap.capsolve import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _problem(n, rng):
    shape = (n, n)
    interior = np.zeros(shape, dtype=bool)
    interior[1:-1, 1:-1] = rng.random((n - 2, n - 2)) < 0.9
    cx = np.zeros(shape)
    cy = np.zeros(shape)
    cx[:, :-1] = interior[:, :-1] & interior[:, 1:]
    cy[:-1, :] = interior[:-1, :] & interior[1:, :]
    diag = np.where(interior, 4.0 + rng.random(shape), 0.0)
    invdiag = np.where(interior, 1.0 / np.where(interior, diag, 1.0), 0.0)
    u = np.where(interior, rng.random(shape), 0.0)
    f = np.where(interior, rng.random(shape), 0.0)
    return u, f, diag, invdiag, cx, cy


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'kernel':>14} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8} {'equal':>6}")
    for n in sizes:
        u, f, diag, invdiag, cx, cy = _problem(n, rng)
        out_a = np.empty_like(u)
        out_b = np.empty_like(u)
        ta = _median_time(lambda: _fallback.apply_operator(u, diag, cx, cy, out_a), repeat)
        tb = _median_time(lambda: _kernels.apply_operator(u, diag, cx, cy, out_b), repeat)
        same = np.array_equal(out_a, out_b)
        print(f"{n:>6} {'apply_operator':>14} {1e3 * ta:>10.3f} {1e3 * tb:>12.3f} {ta / tb:>8.2f} {same!s:>6}")
        ua, ub = u.copy(), u.copy()

        def sweep(mod, v):
            mod.smooth_color(v, f, invdiag, cx, cy, 0)
            mod.smooth_color(v, f, invdiag, cx, cy, 1)

        ta = _median_time(lambda: sweep(_fallback, ua), repeat)
        tb = _median_time(lambda: sweep(_kernels, ub), repeat)
        same = np.array_equal(ua, ub)
        print(f"{n:>6} {'rb_sweep':>14} {1e3 * ta:>10.3f} {1e3 * tb:>12.3f} {ta / tb:>8.2f} {same!s:>6}")


def _solve_with(backend, h):
    os.environ["CONFCAP_BACKEND"] = backend
    from confcap.capsolve import _backend

    importlib.reload(_backend)
    cond = Condenser(UNIT_DISK, PiecewiseCurve.circle(0.0, 0.2))
    g = build_grid(cond, h)
    t0 = time.perf_counter()
    solver_mod.solve_potential(g)
    return time.perf_counter() - t0, g.energy(), _backend.NAME


def bench_solve(spacings):
    print(f"\n{'h':>10} {'numpy s':>9} {'compiled s':>11} {'speedup':>8} {'same energy':>12}")
    saved = os.environ.get("CONFCAP_BACKEND")
    try:
        for h in spacings:
            ta, ea, _ = _solve_with("python", h)
            tb, eb, name = _solve_with("compiled", h)
            print(f"{h:>10.6g} {ta:>9.3f} {tb:>11.3f} {ta / tb:>8.2f} {str(ea == eb):>12}  ({name})")
    finally:
        if saved is None:
            os.environ.pop("CONFCAP_BACKEND", None)
        else:
            os.environ["CONFCAP_BACKEND"] = saved
        from confcap.capsolve import _backend

        importlib.reload(_backend)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[257, 513, 1025])
    parser.add_argument("--spacings", type=float, nargs="+", default=[1 / 128, 1 / 256, 1 / 512])
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()
    if _kernels is None:
        raise SystemExit("the compiled kernels are not built")
    bench_kernels(args.sizes, args.repeat)
    bench_solve(args.spacings)


if __name__ == "__main__":
    main()
