"""Multigrid-preconditioned conjugate gradients and capacity estimates.

Coarse levels rediscretize the condenser on the nested grids with spacing
2h, 4h, ...; transfers are bilinear interpolation and its transpose. The
smoother is red-black Gauss-Seidel, ordered red-black before and
black-red after the coarse correction so that the V-cycle is symmetric.
The coarsest level is solved by a sparse LU factorization.
"""

import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import ConvergenceError, ResolutionError
from . import _backend
from .grid import _discretize, build_grid

__all__ = ["estimate_capacity", "solve_potential"]


def _dot(a, b):
    # numpy's pairwise summation does not depend on the thread count
    return float(np.sum(a * b))


class _Level:
    def __init__(self, grid):
        self.diag = grid.diag
        self.cx = grid.cx
        self.cy = grid.cy
        self.interior = grid.interior
        self.invdiag = np.where(self.interior, 1.0 / np.where(self.interior, grid.diag, 1.0), 0.0)
        self.shape = grid.shape
        self.lu = None
        self.index = None

    def apply(self, v):
        out = np.empty(self.shape)
        _backend.kernels.apply_operator(v, self.diag, self.cx, self.cy, out)
        return out

    def factorize(self):
        ny, nx = self.shape
        idx = -np.ones(self.shape, dtype=np.int64)
        n = int(self.interior.sum())
        idx[self.interior] = np.arange(n)
        rows = [idx[self.interior]]
        cols = [idx[self.interior]]
        vals = [self.diag[self.interior]]
        for c, (dj, di) in ((self.cx, (0, 1)), (self.cy, (1, 0))):
            J, I = np.nonzero(c)
            p, q = idx[J, I], idx[J + dj, I + di]
            rows += [p, q]
            cols += [q, p]
            vals += [-c[J, I], -c[J, I]]
        A = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        )
        self.index = idx
        self.lu = spla.splu(A) if n else None

    def direct(self, f):
        out = np.zeros(self.shape)
        if self.lu is not None:
            out[self.interior] = self.lu.solve(f[self.interior])
        return out


def _prolong(c, fine_shape):
    ny, nx = fine_shape
    f = np.zeros(fine_shape)
    f[::2, ::2] = c
    f[1::2, ::2] = 0.5 * (c[:-1, :] + c[1:, :])
    f[::2, 1::2] = 0.5 * (c[:, :-1] + c[:, 1:])
    f[1::2, 1::2] = 0.25 * (c[:-1, :-1] + c[1:, :-1] + c[:-1, 1:] + c[1:, 1:])
    return f


def _restrict(r):
    c = r[::2, ::2].copy()
    half = 0.5 * r
    c[:-1, :] += half[1::2, ::2]
    c[1:, :] += half[1::2, ::2]
    c[:, :-1] += half[::2, 1::2]
    c[:, 1:] += half[::2, 1::2]
    q = 0.25 * r[1::2, 1::2]
    c[:-1, :-1] += q
    c[1:, :-1] += q
    c[:-1, 1:] += q
    c[1:, 1:] += q
    return c


class _Hierarchy:
    def __init__(self, grid, smoothing=2):
        self.smoothing = smoothing
        self.levels = [_Level(grid)]
        cond = grid.condenser
        for level in range(1, grid.levels + 1):
            s = 2**level
            ny, nx = grid.shape
            coarse = _discretize(
                cond, grid.h * s, grid.x0, grid.y0, (nx - 1) // s + 1, (ny - 1) // s + 1
            )
            if not np.any(coarse.interior):
                break
            self.levels.append(_Level(coarse))
        self.levels[-1].factorize()

    def _smooth(self, lev, x, f, colors):
        for _ in range(self.smoothing):
            for color in colors:
                _backend.kernels.smooth_color(x, f, lev.invdiag, lev.cx, lev.cy, color)

    def vcycle(self, f, k=0):
        lev = self.levels[k]
        if k == len(self.levels) - 1:
            return lev.direct(f)
        x = np.zeros(lev.shape)
        self._smooth(lev, x, f, (0, 1))
        r = np.where(lev.interior, f - lev.apply(x), 0.0)
        rc = _restrict(r)
        rc[~self.levels[k + 1].interior] = 0.0
        ec = self.vcycle(np.ascontiguousarray(rc), k + 1)
        x += np.where(lev.interior, _prolong(ec, lev.shape), 0.0)
        self._smooth(lev, x, f, (1, 0))
        return x


def solve_potential(grid, *, tol=1e-10, max_iter=200, preconditioner="multigrid",
                    initial=None, strict=True):
    """Minimize the discrete energy of ``grid`` by preconditioned CG.

    ``preconditioner`` is "multigrid" (a symmetric V-cycle) or "jacobi".
    Iteration stops when the residual norm falls below ``tol`` times the
    norm of the right-hand side. ``initial`` is an optional starting
    potential. The grid is updated in place and returned; ``grid.info``
    records the iteration count and final relative residual. Raises
    ConvergenceError after ``max_iter`` iterations unless ``strict`` is False.
    """
    interior = grid.interior
    b = np.where(interior, grid.rhs, 0.0)
    bnorm = math.sqrt(_dot(b, b))
    if preconditioner == "multigrid":
        hierarchy = _Hierarchy(grid)

        def precondition(r):
            return hierarchy.vcycle(r)

    elif preconditioner == "jacobi":
        invdiag = np.where(interior, 1.0 / np.where(interior, grid.diag, 1.0), 0.0)

        def precondition(r):
            return invdiag * r

    else:
        raise ValueError(f"unknown preconditioner {preconditioner!r}")

    x = np.zeros(grid.shape)
    if initial is not None:
        x[interior] = np.asarray(initial, dtype=float)[interior]
    r = b - grid.apply(x)
    r[~interior] = 0.0
    z = precondition(r)
    p = z.copy()
    rz = _dot(r, z)
    it = 0
    rel = math.sqrt(_dot(r, r)) / bnorm if bnorm else 0.0
    while rel > tol and it < max_iter:
        q = grid.apply(p)
        alpha = rz / _dot(p, q)
        x += alpha * p
        r -= alpha * q
        it += 1
        rel = math.sqrt(_dot(r, r)) / bnorm
        if rel <= tol:
            break
        z = precondition(r)
        rz_new = _dot(r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    grid.u = np.where(interior, x, grid.fixed)
    grid.info = {"iterations": it, "residual": rel, "preconditioner": preconditioner,
                 "backend": _backend.NAME}
    if rel > tol and strict:
        raise ConvergenceError(
            f"CG stopped after {it} iterations with relative residual {rel:.3g}"
        )
    return grid


def _default_h(condenser, levels):
    """Largest h = size / 2^n with h <= size / 256 resolving the gap on every level."""
    size = condenser.size
    h = size / 256.0
    gap = condenser.gap()
    while gap < 4.0 * h:
        h *= 0.5
        if h < size * 2.0**-14:
            raise ResolutionError(f"gap {gap:.3g} is too small to resolve")
    return h


def estimate_capacity(condenser, levels=2, h=None, *, tol=1e-10, return_values=False):
    """Capacity by Richardson extrapolation over grids h, h/2, ...

    With two levels second order convergence is assumed. With three the
    order is estimated from the successive differences, clamped to [1, 2],
    and falls back to 2 when the differences change sign. The error
    estimate is the size of the extrapolation step from the finest raw
    value, and with three levels at least the distance between the two
    extrapolants.
    Returns (value, error), plus the raw energies if ``return_values``.
    """
    if levels not in (1, 2, 3):
        raise ValueError(f"levels must be 1, 2 or 3, got {levels!r}")
    if h is None:
        h = _default_h(condenser, levels)
    values = []
    for k in range(levels):
        grid = build_grid(condenser, h / 2**k)
        values.append(solve_potential(grid, tol=tol).energy())
    if levels == 1:
        result = (values[0], float("nan"))
    elif levels == 2:
        ext = values[1] + (values[1] - values[0]) / 3.0
        result = (ext, abs(ext - values[1]))
    else:
        d1 = values[1] - values[0]
        d2 = values[2] - values[1]
        order = 2.0
        if d1 * d2 > 0 and d2 != 0:
            order = min(max(math.log2(d1 / d2), 1.0), 2.0)
        factor = 2.0**order - 1.0
        e12 = values[1] + d1 / factor
        e23 = values[2] + d2 / factor
        result = (e23, max(abs(e23 - e12), abs(e23 - values[2])))
    return result + (values,) if return_values else result
