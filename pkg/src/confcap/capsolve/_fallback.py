"""Pure numpy versions of the stencil kernels.

They follow the compiled kernels operation by operation so that both
backends round identically.
"""

import numpy as np


def apply_operator(u, diag, cx, cy, out):
    """out = A u for the five-point operator stored as diagonal and couplings."""
    out[...] = 0.0
    c = (slice(1, -1), slice(1, -1))
    s = cx[c] * u[1:-1, 2:] + cx[1:-1, :-2] * u[1:-1, :-2]
    s += cy[c] * u[2:, 1:-1]
    s += cy[:-2, 1:-1] * u[:-2, 1:-1]
    out[c] = diag[c] * u[c] - s
    return out


def _sublattice(ny, nx, pj, pi):
    """Slices selecting nodes (pj + 2a, pi + 2b) strictly inside the grid."""
    nr = len(range(pj, ny - 1, 2))
    nc = len(range(pi, nx - 1, 2))
    return nr, nc


def smooth_color(u, f, invdiag, cx, cy, color):
    """One Gauss-Seidel half sweep over nodes with (i + j) % 2 == color."""
    ny, nx = u.shape
    for pj in (1, 2):
        pi = 1 + ((pj + 1 + color) % 2)
        nr, nc = _sublattice(ny, nx, pj, pi)
        if nr == 0 or nc == 0:
            continue
        rows = slice(pj, pj + 2 * nr, 2)
        cols = slice(pi, pi + 2 * nc, 2)
        t = f[rows, cols] + cx[rows, cols] * u[rows, pi + 1 : pi + 1 + 2 * nc : 2]
        t += cx[rows, pi - 1 : pi - 1 + 2 * nc : 2] * u[rows, pi - 1 : pi - 1 + 2 * nc : 2]
        t += cy[rows, cols] * u[pj + 1 : pj + 1 + 2 * nr : 2, cols]
        t += cy[pj - 1 : pj - 1 + 2 * nr : 2, cols] * u[pj - 1 : pj - 1 + 2 * nr : 2, cols]
        t *= invdiag[rows, cols]
        u[rows, cols] = np.where(invdiag[rows, cols] == 0.0, u[rows, cols], t)
