# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stencil kernels for the grid solver.

Arrays are C-contiguous (ny, nx) float64 grids. Coupling ``cx[j, i]`` joins
node (j, i) to (j, i + 1) and ``cy[j, i]`` joins (j, i) to (j + 1, i). The
outermost ring of nodes is never an unknown, so interior loops skip it.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_operator(const double[:, ::1] u, const double[:, ::1] diag,
                   const double[:, ::1] cx, const double[:, ::1] cy,
                   double[:, ::1] out):
    """out = A u for the five-point operator stored as diagonal and couplings."""
    cdef Py_ssize_t ny = u.shape[0], nx = u.shape[1], i, j
    cdef double s
    for j in range(ny):
        out[j, 0] = 0.0
        out[j, nx - 1] = 0.0
    for i in range(nx):
        out[0, i] = 0.0
        out[ny - 1, i] = 0.0
    for j in range(1, ny - 1):
        for i in range(1, nx - 1):
            s = cx[j, i] * u[j, i + 1] + cx[j, i - 1] * u[j, i - 1]
            s = s + cy[j, i] * u[j + 1, i]
            s = s + cy[j - 1, i] * u[j - 1, i]
            out[j, i] = diag[j, i] * u[j, i] - s
    return np.asarray(out)


def smooth_color(double[:, ::1] u, const double[:, ::1] f,
                 const double[:, ::1] invdiag, const double[:, ::1] cx,
                 const double[:, ::1] cy, int color):
    """One Gauss-Seidel half sweep over nodes with (i + j) % 2 == color."""
    cdef Py_ssize_t ny = u.shape[0], nx = u.shape[1], i, j, start
    cdef double t
    for j in range(1, ny - 1):
        start = 1 + ((j + 1 + color) % 2)
        for i in range(start, nx - 1, 2):
            if invdiag[j, i] == 0.0:
                continue
            t = f[j, i] + cx[j, i] * u[j, i + 1]
            t = t + cx[j, i - 1] * u[j, i - 1]
            t = t + cy[j, i] * u[j + 1, i]
            t = t + cy[j - 1, i] * u[j - 1, i]
            u[j, i] = t * invdiag[j, i]
