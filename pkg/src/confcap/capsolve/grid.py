"""Condensers and their cut-edge finite-difference discretization.

Nodes sit at x0 + i h, y0 + j h. A node is an unknown when it lies inside
the outer curve and outside every inner curve. Grid edges that cross a
boundary are cut at the crossing: the part of the edge next to the node
is kept with the boundary value at its far end, which gives the energy term
(u_p - g)^2 / theta for a crossing at fraction theta of the edge. Slits are
boundaries of zero area and are handled the same way, without fattening.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConstraintError, ResolutionError
from ..hypgeom import PiecewiseCurve
from . import _backend

__all__ = [
    "Condenser",
    "DIRICHLET_0",
    "DIRICHLET_1",
    "GridField",
    "INTERIOR",
    "OUTSIDE",
    "UNIT_DISK",
    "build_grid",
]

INTERIOR = 0
DIRICHLET_0 = 1
DIRICHLET_1 = 2
OUTSIDE = 3

# nodes closer than this fraction of h to a boundary take its value
SNAP = 1e-2
# chord sagitta used to flatten arcs, relative to h
SAGITTA = 1e-4
# minimal number of cells across the gap between the plates
MIN_GAP_CELLS = 4.0

UNIT_DISK = PiecewiseCurve.circle(0.0, 1.0)


def _as_curve(obj):
    if isinstance(obj, PiecewiseCurve):
        return obj
    return PiecewiseCurve.polygon(np.asarray(obj, dtype=complex).ravel())


def _densify(poly, spacing):
    """Points along the closed polyline at most ``spacing`` apart."""
    p0 = poly
    p1 = np.roll(poly, -1)
    n = np.maximum(np.ceil(np.abs(p1 - p0) / spacing).astype(int), 1)
    seg = np.repeat(np.arange(poly.size), n)
    t = (np.arange(n.sum()) - np.repeat(np.cumsum(n) - n, n)) / n[seg]
    return p0[seg] + t * (p1[seg] - p0[seg])


def _inside_polygon(points, poly):
    """Crossing-parity test for many points against one closed polyline."""
    points = np.asarray(points, dtype=complex)
    p0 = poly[None, :]
    p1 = np.roll(poly, -1)[None, :]
    y = points.imag[:, None]
    straddle = (p0.imag > y) != (p1.imag > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = p0.real + (y - p0.imag) * (p1.real - p0.real) / (p1.imag - p0.imag)
    hits = straddle & (x > points.real[:, None])
    return (hits.sum(axis=1) % 2) == 1


@dataclass
class Condenser:
    """Condenser (G, E): outer boundary at potential 0, inner set at 1.

    ``outer`` is a closed curve; ``inner`` is one closed curve or a list of
    them, possibly slits of zero area. Curves are PiecewiseCurve objects or
    vertex sequences of polygons. Orientation does not matter.
    """

    outer: object = UNIT_DISK
    inner: object = None
    name: str = ""

    def __post_init__(self):
        if self.inner is None:
            raise ConstraintError("a condenser needs an inner set")
        self.outer = _as_curve(self.outer)
        if isinstance(self.inner, (list, tuple)) and not all(
            isinstance(z, (int, float, complex, np.number)) for z in self.inner
        ):
            self.inner = [_as_curve(c) for c in self.inner]
        else:
            self.inner = [_as_curve(self.inner)]
        if not self.inner:
            raise ConstraintError("the inner set is empty")
        self._validate()

    @property
    def size(self):
        x0, x1, y0, y1 = self.outer.bounding_box()
        return max(x1 - x0, y1 - y0)

    def polylines(self, sagitta):
        outer = self.outer.polyline(sagitta)
        inner = [c.polyline(sagitta) for c in self.inner]
        return outer, inner

    def _validate(self):
        outer, inner = self.polylines(1e-5 * self.size)
        for poly in inner:
            if not np.all(_inside_polygon(poly, outer)):
                raise ConstraintError("the inner set is not inside the outer curve")
        if self.gap() <= 0.0:
            raise ConstraintError("the inner set touches the outer curve")

    def gap(self, spacing=None):
        """Distance between the plates, to within about 1% or ``spacing``.

        Gaps below about 1e-5 of the size are reported as 0; the grid solver
        cannot resolve them anyway.
        """
        step = self.size / 512.0
        coarse = self._gap(step)
        fine = max(coarse / 128.0, self.size * 1e-5)
        if spacing is not None:
            fine = max(spacing, fine)
        if fine >= step:
            return coarse
        # the closest sampled pair is within coarse + 1.5 step; pruning the
        # search there keeps the fine pass cheap
        return self._gap(fine, coarse + 1.5 * step)

    def _gap(self, spacing, bound=np.inf):
        outer, inner = self.polylines(1e-2 * spacing)
        dense = _densify(outer, spacing)
        tree = cKDTree(np.column_stack([dense.real, dense.imag]))
        pts = np.concatenate([_densify(p, spacing) for p in inner])
        dist, _ = tree.query(np.column_stack([pts.real, pts.imag]), distance_upper_bound=bound)
        return max(float(dist.min()) - 0.5 * spacing, 0.0)


@dataclass
class GridField:
    """A discretized condenser and, once solved, its potential.

    ``mask`` labels nodes INTERIOR, DIRICHLET_0, DIRICHLET_1 or OUTSIDE.
    ``u`` holds the potential on the whole grid (None before solving).
    The discrete energy is u^T A u - 2 b^T u + c over the interior nodes,
    with A stored as ``diag`` and the east and north couplings ``cx``, ``cy``.
    """

    h: float
    x0: float
    y0: float
    mask: np.ndarray
    fixed: np.ndarray
    diag: np.ndarray
    cx: np.ndarray
    cy: np.ndarray
    rhs: np.ndarray
    const: float
    condenser: Condenser = field(default=None, repr=False)
    levels: int = 0
    u: np.ndarray = None
    info: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.mask.shape

    @property
    def interior(self):
        return self.mask == INTERIOR

    def coordinates(self):
        ny, nx = self.shape
        return self.x0 + self.h * np.arange(nx), self.y0 + self.h * np.arange(ny)

    def apply(self, v):
        out = np.empty_like(v)
        _backend.kernels.apply_operator(v, self.diag, self.cx, self.cy, out)
        return out

    def energy(self, u=None):
        """Discrete Dirichlet energy of the potential, the capacity estimate."""
        u = self.u if u is None else u
        if u is None:
            raise ValueError("the grid has not been solved")
        v = np.ascontiguousarray(np.where(self.interior, u, 0.0))
        return float(np.sum(v * self.apply(v)) - 2.0 * np.sum(self.rhs * v) + self.const)

    def dump(self, path):
        """Write the potential as a whitespace separated text matrix, row j per line."""
        if self.u is None:
            raise ValueError("the grid has not been solved")
        np.savetxt(path, self.u, fmt="%.10g")


def _crossings(poly, c0, h, count, axis):
    """Intersections of a closed polyline with the lines c0 + k h.

    ``axis`` 0 intersects horizontal lines (returns row index and x), 1
    vertical lines (column index and y). A segment meets the lines with
    min <= c < max, so shared vertices are counted once and segments lying
    on a line are skipped.
    """
    p0 = poly
    p1 = np.roll(poly, -1)
    if axis == 0:
        a0, a1, b0, b1 = p0.imag, p1.imag, p0.real, p1.real
    else:
        a0, a1, b0, b1 = p0.real, p1.real, p0.imag, p1.imag
    lo = np.minimum(a0, a1)
    hi = np.maximum(a0, a1)
    klo = np.ceil((lo - c0) / h).astype(np.int64)
    khi = np.ceil((hi - c0) / h).astype(np.int64) - 1
    klo = np.maximum(klo, 0)
    khi = np.minimum(khi, count - 1)
    n = np.maximum(khi - klo + 1, 0)
    seg = np.repeat(np.arange(poly.size), n)
    k = klo[seg] + np.arange(n.sum()) - np.repeat(np.cumsum(n) - n, n)
    c = c0 + k * h
    t = np.clip((c - a0[seg]) / (a1[seg] - a0[seg]), 0.0, 1.0)
    return k, b0[seg] + t * (b1[seg] - b0[seg])


def _nearest(dist, val, flat, frac, value):
    """Keep, per node, the smallest crossing fraction and its boundary value."""
    if flat.size == 0:
        return
    order = np.lexsort((frac, flat))
    flat, frac = flat[order], frac[order]
    first = np.ones(flat.size, dtype=bool)
    first[1:] = flat[1:] != flat[:-1]
    flat, frac = flat[first], frac[first]
    d = dist.reshape(-1)
    v = val.reshape(-1)
    better = frac < d[flat]
    d[flat[better]] = frac[better]
    v[flat[better]] = value


def _layout(condenser, h, levels):
    """Origin and node counts of a box with 2^levels-aligned cell counts."""
    x0, x1, y0, y1 = condenser.outer.bounding_box()
    if levels is None:
        levels = 0
        while True:
            H = h * 2 ** (levels + 1)
            nxc = math.ceil((x1 - x0) / H) + 2
            nyc = math.ceil((y1 - y0) / H) + 2
            if max(nxc, nyc) < 24 or min(nxc, nyc) < 6:
                break
            levels += 1
    H = h * 2**levels
    nxc = math.ceil((x1 - x0) / H) + 2
    nyc = math.ceil((y1 - y0) / H) + 2
    ox = 0.5 * (x0 + x1) - 0.5 * nxc * H
    oy = 0.5 * (y0 + y1) - 0.5 * nyc * H
    return ox, oy, nxc * 2**levels + 1, nyc * 2**levels + 1, levels


def _classify(condenser, h, x0, y0, nx, ny):
    """Node masks, boundary values and nearest crossings in four directions."""
    outer, inner = condenser.polylines(SAGITTA * h)
    dist = {d: np.full((ny, nx), np.inf) for d in "EWNS"}
    val = {d: np.zeros((ny, nx)) for d in "EWNS"}
    parity = []
    for poly, value in [(outer, 0.0)] + [(p, 1.0) for p in inner]:
        j, x = _crossings(poly, y0, h, ny, 0)
        fi = (x - x0) / h
        # parity: nodes strictly to the right of a crossing
        first = np.floor(fi).astype(np.int64) + 1
        keep = (first >= 0) & (first < nx)
        count = np.zeros((ny, nx), dtype=np.int64)
        np.add.at(count, (j[keep], first[keep]), 1)
        parity.append(np.cumsum(count, axis=1) % 2 == 1)
        i = np.floor(fi).astype(np.int64)
        f = fi - i
        ok = (i >= 0) & (i < nx - 1)
        j, i, f = j[ok], i[ok], f[ok]
        _nearest(dist["E"], val["E"], j * nx + i, f, value)
        _nearest(dist["W"], val["W"], j * nx + i + 1, 1.0 - f, value)
        i, y = _crossings(poly, x0, h, nx, 1)
        fj = (y - y0) / h
        j = np.floor(fj).astype(np.int64)
        f = fj - j
        ok = (j >= 0) & (j < ny - 1)
        j, i, f = j[ok], i[ok], f[ok]
        _nearest(dist["N"], val["N"], j * nx + i, f, value)
        _nearest(dist["S"], val["S"], (j + 1) * nx + i, 1.0 - f, value)
    in_outer = parity[0]
    in_inner = np.logical_or.reduce(parity[1:])
    mask = np.full((ny, nx), OUTSIDE, dtype=np.int8)
    mask[in_outer & ~in_inner] = INTERIOR
    mask[in_outer & in_inner] = DIRICHLET_1
    mask[[0, -1], :] = np.where(mask[[0, -1], :] == INTERIOR, DIRICHLET_0, mask[[0, -1], :])
    mask[:, [0, -1]] = np.where(mask[:, [0, -1]] == INTERIOR, DIRICHLET_0, mask[:, [0, -1]])
    fixed = np.where(mask == DIRICHLET_1, 1.0, 0.0)
    for d in "EWNS":
        snap = (mask == INTERIOR) & (dist[d] < SNAP)
        fixed[snap] = val[d][snap]
        mask[snap] = np.where(val[d][snap] > 0.5, DIRICHLET_1, DIRICHLET_0)
    return mask, fixed, dist, val


def _shift(a, d, fill):
    """Value of the neighbour in direction d, ``fill`` beyond the grid."""
    out = np.full_like(a, fill)
    if d == "E":
        out[:, :-1] = a[:, 1:]
    elif d == "W":
        out[:, 1:] = a[:, :-1]
    elif d == "N":
        out[:-1, :] = a[1:, :]
    else:
        out[1:, :] = a[:-1, :]
    return out


def _assemble(mask, fixed, dist, val):
    interior = mask == INTERIOR
    ny, nx = mask.shape
    diag = np.zeros((ny, nx))
    rhs = np.zeros((ny, nx))
    cx = np.zeros((ny, nx))
    cy = np.zeros((ny, nx))
    const_terms = []
    for d in "EWNS":
        cut = interior & np.isfinite(dist[d])
        w = np.zeros((ny, nx))
        w[cut] = 1.0 / np.maximum(dist[d][cut], SNAP)
        g = np.where(cut, val[d], _shift(fixed, d, 0.0))
        neighbour = _shift(interior, d, False)
        coupled = interior & ~cut & neighbour
        boundary = interior & ~cut & ~neighbour
        w[boundary] = 1.0
        diag += w + coupled
        rhs += w * g
        const_terms.append(np.sum(w * g * g))
        if d == "E":
            cx[coupled] = 1.0
        elif d == "N":
            cy[coupled] = 1.0
    return diag, cx, cy, rhs, math.fsum(const_terms)


def _discretize(condenser, h, x0, y0, nx, ny):
    mask, fixed, dist, val = _classify(condenser, h, x0, y0, nx, ny)
    diag, cx, cy, rhs, const = _assemble(mask, fixed, dist, val)
    return GridField(h, x0, y0, mask, fixed, diag, cx, cy, rhs, const, condenser)


def build_grid(condenser, h, *, levels=None, check_gap=True):
    """Discretize ``condenser`` with spacing ``h``.

    The box covers the outer curve with a margin and has cell counts
    divisible by 2^levels so that the multigrid hierarchy nests; by default
    levels are added until the coarsest grid has a few dozen cells per side.
    Raises ResolutionError when the plates are less than four cells apart.
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    if check_gap:
        gap = condenser.gap(0.25 * h)
        if gap < MIN_GAP_CELLS * h:
            raise ResolutionError(
                f"gap {gap:.4g} between the plates spans fewer than "
                f"{MIN_GAP_CELLS:g} cells of size {h:.4g}"
            )
    x0, y0, nx, ny, levels = _layout(condenser, h, levels)
    grid = _discretize(condenser, h, x0, y0, nx, ny)
    grid.levels = levels
    if not np.any(grid.interior):
        raise ResolutionError("no interior nodes at this resolution")
    return grid
