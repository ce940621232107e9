"""Hyperbolic geometry of the unit disk: distances, hyperbolic disks as
Euclidean disks, geodesic arcs and perimeter quadrature.

Curves come in two flavours. :class:`BoundaryCurve` holds samples of a
2π-periodic parametrization at uniform nodes, which is what the trapezoidal
rule needs. :class:`PiecewiseCurve` is an exact description as a chain of
straight segments and circular arcs; it integrates piece by piece with
Gauss-Legendre, samples itself into a BoundaryCurve and flattens into
polylines for the grid solver.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError, DomainError

__all__ = [
    "Arc",
    "BoundaryCurve",
    "EuclideanDisk",
    "PiecewiseCurve",
    "Segment",
    "circle_perimeter_hyp",
    "disk_area_hyp",
    "geodesic_arc",
    "hyp_disk_to_euclidean",
    "hyperbolic_length",
    "perimeter",
    "perimeter_trapezoid",
    "polygon_hyp_perimeter",
    "rho_disk",
    "spectral_derivative",
]

_GL_ORDER = 64
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _check_in_disk(*points):
    for p in points:
        if not abs(p) < 1.0:
            raise DomainError(f"point {p!r} is not inside the unit disk")


def _one_minus_abs2(z):
    a = abs(z)
    return (1.0 - a) * (1.0 + a)


def rho_disk(x, y):
    """Hyperbolic distance between two points of the unit disk."""
    x, y = complex(x), complex(y)
    _check_in_disk(x, y)
    return 2.0 * math.asinh(abs(x - y) / math.sqrt(_one_minus_abs2(x) * _one_minus_abs2(y)))


@dataclass(frozen=True)
class EuclideanDisk:
    center: complex
    radius: float

    def boundary_points(self, n):
        s = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * s)


def hyp_disk_to_euclidean(x, M):
    """Euclidean center and radius of the hyperbolic disk B(x, M)."""
    x = complex(x)
    _check_in_disk(x)
    if not M > 0:
        raise DomainError(f"hyperbolic radius must be positive, got {M!r}")
    t = math.tanh(0.5 * M)
    ax2 = abs(x) ** 2
    denom = 1.0 - ax2 * t * t
    return EuclideanDisk(x * (1.0 - t * t) / denom, _one_minus_abs2(x) * t / denom)


def circle_perimeter_hyp(R):
    """Hyperbolic length of a hyperbolic circle of radius R."""
    return 2.0 * math.pi * math.sinh(R)


def disk_area_hyp(R):
    """Hyperbolic area of a hyperbolic disk of radius R."""
    return 4.0 * math.pi * math.sinh(0.5 * R) ** 2


def hyperbolic_length(points, derivatives, weights):
    """Quadrature of the hyperbolic line element 2|dz|/(1-|z|^2)."""
    points = np.asarray(points, dtype=complex)
    a = np.abs(points)
    if np.any(a >= 1.0):
        raise DomainError("curve leaves the open unit disk")
    return float(np.sum(weights * 2.0 * np.abs(derivatives) / ((1.0 - a) * (1.0 + a))))


# --------------------------------------------------------------------------
# Curve pieces


@dataclass(frozen=True)
class Segment:
    """Straight segment from ``start`` to ``end``, parametrized on [0, 1]."""

    start: complex
    end: complex

    @property
    def length(self):
        return abs(self.end - self.start)

    def point(self, t):
        return self.start + (self.end - self.start) * np.asarray(t, dtype=float)

    def derivative(self, t):
        return np.full(np.shape(t), self.end - self.start, dtype=complex)

    def reversed(self):
        return Segment(self.end, self.start)

    def flatten(self, sagitta):
        return np.array([self.start], dtype=complex)


@dataclass(frozen=True)
class Arc:
    """Circular arc with signed angular ``sweep`` starting at angle ``angle0``."""

    center: complex
    radius: float
    angle0: float
    sweep: float

    @property
    def start(self):
        return self.center + self.radius * np.exp(1j * self.angle0)

    @property
    def end(self):
        return self.center + self.radius * np.exp(1j * (self.angle0 + self.sweep))

    @property
    def length(self):
        return abs(self.sweep) * self.radius

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.angle0 + self.sweep * np.asarray(t)))

    def derivative(self, t):
        ang = self.angle0 + self.sweep * np.asarray(t)
        return 1j * self.sweep * self.radius * np.exp(1j * ang)

    def reversed(self):
        return Arc(self.center, self.radius, self.angle0 + self.sweep, -self.sweep)

    def flatten(self, sagitta):
        # chord length with the prescribed sagitta, at least 8 chords per arc
        chord = math.sqrt(8.0 * self.radius * sagitta)
        n = max(8, math.ceil(self.length / chord))
        return self.point(np.arange(n) / n)

    @classmethod
    def through(cls, center, start, end, ccw=True):
        """Arc about ``center`` from ``start`` to ``end`` in the given sense."""
        a0 = math.atan2((start - center).imag, (start - center).real)
        a1 = math.atan2((end - center).imag, (end - center).real)
        sweep = (a1 - a0) % (2.0 * math.pi)
        if not ccw:
            sweep -= 2.0 * math.pi
        return cls(complex(center), abs(start - center), a0, sweep)


def geodesic_arc(v, w):
    """Hyperbolic geodesic from v to w as a curve piece.

    The geodesic is the arc of the circle through v and w orthogonal to the
    unit circle, or the straight chord when v and w lie on a diameter.
    """
    v, w = complex(v), complex(w)
    _check_in_disk(v, w)
    if v == w:
        raise DomainError("geodesic endpoints coincide")
    im = (v.conjugate() * w).imag
    if abs(im) < 1e-12:
        return Segment(v, w)
    c = (w * (1.0 + abs(v) ** 2) - v * (1.0 + abs(w) ** 2)) / (2j * im)
    a0 = math.atan2((v - c).imag, (v - c).real)
    a1 = math.atan2((w - c).imag, (w - c).real)
    sweep = (a1 - a0 + math.pi) % (2.0 * math.pi) - math.pi
    return Arc(c, abs(v - c), a0, sweep)


def _piece_hyp_length(piece):
    t = 0.5 * (_GL_NODES + 1.0)
    return hyperbolic_length(piece.point(t), piece.derivative(t), 0.5 * _GL_WEIGHTS)


# --------------------------------------------------------------------------
# Sampled curves


@dataclass
class BoundaryCurve:
    """Samples of a closed 2π-periodic parametrization at s_k = 2πk/n."""

    positions: np.ndarray
    derivatives: np.ndarray
    orientation: str = "ccw"
    corners: np.ndarray = None
    source: "PiecewiseCurve" = field(default=None, repr=False)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=complex)
        self.derivatives = np.asarray(self.derivatives, dtype=complex)
        n = self.positions.size
        if n == 0 or n % 2 or self.derivatives.size != n:
            raise ConstraintError("a boundary curve needs an even number of samples")
        if self.corners is None:
            self.corners = np.zeros(n, dtype=bool)
        if self.orientation not in ("ccw", "cw"):
            raise ConstraintError(f"unknown orientation {self.orientation!r}")

    @property
    def n(self):
        return self.positions.size

    @classmethod
    def from_function(cls, func, n, derivative=None, orientation="ccw"):
        """Sample ``func`` (and its derivative, spectral if not given)."""
        s = 2.0 * np.pi * np.arange(n) / n
        pos = np.asarray(func(s), dtype=complex)
        der = spectral_derivative(pos) if derivative is None else derivative(s)
        return cls(pos, der, orientation)


def spectral_derivative(samples):
    """Derivative of the trigonometric interpolant at the sample nodes."""
    samples = np.asarray(samples, dtype=complex)
    n = samples.size
    if n % 2:
        raise DomainError("spectral differentiation needs an even number of samples")
    k = np.fft.fftfreq(n, d=1.0 / n)
    k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(samples))


def perimeter_trapezoid(curve):
    """Hyperbolic perimeter of a sampled curve by the trapezoidal rule."""
    return hyperbolic_length(curve.positions, curve.derivatives, 2.0 * np.pi / curve.n)


def perimeter(curve):
    """Hyperbolic perimeter, splitting at corners when the curve has any.

    Smooth sampled curves use the trapezoidal rule. Curves with corners that
    carry their exact piecewise description are integrated piece by piece.
    """
    if isinstance(curve, PiecewiseCurve):
        return curve.hyperbolic_perimeter()
    if curve.source is not None and np.any(curve.corners):
        return curve.source.hyperbolic_perimeter()
    return perimeter_trapezoid(curve)


def polygon_hyp_perimeter(vertices):
    """Sum of hyperbolic side lengths of the closed chain through ``vertices``."""
    v = [complex(z) for z in vertices]
    if len(v) < 2:
        raise DomainError("a closed chain needs at least two vertices")
    return sum(rho_disk(v[j - 1], v[j]) for j in range(len(v)))


# --------------------------------------------------------------------------
# Piecewise curves


class PiecewiseCurve:
    """Closed chain of segments and arcs; each piece ends where the next starts."""

    def __init__(self, pieces):
        self.pieces = tuple(pieces)
        if not self.pieces:
            raise ConstraintError("a curve needs at least one piece")
        for p, q in zip(self.pieces, self.pieces[1:] + self.pieces[:1]):
            gap = abs(complex(p.end) - complex(q.start))
            if gap > 1e-9 * max(1.0, abs(complex(q.start))):
                raise ConstraintError(f"pieces do not join: gap {gap:.3g}")

    @classmethod
    def polygon(cls, vertices):
        v = [complex(z) for z in vertices]
        return cls(Segment(v[j], v[(j + 1) % len(v)]) for j in range(len(v)))

    @classmethod
    def circle(cls, center, radius):
        return cls([Arc(complex(center), float(radius), 0.0, 2.0 * math.pi)])

    @classmethod
    def slit(cls, a, b):
        """A segment traversed out and back, the boundary of a slit."""
        return cls([Segment(complex(a), complex(b)), Segment(complex(b), complex(a))])

    @property
    def vertices(self):
        return np.array([complex(p.start) for p in self.pieces])

    @property
    def length(self):
        return sum(p.length for p in self.pieces)

    def signed_area(self):
        """Signed enclosed area (positive for counterclockwise curves)."""
        t = 0.5 * (_GL_NODES + 1.0)
        total = 0.0
        for p in self.pieces:
            z, dz = p.point(t), p.derivative(t)
            total += 0.5 * float(np.sum(0.5 * _GL_WEIGHTS * (z.conjugate() * dz).imag))
        return total

    @property
    def orientation(self):
        return "cw" if self.signed_area() < 0 else "ccw"

    def reversed(self):
        return PiecewiseCurve(p.reversed() for p in reversed(self.pieces))

    def hyperbolic_perimeter(self):
        return sum(_piece_hyp_length(p) for p in self.pieces)

    def polyline(self, sagitta):
        """Vertices of an inscribed polygon; arcs are split into chords."""
        return np.concatenate([p.flatten(sagitta) for p in self.pieces])

    def bounding_box(self):
        pts = self.polyline(1e-4 * max(self.length, 1e-12))
        return pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max()

    def sample(self, n):
        """Uniform samples of a parametrization proportional to arc length."""
        lengths = np.array([max(p.length, 1e-300) for p in self.pieces])
        edges = 2.0 * np.pi * np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()
        s = 2.0 * np.pi * np.arange(n) / n
        idx = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(self.pieces) - 1)
        pos = np.empty(n, dtype=complex)
        der = np.empty(n, dtype=complex)
        for j, p in enumerate(self.pieces):
            sel = idx == j
            span = edges[j + 1] - edges[j]
            t = (s[sel] - edges[j]) / span
            pos[sel] = p.point(t)
            der[sel] = p.derivative(t) / span
        corners = np.zeros(n, dtype=bool)
        if len(self.pieces) > 1:
            near = np.rint(edges[:-1] * n / (2.0 * np.pi)).astype(int) % n
            corners[near] = True
        return BoundaryCurve(pos, der, self.orientation, corners, source=self)
