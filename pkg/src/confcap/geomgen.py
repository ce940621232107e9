"""Deterministic generators for the condenser families used in experiments.

Random families draw from :class:`SeededRng`, a counter-based Philox
stream, so every generator is a pure function of its parameters and seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .capforms import RectSegmentSpec, et_max_t
from .capsolve import UNIT_DISK, Condenser
from .errors import ConstraintError, DomainError
from .hypgeom import Arc, PiecewiseCurve, Segment, geodesic_arc, hyp_disk_to_euclidean
from .ringbound import PolygonalRing, _proper_crossing

__all__ = [
    "SeededRng",
    "build_Et",
    "build_halfdisk",
    "build_rect_segment",
    "et_radii",
    "gen_convex_polygon",
    "gen_hyperbolic_polygon",
    "gen_nonconvex_polygon",
    "gen_trapezium_ring",
    "hyperbolic_polygon",
    "is_convex",
    "is_simple",
    "polygon_in_polygon",
]

MAX_REDRAWS = 1000


class SeededRng:
    """Philox stream keyed by a 64-bit seed and an optional stream path.

    ``spawn(k)`` gives an independent child stream, so that sweeps can draw
    row k without consuming the parent stream.
    """

    def __init__(self, seed, path=()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.path = tuple(int(p) for p in path)
        sequence = np.random.SeedSequence(seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(sequence))
        self.counter = 0

    def spawn(self, k):
        return SeededRng(self.seed, self.path + (k,))

    def uniform(self, low=0.0, high=1.0, size=None):
        """Uniform draws in the open interval (low, high)."""
        n = 1 if size is None else int(size)
        out = np.empty(n)
        for i in range(n):
            x = 0.0
            while x == 0.0:
                x = self._gen.random()
                self.counter += 1
            out[i] = low + (high - low) * x
        return float(out[0]) if size is None else out

    def integer(self, low, high):
        """Uniform integer in {low, ..., high}."""
        self.counter += 1
        return int(low + math.floor(self._gen.random() * (high - low + 1)))


def _angles(rng, m, shift, spread):
    tau = rng.uniform(size=m)
    return (np.arange(1, m + 1) - shift + spread * tau) * 2.0 * np.pi / m


def _cross(p, q):
    return p.real * q.imag - p.imag * q.real


def is_convex(vertices):
    """True for a convex polygon in counterclockwise order."""
    v = np.asarray(vertices, dtype=complex)
    e = np.roll(v, -1) - v
    turns = _cross(e, np.roll(e, -1))
    return bool(np.all(turns > 0.0))


def is_simple(vertices):
    """No two non-adjacent sides of the closed chain cross or touch."""
    v = [complex(z) for z in vertices]
    m = len(v)
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            p1, p2, q1, q2 = v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]
            if _proper_crossing(p1, p2, q1, q2):
                return False
    return True


def _max_gap(theta):
    return float(np.max(np.diff(np.concatenate([theta, [theta[0] + 2.0 * np.pi]]))))


def gen_convex_polygon(rng):
    """m in 3..12 vertices s e^{i theta_j} on one circle, theta_j jittered
    around 2 pi j / m; non-convex draws are redrawn."""
    for _ in range(MAX_REDRAWS):
        m = rng.integer(3, 12)
        s = rng.uniform(0.05, 0.95)
        theta = _angles(rng, m, 1.25, 0.5)
        v = s * np.exp(1j * theta)
        if is_convex(v):
            return v
    raise ConstraintError("no convex polygon within the redraw limit")


def hyperbolic_polygon(vertices):
    """Closed curve through the vertices whose sides are hyperbolic geodesics."""
    v = [complex(z) for z in vertices]
    if len(v) < 3:
        raise DomainError("a polygon needs at least three vertices")
    return PiecewiseCurve(geodesic_arc(v[j], v[(j + 1) % len(v)]) for j in range(len(v)))


def gen_hyperbolic_polygon(rng):
    """Vertices as in :func:`gen_convex_polygon`, sides replaced by geodesics."""
    return hyperbolic_polygon(gen_convex_polygon(rng))


def gen_nonconvex_polygon(rng):
    """Vertices r_j e^{i theta_j} with radii alternating between (0.5, 0.95)
    and (0.05, 0.5).

    Draws are kept when the polygon is simple, has a reflex angle and every
    angular gap is below pi, which makes it star-shaped about 0.
    """
    for _ in range(MAX_REDRAWS):
        m = rng.integer(3, 12)
        radii = np.empty(m)
        for j in range(m):
            radii[j] = rng.uniform(0.5, 0.95) if j % 2 == 0 else rng.uniform(0.05, 0.5)
        theta = _angles(rng, m, 1.25, 0.5)
        v = radii * np.exp(1j * theta)
        if _max_gap(theta) < np.pi and not is_convex(v) and is_simple(v):
            return v
    raise ConstraintError("no nonconvex polygon within the redraw limit")


def gen_trapezium_ring(m, rng):
    """Ring with outer vertices of modulus in (2.5, 3) and inner vertices of
    modulus in (1, 1.5); draws violating the ring invariants are redrawn."""
    if m < 3 or m != int(m):
        raise DomainError(f"need an integer m >= 3, got {m!r}")
    for _ in range(MAX_REDRAWS):
        outer = (3.0 - 0.5 * rng.uniform(size=m)) * np.exp(1j * _angles(rng, m, 1.2, 0.4))
        inner = (1.0 + 0.5 * rng.uniform(size=m)) * np.exp(1j * _angles(rng, m, 1.2, 0.4))
        try:
            return PolygonalRing(tuple(outer), tuple(inner))
        except ConstraintError:
            continue
    raise ConstraintError("no valid ring within the redraw limit")


def et_radii(r, t):
    """Radii v < r < u of the circles bounding the tube of radius t about |z| = r."""
    a = math.atanh(r)
    return math.tanh(a + 0.5 * t), math.tanh(a - 0.5 * t)


def build_Et(theta, r, t):
    """Boundary of the hyperbolic t-neighbourhood of the arc
    {r e^{is} : theta <= s <= 2 pi}, counterclockwise.

    It consists of the arcs |z| = u and |z| = v and two half circles, the
    ends of the hyperbolic disks of radius t about r and r e^{i theta}.
    """
    if not 0 < theta < 0.5 * math.pi or not 0 < r < 1:
        raise DomainError(f"need 0 < theta < pi/2 and 0 < r < 1, got ({theta!r}, {r!r})")
    tmax = et_max_t(theta, r)
    if not 0 < t <= tmax * (1.0 + 1e-12):
        raise ConstraintError(f"t = {t!r} outside (0, {tmax!r}]")
    u, v = et_radii(r, t)
    disk = hyp_disk_to_euclidean(r, t)
    c, R = disk.center.real, disk.radius
    rot = complex(math.cos(theta), math.sin(theta))
    return PiecewiseCurve([
        Arc(0j, u, theta, 2.0 * math.pi - theta),
        Arc(complex(c), R, 0.0, math.pi),
        Arc(0j, v, 2.0 * math.pi, theta - 2.0 * math.pi),
        Arc(c * rot, R, theta + math.pi, math.pi),
    ])


def build_halfdisk(x, t):
    """The unit disk with the upper half of the hyperbolic disk B(x, t) as plate."""
    if not 0 < x < 1 or not t > 0:
        raise DomainError(f"need 0 < x < 1 and t > 0, got ({x!r}, {t!r})")
    disk = hyp_disk_to_euclidean(x, t)
    c, R = disk.center.real, disk.radius
    if not (-1.0 < c - R and c + R < 1.0):
        raise ConstraintError("the half disk is not inside the unit disk")
    curve = PiecewiseCurve([Segment(complex(c - R), complex(c + R)), Arc(complex(c), R, 0.0, math.pi)])
    return Condenser(UNIT_DISK, curve, name=f"halfdisk(x={x:g}, t={t:g})")


def build_rect_segment(spec):
    """The rectangle (-a, a) x (0, b) with the slit [ic, id] as plate."""
    if not isinstance(spec, RectSegmentSpec):
        spec = RectSegmentSpec(*spec)
    a, b = spec.a, spec.b
    rect = [a, a + 1j * b, -a + 1j * b, -a]
    slit = PiecewiseCurve.slit(1j * spec.c, 1j * spec.d)
    return Condenser(rect, slit, name=f"rect_segment{(spec.a, spec.b, spec.c, spec.d)}")


@dataclass(frozen=True)
class PolygonInPolygon:
    """C-shaped polygon with a C-shaped band of half width t inside it."""

    t: float

    def __post_init__(self):
        if not 0 < self.t < 3:
            raise DomainError(f"need 0 < t < 3, got {self.t!r}")

    @property
    def outer(self):
        return (3j, 6 + 3j, 6 + 9j, -6 + 9j, -6 - 9j, 5 - 9j, 5 - 3j, -3j)

    @property
    def inner(self):
        lo, hi = 6.0 - self.t, 6.0 + self.t
        return (-2 + lo * 1j, 5 + lo * 1j, 5 + hi * 1j, -4 + hi * 1j,
                -4 - hi * 1j, 4 - hi * 1j, 4 - lo * 1j, -2 - lo * 1j)

    def ring(self):
        return PolygonalRing(self.outer, self.inner)

    def condenser(self):
        return Condenser(self.outer, self.inner, name=f"polygon_in_polygon(t={self.t:g})")


def polygon_in_polygon(t):
    return PolygonInPolygon(float(t))
