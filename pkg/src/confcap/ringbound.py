"""Lower bounds for polygonal ring condensers by quadrilateral decomposition.

A polygonal ring is described by outer vertices a_0..a_{m-1} and inner
vertices b_0..b_{m-1}. Quadrilateral j has vertices
(a_{j-1}, a_j, b_j, b_{j-1}) and separates the outer side [a_{j-1}, a_j]
from the inner side [b_{j-1}, b_j]. The capacity of the ring is at least
the sum over j of the moduli of the curve families joining these sides,
that is the sum of reciprocal quadrilateral moduli.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .capforms import RectSegmentSpec
from .errors import ConfcapError, ConstraintError, ConstraintWarning, DomainError
from .quadmod import qm, qmt

__all__ = [
    "PolygonalRing",
    "cap_regular_ring",
    "normalize_quadrilateral",
    "quadrilateral_modulus",
    "rect_segment_lower_bound",
    "rect_segment_ring",
    "regular_ring",
    "regular_ring_vertices",
    "ring_lower_bound",
]

_COLLINEAR_TOL = 1e-10
_SLACK = 1e-14


def normalize_quadrilateral(p0, p1, p2, p3):
    """Images (A, B) of p2, p3 under the similarity sending p0, p1 to 0, 1."""
    p0, p1, p2, p3 = (complex(p) for p in (p0, p1, p2, p3))
    if p1 == p0:
        raise DomainError("degenerate side: p0 == p1")
    scale = p1 - p0
    return (p2 - p0) / scale, (p3 - p0) / scale


def _marked_side(A, B):
    """True when A lies strictly inside the segment [1, B]."""
    t = (A - 1.0) / (B - 1.0)
    return abs(t.imag) <= _COLLINEAR_TOL * abs(t) and 0.0 < t.real < 1.0


def quadrilateral_modulus(p0, p1, p2, p3):
    """Modulus of a quadrilateral relative to its sides [p0, p1] and [p2, p3].

    If some vertex lies on the segment joining its neighbours the triangle
    solver is used on the cyclic relabelling that puts that vertex third;
    a shift by one vertex swaps the sides and inverts the modulus.
    Otherwise the hypergeometric solver is used.
    """
    pts = [complex(p) for p in (p0, p1, p2, p3)]
    for k in range(4):
        w = pts[k:] + pts[:k]
        A, B = normalize_quadrilateral(*w)
        if B.imag > 0 and _marked_side(A, B):
            value = qmt(A, B)
            return value if k % 2 == 0 else 1.0 / value
    A, B = normalize_quadrilateral(*pts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConstraintWarning)
        return qm(A, B)


def _orient(p, q, r):
    return (q - p).real * (r - p).imag - (q - p).imag * (r - p).real


def _proper_crossing(p1, p2, q1, q2):
    """Segments cross at a point interior to both (touching does not count)."""
    scale = max(abs(p1), abs(p2), abs(q1), abs(q2), 1.0) ** 2
    tol = _SLACK * scale
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    return ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and (
        (d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)
    )


def _point_in_polygon(z, poly):
    """Strict interior test by crossing parity."""
    inside = False
    n = len(poly)
    for j in range(n):
        p, q = poly[j - 1], poly[j]
        if (p.imag > z.imag) != (q.imag > z.imag):
            x = p.real + (z.imag - p.imag) * (q.real - p.real) / (q.imag - p.imag)
            if x > z.real:
                inside = not inside
    return inside


@dataclass(frozen=True)
class PolygonalRing:
    outer: tuple
    inner: tuple

    def __post_init__(self):
        outer = tuple(complex(z) for z in self.outer)
        inner = tuple(complex(z) for z in self.inner)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)
        if len(outer) != len(inner) or len(outer) < 3:
            raise ConstraintError("outer and inner chains need the same length m >= 3")
        self.validate()

    @property
    def m(self):
        return len(self.outer)

    def quadrilateral(self, j):
        """Vertices (a_{j-1}, a_j, b_j, b_{j-1}) of quadrilateral j."""
        a, b = self.outer, self.inner
        return a[j - 1], a[j], b[j], b[j - 1]

    def quadrilaterals(self):
        return [self.quadrilateral(j) for j in range(self.m)]

    def validate(self):
        outer = list(self.outer)
        # inner vertices strictly inside the outer polygon
        for z in self.inner:
            if not _point_in_polygon(z, outer):
                raise ConstraintError(f"inner vertex {z} is not inside the outer polygon")
        quads = self.quadrilaterals()
        edges = [[(q[i - 1], q[i]) for i in range(4)] for q in quads]
        for i in range(len(quads)):
            for j in range(i + 1, len(quads)):
                for e in edges[i]:
                    for f in edges[j]:
                        if _proper_crossing(e[0], e[1], f[0], f[1]):
                            raise ConstraintError(
                                f"quadrilaterals {i} and {j} overlap"
                            )


def ring_lower_bound(ring, moduli=None):
    """Sum over the quadrilaterals of the ring of the reciprocal moduli.

    ``moduli`` may map quadrilateral indices to already known moduli; the
    others are computed.
    """
    total = 0.0
    for j, quad in enumerate(ring.quadrilaterals()):
        if moduli is not None and j in moduli:
            value = moduli[j]
        else:
            try:
                value = quadrilateral_modulus(*quad)
            except ConfcapError as exc:
                raise type(exc)(f"quadrilateral {j}: {exc}") from exc
        total += 1.0 / value
    return total


def regular_ring_vertices(m, lam):
    """Outer vertices on the unit circle and inner ones on |z| = lam."""
    theta = 2.0 * np.pi * np.arange(m) / m
    return np.exp(1j * theta), lam * np.exp(1j * theta)


def regular_ring(m, lam):
    outer, inner = regular_ring_vertices(m, lam)
    return PolygonalRing(tuple(outer), tuple(inner))


def _regular_quadrilateral(m, lam):
    cot = 1.0 / math.tan(math.pi / m)
    A = complex(0.5 * (1.0 + lam), 0.5 * (1.0 - lam) * cot)
    B = complex(0.5 * (1.0 - lam), 0.5 * (1.0 - lam) * cot)
    return A, B


def cap_regular_ring(m, lam):
    """Capacity of the ring between two concentric regular m-gons.

    The outer polygon has circumradius 1 and the inner one lam; for the
    regular ring the decomposition bound is an equality.
    """
    if m < 3 or m != int(m):
        raise DomainError(f"need an integer m >= 3, got {m!r}")
    if not 0 < lam < 1:
        raise DomainError(f"need 0 < lam < 1, got {lam!r}")
    A, B = _regular_quadrilateral(m, lam)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConstraintWarning)
        return m / qm(A, B)


def rect_segment_ring(spec):
    """Decomposition of the rectangle (-a, a) x (0, b) minus the slit [ic, id].

    The outer chain runs a, a + bi, bi, -a + bi, -a, 0 and is joined to the
    slit at its tips and at the points splitting it into thirds. The two
    side quadrilaterals are genuine quadrilaterals; the four others are
    triangles with a marked point, one of their sides lying on the axis.
    """
    if not isinstance(spec, RectSegmentSpec):
        spec = RectSegmentSpec(*spec)
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    p1 = 1j * (c + (d - c) / 3.0)
    p2 = 1j * (c + 2.0 * (d - c) / 3.0)
    outer = (a, a + 1j * b, 1j * b, -a + 1j * b, -a, 0.0)
    inner = (p1, p2, 1j * d, p2, p1, 1j * c)
    # rotate so that quadrilateral j = (a_{j-1}, a_j, b_j, b_{j-1}) starts on the right side
    return PolygonalRing(outer[1:] + outer[:1], inner[1:] + inner[:1])


def rect_segment_lower_bound(spec):
    """Decomposition bound for the rectangle with a slit, using the mirror
    symmetry in the imaginary axis to compute only three moduli."""
    ring = rect_segment_ring(spec)
    quads = ring.quadrilaterals()
    total = 0.0
    seen = {}
    for quad in quads:
        key = tuple(sorted((round(abs(z.real), 12), round(z.imag, 12)) for z in quad))
        if key not in seen:
            seen[key] = quadrilateral_modulus(*quad)
        total += 1.0 / seen[key]
    return total
