import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from confcap.errors import ConstraintError, DomainError
from confcap.hypgeom import (
    Arc,
    BoundaryCurve,
    PiecewiseCurve,
    Segment,
    circle_perimeter_hyp,
    disk_area_hyp,
    geodesic_arc,
    hyp_disk_to_euclidean,
    perimeter,
    perimeter_trapezoid,
    polygon_hyp_perimeter,
    rho_disk,
    spectral_derivative,
)

disk_points = st.builds(
    lambda r, t: r * cmath.exp(1j * t), st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi)
)


def mp_rho(x, y):
    x, y = mpmath.mpc(x), mpmath.mpc(y)
    return 2 * mpmath.asinh(abs(x - y) / mpmath.sqrt((1 - abs(x) ** 2) * (1 - abs(y) ** 2)))


def mobius(a, z):
    """Disk automorphism sending a to 0."""
    return (z - a) / (1 - a.conjugate() * z)


# --------------------------------------------------------------------------
# distance


def test_rho_radial():
    assert rho_disk(0, 0.5) == pytest.approx(1.0986122886681098, rel=1e-15)
    assert rho_disk(0.3 + 0.2j, 0.3 + 0.2j) == 0.0


@pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("m", [1, 3, 5])
def test_rho_symmetric_pair(s, m):
    x = s ** (m / 2)
    assert math.tanh(rho_disk(-x, x) / 2) == pytest.approx(2 * x / (1 + x * x), rel=1e-14)


@given(disk_points, disk_points)
def test_rho_against_mpmath(x, y):
    assert abs(rho_disk(x, y) - float(mp_rho(x, y))) < 1e-12 * max(1.0, float(mp_rho(x, y)))


@given(disk_points, disk_points, st.floats(0, 2 * math.pi))
def test_rho_symmetry_and_rotation(x, y, phi):
    rot = cmath.exp(1j * phi)
    d = rho_disk(x, y)
    assert rho_disk(y, x) == d
    assert abs(rho_disk(rot * x, rot * y) - d) < 1e-13 * max(1.0, d)


@given(disk_points, disk_points, disk_points)
def test_rho_triangle_inequality(x, y, z):
    assert rho_disk(x, z) <= rho_disk(x, y) + rho_disk(y, z) + 1e-12


@given(disk_points, disk_points, disk_points)
def test_rho_mobius_invariance(a, x, y):
    a = 0.5 * a
    d = rho_disk(x, y)
    assert abs(rho_disk(mobius(a, x), mobius(a, y)) - d) < 1e-10 * max(1.0, d)


def test_rho_domain():
    with pytest.raises(DomainError):
        rho_disk(0, 1.0)
    with pytest.raises(DomainError):
        rho_disk(2j, 0)


# --------------------------------------------------------------------------
# hyperbolic disks


def test_hyp_disk_at_origin():
    d = hyp_disk_to_euclidean(0, 1.3)
    assert d.center == 0
    assert d.radius == pytest.approx(math.tanh(0.65), rel=1e-15)


@pytest.mark.parametrize("x,M", [(0.5, 1.0), (0.3 - 0.6j, 0.2), (-0.9, 3.0), (0.1j, 5.0)])
def test_hyp_disk_boundary_at_distance(x, M):
    disk = hyp_disk_to_euclidean(x, M)
    for p in disk.boundary_points(16):
        assert abs(rho_disk(x, p) - M) < 1e-12 * max(1.0, M)


def test_hyp_disk_small_radius():
    d = hyp_disk_to_euclidean(0.4 + 0.2j, 1e-9)
    assert d.radius < 1e-9
    assert abs(d.center - (0.4 + 0.2j)) < 1e-15


def test_hyp_disk_center_shift():
    d = hyp_disk_to_euclidean(0.5, 1.0)
    assert rho_disk(0.5, d.center) > 0.0
    assert abs(d.center) < 0.5


def test_circle_perimeter_and_area():
    assert circle_perimeter_hyp(1e-8) / (2 * math.pi * 1e-8) == pytest.approx(1.0, rel=1e-12)
    assert circle_perimeter_hyp(2 * math.atanh(0.5)) == pytest.approx(8 * math.pi / 3, rel=1e-14)
    for R in (3.0, 10.0):
        assert disk_area_hyp(R) < circle_perimeter_hyp(R)
        ratio = disk_area_hyp(R) / circle_perimeter_hyp(R)
        assert ratio == pytest.approx(math.tanh(R / 2), rel=1e-14)


# --------------------------------------------------------------------------
# spectral derivative and trapezoid perimeter


def nodes(n):
    return 2 * np.pi * np.arange(n) / n


def test_spectral_derivative_single_mode():
    s = nodes(32)
    assert np.max(np.abs(spectral_derivative(np.exp(1j * s)) - 1j * np.exp(1j * s))) < 1e-13


def test_spectral_derivative_constant_and_cosine():
    assert np.max(np.abs(spectral_derivative(np.full(16, 2.5 + 1j)))) < 1e-14
    s = nodes(16)
    assert np.max(np.abs(spectral_derivative(np.cos(3 * s)) + 3 * np.sin(3 * s))) < 1e-12


def test_spectral_derivative_odd_n():
    with pytest.raises(DomainError):
        spectral_derivative(np.ones(15))


def test_perimeter_of_circle():
    curve = BoundaryCurve.from_function(lambda s: 0.5 * np.exp(1j * s), 64)
    assert abs(perimeter_trapezoid(curve) - 8 * math.pi / 3) < 1e-12


def test_perimeter_segment_out_and_back():
    a = 0.6
    curve = PiecewiseCurve.slit(0, a)
    assert perimeter(curve) == pytest.approx(4 * math.atanh(a), rel=1e-13)
    assert perimeter(curve.sample(64)) == pytest.approx(4 * math.atanh(a), rel=1e-13)


def ellipse_error(n):
    curve = BoundaryCurve.from_function(
        lambda s: 0.3 * np.cos(s) + 0.2j * np.sin(s), n,
        derivative=lambda s: -0.3 * np.sin(s) + 0.2j * np.cos(s),
    )
    exact = mpmath.quad(
        lambda s: 2 * mpmath.sqrt((0.3 * mpmath.sin(s)) ** 2 + (0.2 * mpmath.cos(s)) ** 2)
        / (1 - (0.3 * mpmath.cos(s)) ** 2 - (0.2 * mpmath.sin(s)) ** 2),
        [0, mpmath.pi / 2, mpmath.pi, 3 * mpmath.pi / 2, 2 * mpmath.pi],
    )
    return abs(perimeter_trapezoid(curve) - float(exact))


def test_trapezoid_spectral_convergence():
    errors = [ellipse_error(n) for n in (8, 16, 32, 64)]
    assert errors[3] / errors[2] < 1e-3 or errors[3] < 1e-14
    assert errors[2] < errors[1] < errors[0]
    assert errors[3] < 1e-13


def test_trapezoid_rejects_points_outside():
    curve = BoundaryCurve.from_function(lambda s: np.exp(1j * s), 8)
    with pytest.raises(DomainError):
        perimeter_trapezoid(curve)


def test_boundary_curve_needs_even_count():
    with pytest.raises(ConstraintError):
        BoundaryCurve(np.zeros(5), np.zeros(5))


@pytest.mark.parametrize("L", range(1, 11))
def test_segment_perimeter_consistency(L):
    assert abs(4 * math.atanh(math.tanh(L / 4)) - L) < 1e-13 * L


# --------------------------------------------------------------------------
# polygons and geodesics


def test_polygon_two_gon():
    x = 0.4
    assert polygon_hyp_perimeter([-x, x]) == pytest.approx(2 * rho_disk(-x, x), rel=1e-15)


def test_polygon_equilateral_triangle():
    v = [0.6 * cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    assert polygon_hyp_perimeter(v) == pytest.approx(3 * rho_disk(v[0], v[1]), rel=1e-14)


@given(st.lists(disk_points, min_size=3, max_size=8), st.floats(0, 2 * math.pi))
def test_polygon_rotation_invariance(v, phi):
    rot = cmath.exp(1j * phi)
    p = polygon_hyp_perimeter(v)
    assert abs(polygon_hyp_perimeter([rot * z for z in v]) - p) < 1e-13 * max(1.0, p)


def test_polygon_domain():
    with pytest.raises(DomainError):
        polygon_hyp_perimeter([0.2])
    with pytest.raises(DomainError):
        polygon_hyp_perimeter([0.2, 1.5])


def test_geodesic_on_diameter_is_segment():
    g = geodesic_arc(-0.3 - 0.3j, 0.5 + 0.5j)
    assert isinstance(g, Segment)


@given(disk_points, disk_points)
def test_geodesic_arc_properties(v, w):
    if abs(v - w) < 1e-3:
        return
    g = geodesic_arc(v, w)
    # nearly diametral geodesics are arcs of huge circles; round-off scales with the radius
    scale = max(1.0, getattr(g, "radius", 1.0))
    assert abs(complex(g.start) - v) < 1e-13 * scale
    assert abs(complex(g.end) - w) < 1e-13 * scale
    if isinstance(g, Arc):
        # orthogonal to the unit circle
        assert abs(abs(g.center) ** 2 - g.radius**2 - 1.0) < 1e-9 * abs(g.center) ** 2
    length = 0.5 * PiecewiseCurve([g, g.reversed()]).hyperbolic_perimeter()
    assert abs(length - rho_disk(v, w)) < 1e-10 * max(1.0, rho_disk(v, w))


def test_geodesic_coincident():
    with pytest.raises(DomainError):
        geodesic_arc(0.2, 0.2)


def test_geodesic_shorter_than_chord_path():
    v, w = 0.8, 0.8j
    arc = PiecewiseCurve([geodesic_arc(v, w), geodesic_arc(w, v)]).hyperbolic_perimeter()
    chords = PiecewiseCurve.polygon([v, 0.6 + 0.6j, w]).hyperbolic_perimeter()
    assert arc / 2 < chords


# --------------------------------------------------------------------------
# piecewise curves


def test_piecewise_area_and_orientation():
    c = PiecewiseCurve.circle(0.1, 0.3)
    assert c.signed_area() == pytest.approx(math.pi * 0.09, rel=1e-13)
    assert c.orientation == "ccw"
    assert c.reversed().orientation == "cw"
    sq = PiecewiseCurve.polygon([0, 1, 1 + 1j, 1j])
    assert sq.signed_area() == pytest.approx(1.0, rel=1e-14)


def test_piecewise_rejects_gaps():
    with pytest.raises(ConstraintError):
        PiecewiseCurve([Segment(0, 1), Segment(1j, 0)])


def test_piecewise_perimeter_of_hyperbolic_circle():
    d = hyp_disk_to_euclidean(0.3 + 0.1j, 0.8)
    c = PiecewiseCurve.circle(d.center, d.radius)
    assert c.hyperbolic_perimeter() == pytest.approx(circle_perimeter_hyp(0.8), rel=1e-13)


def test_sample_marks_corners():
    tri = PiecewiseCurve.polygon([0.1, 0.5, 0.3j])
    b = tri.sample(60)
    assert b.corners.sum() == 3
    # corners send the quadrature back to the exact pieces
    assert perimeter(b) == tri.hyperbolic_perimeter()
    assert abs(perimeter_trapezoid(b) - perimeter(b)) < 1e-2
