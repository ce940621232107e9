import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest

from confcap.errors import ConstraintError, ConstraintWarning
from confcap.quadmod import QuadrilateralAB, TriQuadrilateral, qm, qm_symmetry_pair, qmt, sc_constant
from confcap.specfun import beta_fn
from confcap.tables import load_reference, parse_complex

from oracles import extrapolated_modulus, marked_triangle_energy_fem

TABLE = [
    (parse_complex(r["A"]), parse_complex(r["B"]), float(r["modulus"]))
    for r in load_reference("quadrilateral_moduli.csv")
]


def dual(A, B):
    return (B - 1) / (A - 1), -1 / (A - 1)


def random_convex_pairs(count, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        A = complex(rng.uniform(-1.5, 3.0), rng.uniform(0.2, 3.0))
        B = complex(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 3.0))
        if QuadrilateralAB.from_vertices(A, B).is_convex_data:
            out.append((A, B))
    return out


@pytest.mark.parametrize("A,B,expected", TABLE)
def test_reference_moduli(A, B, expected):
    assert abs(qm(A, B) - expected) <= 1e-9


def test_reference_values_from_listing():
    assert abs(qm(7 + 5j, -1 + 2j) - 1.17336589158553) < 1e-10
    assert abs(qm(5 + 5j, -3 + 1j) - 1.00171178298845) < 1e-10


@pytest.mark.parametrize("A,B,expected", TABLE)
def test_reciprocal_identity_on_reference(A, B, expected):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConstraintWarning)
        assert abs(qm(A, B) * qm(*dual(A, B)) - 1.0) <= 1e-10


@pytest.mark.parametrize("A,B", random_convex_pairs(50))
def test_reciprocal_and_reflection_random(A, B):
    value = qm(A, B)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConstraintWarning)
        assert abs(value * qm(*dual(A, B)) - 1.0) < 1e-10
    assert abs(qm(*qm_symmetry_pair(A, B)) - value) < 1e-10 * max(1.0, value)


@pytest.mark.parametrize("A,B", random_convex_pairs(10, seed=11))
def test_bracket_robustness(A, B):
    base = qm(A, B)
    for bracket in ((1e-5, 1 - 1e-12), (1e-7, 1 - 1e-14)):
        assert abs(qm(A, B, bracket=bracket) - base) < 1e-9 * max(1.0, base)


@pytest.mark.parametrize("h", [0.5, 1.0, 2.0, 10.0, 0.05])
def test_rectangle_modulus(h):
    assert abs(qm(1 + h * 1j, h * 1j) - h) < 1e-9 * max(1.0, h)


def test_angle_parameters_of_rectangle():
    q = QuadrilateralAB.from_vertices(1 + 2j, 2j)
    assert (q.a, q.b, q.c) == pytest.approx((0.5, 0.5, 1.0), abs=1e-15)
    assert q.is_convex_data


def test_sc_constant_formula():
    a, b, c = 0.4, 0.3, 0.9
    L = sc_constant(a, b, c)
    expected = beta_fn(c - b, 1 - a) / beta_fn(b, c - b) * cmath.exp(1j * math.pi * (b + 1 - c))
    assert L == expected
    ref = mpmath.beta(c - b, 1 - a) / mpmath.beta(b, c - b) * mpmath.expjpi(b + 1 - c)
    assert abs(L - complex(ref)) < 1e-14 * abs(L)


def test_symmetry_pair():
    assert qm_symmetry_pair(7 + 5j, -1 + 2j) == (2 + 2j, -6 + 5j)
    for A, B, _ in TABLE:
        assert qm_symmetry_pair(*qm_symmetry_pair(A, B)) == (A, B)
        assert abs(qm(*qm_symmetry_pair(A, B)) - qm(A, B)) < 1e-10


def test_qm_rejects_lower_half_plane():
    with pytest.raises(ConstraintError):
        qm(2 - 1j, 1j)


def test_qm_warns_for_nonconvex():
    with pytest.warns(ConstraintWarning):
        qm(0.5 + 0.2j, 1j)


@pytest.mark.parametrize("A,B", [(7 + 5j, -1 + 2j), (1.5 + 1j, 0.3 + 1.2j), (1.2 + 0.4j, -0.5 + 0.6j)])
def test_qm_against_finite_elements(A, B):
    value, order, _ = extrapolated_modulus(A, B)
    assert abs(qm(A, B) - value) < 2e-4 * qm(A, B)


# --------------------------------------------------------------------------
# triangles with a marked point


def test_qmt_symmetric_triangle():
    # reflection in the diagonal swaps the side pairs, so the modulus is its own reciprocal
    assert abs(qmt((1 + 1j) / 2, 1j) - 1.0) < 1e-12


def fem_marked(frac, B):
    # the marked point splits a straight side: energy error is first order in h
    value, _, _ = extrapolated_modulus(frac, B, sizes=(80, 160, 320), order=1,
                                       solver=marked_triangle_energy_fem)
    return value


def test_qmt_against_finite_elements():
    A, B = (1 + 1j) / 2, 1j
    assert abs(qmt(A, B) - fem_marked(0.5, B)) < 5e-3


@pytest.mark.parametrize("B,frac", [(0.3 + 0.8j, 0.3), (1.5 + 1j, 0.6), (-0.4 + 2j, 0.5)])
def test_qmt_against_finite_elements_general(B, frac):
    value = fem_marked(frac, B)
    assert abs(qmt(1 + frac * (B - 1), B) - value) < 5e-3 * value


def test_qmt_collapsing():
    # a vanishing side [1, A] next to the angle beta at 1 gives 1/M ~ log(1/delta)/beta
    B = 0.4 + 1.1j
    beta = math.pi - cmath.phase(B - 1)
    deltas = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
    values = [qmt(1 + d * (B - 1), B) for d in deltas]
    assert all(0 < y < x for x, y in zip(values, values[1:]))
    assert values[2] < 0.12
    offsets = [1 / v - math.log(1 / d) / beta for v, d in zip(values, deltas)]
    assert max(offsets) - min(offsets) < 1e-3 * (1 / values[-1])


def test_qmt_monotone_along_side():
    B = 0.4 + 1.1j
    values = [qmt(1 + f * (B - 1), B) for f in np.linspace(0.05, 0.95, 10)]
    assert all(x < y for x, y in zip(values, values[1:]))


@pytest.mark.parametrize("B", [0.5 + 1j, 1j, -0.3 + 0.7j, 2 + 0.5j])
def test_side_map_is_incomplete_beta(B):
    tri = TriQuadrilateral.from_vertices(1 + 0.5 * (B - 1), B)
    al, be = tri.alpha / math.pi, tri.beta / math.pi
    for w in (0.01, 0.3, 0.5, 0.9, 0.999):
        ref = mpmath.betainc(be, 1 - al - be, 0, w) / mpmath.beta(al, be)
        assert abs(tri.side_map(w) - float(ref)) < 1e-12 * float(ref)
    # the complete integral is the side length (law of sines)
    gamma = 1 - al - be
    assert abs(beta_fn(be, gamma) / beta_fn(al, be) - abs(B - 1)) < 1e-12 * abs(B - 1)


def test_qmt_rejects_non_collinear():
    with pytest.raises(ConstraintError):
        qmt(0.6 + 0.5j, 1j)
    with pytest.raises(ConstraintError):
        qmt(1 + 1.5 * (1j - 1), 1j)


def test_qmt_consistent_with_qm_limit():
    # a nearly collinear convex quadrilateral tends to the marked triangle
    B = 0.3 + 1j
    A = 1 + 0.5 * (B - 1)
    outward = -1e-6 * 1j * (B - 1) / abs(B - 1)
    assert abs(qm(A + outward, B) - qmt(A, B)) < 1e-4
