"""Conformal moduli of quadrilaterals with vertices 0, 1, A, B.

:func:`qm` solves the hypergeometric equation for the Schwarz-Christoffel
parameter of a convex quadrilateral; :func:`qmt` handles the degenerate
case where A lies on the segment [1, B], so that the quadrilateral is a
triangle with a marked point on one side.

Both solvers work in the variable u = log(r/r'), in which r and
r' = sqrt(1 - r^2) are both available to full relative precision. Roots of
elongated quadrilaterals sit at r of order 1e-14 or closer to 1 than
1e-13, where a solver in r itself would lose every digit.
"""

import cmath
import math
import warnings
from dataclasses import dataclass

from scipy import optimize

from .errors import ConstraintError, ConstraintWarning, NoRootError
from .specfun import _hyp2f1, _mu_pair, _pair_from_log_ratio, beta_fn

__all__ = [
    "QuadrilateralAB",
    "TriQuadrilateral",
    "qm",
    "qm_symmetry_pair",
    "qmt",
    "sc_constant",
]

_DEFAULT_BRACKET = (1e-6, 1.0 - 1e-13)
# widest log-ratio considered when the default bracket has no sign change
_U_LIMIT = 350.0
_NEWTON_STEP = 1e-7


def _log_ratio(r):
    return math.log(r / math.sqrt((1.0 - r) * (1.0 + r)))


@dataclass(frozen=True)
class QuadrilateralAB:
    """Quadrilateral 0, 1, A, B with its angle parameters.

    The interior angles are b*pi at 0, (c - b)*pi at 1, (1 - a)*pi at A and
    (1 + a - c)*pi at B.
    """

    A: complex
    B: complex
    a: float
    b: float
    c: float

    @classmethod
    def from_vertices(cls, A, B):
        A, B = complex(A), complex(B)
        if not (A.imag > 0 and B.imag > 0):
            raise ConstraintError(f"A = {A} and B = {B} must lie in the upper half-plane")
        arg_a1 = cmath.phase(A - 1.0)
        a = 1.0 - (arg_a1 - cmath.phase(A - B)) / math.pi
        b = cmath.phase(B) / math.pi
        c = (math.pi - arg_a1 + cmath.phase(B)) / math.pi
        return cls(A, B, a, b, c)

    @property
    def is_convex_data(self):
        """All four interior angles lie strictly between 0 and pi."""
        a, b, c = self.a, self.b, self.c
        return 0 < a < 1 and 0 < b < 1 and max(a, b) < c < 1.0 + min(a, b)


def sc_constant(a, b, c):
    """The constant L = B(c-b, 1-a)/B(b, c-b) exp((b+1-c) pi i)."""
    return beta_fn(c - b, 1.0 - a) / beta_fn(b, c - b) * cmath.exp(1j * math.pi * (b + 1.0 - c))


def _qm_residual(quad):
    a, b, c = quad.a, quad.b, quad.c
    d = c - a - b
    target = ((quad.A - 1.0) / sc_constant(a, b, c)).real

    def h(u):
        r, rc = _pair_from_log_ratio(u)
        r2, rc2 = r * r, rc * rc
        num = rc ** (2.0 * d) * _hyp2f1(c - a, c - b, d + 1.0, rc2, r2)
        return num / _hyp2f1(a, b, c, r2, rc2) - target

    return h


def _bracket_root(h, lo, hi):
    """Find a sign change of h, widening [lo, hi] outward by doubling steps."""
    hlo, hhi = h(lo), h(hi)
    if hlo == 0.0:
        return lo, lo
    if hhi == 0.0:
        return hi, hi
    if (hlo < 0) != (hhi < 0):
        return lo, hi
    step = 1.0
    while lo > -_U_LIMIT or hi < _U_LIMIT:
        if lo > -_U_LIMIT:
            new = max(lo - step, -_U_LIMIT)
            hnew = h(new)
            if (hnew < 0) != (hlo < 0):
                return new, lo
            lo, hlo = new, hnew
        if hi < _U_LIMIT:
            new = min(hi + step, _U_LIMIT)
            hnew = h(new)
            if (hnew < 0) != (hhi < 0):
                return hi, new
            hi, hhi = new, hnew
        step *= 2.0
    return None


def _solve_log_ratio(h, bracket):
    lo, hi = _log_ratio(bracket[0]), _log_ratio(bracket[1])
    found = _bracket_root(h, lo, hi)
    if found is not None:
        u_lo, u_hi = found
        u = u_lo if u_lo == u_hi else optimize.brentq(h, u_lo, u_hi, xtol=1e-14, rtol=1e-15)
    else:
        res = optimize.minimize_scalar(
            lambda x: h(x) ** 2, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        u = res.x
        if abs(h(u)) > 1e-6:
            raise NoRootError(f"no root: minimum residual {abs(h(u)):.3g}")
    # one polishing Newton step, kept only if it helps
    hu = h(u)
    slope = (h(u + _NEWTON_STEP) - h(u - _NEWTON_STEP)) / (2.0 * _NEWTON_STEP)
    if slope != 0.0 and math.isfinite(slope):
        v = u - hu / slope
        if abs(h(v)) < abs(hu):
            u = v
    return u


def qm(A, B, *, bracket=_DEFAULT_BRACKET):
    """Conformal modulus of the quadrilateral with vertices 0, 1, A, B.

    The modulus is relative to the sides [0, 1] and [A, B]. A non-convex
    quadrilateral only triggers a :class:`ConstraintWarning`; the formula
    is then used outside the range where it is known to apply. Moduli
    beyond about 220 or below 1/220 need log(r/r') outside [-350, 350]
    and raise NoRootError.
    """
    quad = QuadrilateralAB.from_vertices(A, B)
    if not quad.is_convex_data:
        warnings.warn(
            f"angle parameters (a, b, c) = ({quad.a:.6g}, {quad.b:.6g}, {quad.c:.6g}) "
            "describe a non-convex quadrilateral",
            ConstraintWarning,
            stacklevel=2,
        )
    u = _solve_log_ratio(_qm_residual(quad), bracket)
    return 2.0 / math.pi * _mu_pair(*_pair_from_log_ratio(u))


def qm_symmetry_pair(A, B):
    """Vertices of the mirror image in the line Re z = 1/2, relabelled."""
    A, B = complex(A), complex(B)
    return 1.0 - B.conjugate(), 1.0 - A.conjugate()


@dataclass(frozen=True)
class TriQuadrilateral:
    """Triangle 0, 1, B with the marked point A on its side [1, B]."""

    A: complex
    B: complex
    alpha: float
    beta: float

    @classmethod
    def from_vertices(cls, A, B, tol=1e-10):
        A, B = complex(A), complex(B)
        if not B.imag > 0:
            raise ConstraintError(f"B = {B} must lie in the upper half-plane")
        t = (A - 1.0) / (B - 1.0)
        if abs(t.imag) > tol * abs(t) or not 0.0 < t.real < 1.0:
            raise ConstraintError(f"A = {A} is not inside the segment [1, {B}]")
        alpha = cmath.phase(B)
        beta = math.pi - cmath.phase(B - 1.0)
        if not (0.0 < alpha < math.pi and 0.0 < beta < math.pi):
            raise ConstraintError("triangle angles at 0 and 1 must lie in (0, pi)")
        return cls(A, B, alpha, beta)

    def side_map(self, w, wc=None):
        """Distance from 1 of the image of s = 1/(1 - w) on the side [1, B].

        For real s > 1 the triangle map sends s to 1 + e^{i(pi - beta)} times
        this value; ``wc`` = 1 - w may be passed for accuracy.
        """
        al, be = self.alpha / math.pi, self.beta / math.pi
        if wc is None:
            wc = 1.0 - w
        return w**be / be * _hyp2f1(be, al + be, be + 1.0, w, wc) / beta_fn(al, be)


def qmt(A, B):
    """Modulus of the triangle 0, 1, B with A marked on [1, B].

    The quadrilateral has vertices 0, 1, A, B and, as for :func:`qm`, the
    modulus is relative to the sides [0, 1] and [A, B].
    """
    tri = TriQuadrilateral.from_vertices(A, B)
    target = abs(tri.A - 1.0)

    def h(u):
        r, rc = _pair_from_log_ratio(u)
        return target - tri.side_map(r * r, rc * rc)

    # w = r^2 grows with u; h starts positive near w = 0 and must turn negative
    lo, hi = -60.0, 1.0
    while h(lo) <= 0.0:
        lo *= 2.0
        if lo < -_U_LIMIT:
            raise NoRootError("marked point too close to the vertex 1")
    doublings = 0
    while h(hi) > 0.0:
        hi *= 2.0
        doublings += 1
        if doublings > 60 or hi > _U_LIMIT:
            raise NoRootError("bracket growth failed for the marked point")
    u = optimize.brentq(h, lo, hi, xtol=1e-14, rtol=1e-15)
    return math.pi / (2.0 * _mu_pair(*_pair_from_log_ratio(u)))
