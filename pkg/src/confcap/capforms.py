"""Closed-form capacities and capacity bounds.

Capacities are conformal (two-dimensional Dirichlet-integral) capacities of
condensers in the unit disk unless stated otherwise.
"""

import math
from dataclasses import dataclass

from .errors import ConstraintError, DomainError
from .hypgeom import rho_disk
from .specfun import _ell_K_from_complement, _mu_pair, _sn_imag, modulus_from_nome, mu

__all__ = [
    "CapacityBounds",
    "RectSegmentSpec",
    "cap_disk_by_perimeter",
    "cap_hyp_disk",
    "cap_rect_segment",
    "cap_segment",
    "cap_symmetric_segments",
    "et_perimeter",
    "et_max_t",
    "gamma2",
    "halfdisk_bounds",
    "lb_continuum",
    "mod_annulus",
    "tau2",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CapacityBounds:
    """Labelled lower and upper bounds; every lower must not exceed any upper."""

    lower: tuple
    upper: tuple
    reference: float = None

    def __post_init__(self):
        for lname, lval in self.lower:
            for uname, uval in self.upper:
                if lval > uval:
                    raise ConstraintError(
                        f"lower bound {lname} = {lval!r} exceeds upper bound {uname} = {uval!r}"
                    )

    def value(self, label):
        for name, val in self.lower + self.upper:
            if name == label:
                return val
        raise KeyError(label)


@dataclass(frozen=True)
class RectSegmentSpec:
    """Rectangle (-a, a) x (0, b) with the slit [ic, id] on its axis."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a > 0 and 0 < self.c < self.d < self.b):
            raise ConstraintError(f"need a > 0 and 0 < c < d < b, got {self}")


def cap_disk_by_perimeter(P):
    """Capacity of the hyperbolic disk whose hyperbolic perimeter is P."""
    if not P > 0:
        raise DomainError(f"perimeter must be positive, got {P!r}")
    return TWO_PI / math.log((TWO_PI + math.hypot(P, TWO_PI)) / P)


def cap_hyp_disk(R):
    """Capacity of a hyperbolic disk of hyperbolic radius R."""
    if not R > 0:
        raise DomainError(f"radius must be positive, got {R!r}")
    return TWO_PI / -math.log(math.tanh(0.5 * R))


def mod_annulus(a, b):
    """Capacity of the annulus a < |z| < b."""
    if not 0 < a < b:
        raise DomainError(f"need 0 < a < b, got ({a!r}, {b!r})")
    return TWO_PI / math.log(b / a)


def gamma2(s):
    """Grötzsch capacity: the unit disk minus the segment [0, 1/s]."""
    if not s > 1:
        raise DomainError(f"gamma2 needs s > 1, got {s!r}")
    return TWO_PI / mu(1.0 / s)


def tau2(s):
    """Teichmüller capacity: the plane minus [-1, 0] and [s, inf)."""
    if not s > 0:
        raise DomainError(f"tau2 needs s > 0, got {s!r}")
    return 0.5 * gamma2(math.sqrt(s + 1.0))


def cap_segment(r):
    """Capacity of the unit disk minus the radial segment [0, r]."""
    if not 0 < r < 1:
        raise DomainError(f"cap_segment needs 0 < r < 1, got {r!r}")
    return TWO_PI / mu(r)


def cap_symmetric_segments(m, s):
    """Capacity of the unit disk minus m radial segments [0, s e^{2 pi i j/m}]."""
    if m < 3 or m != int(m):
        raise DomainError(f"need an integer m >= 3, got {m!r}")
    if not 0 < s < 1:
        raise DomainError(f"need 0 < s < 1, got {s!r}")
    log_r = m * math.log(s)
    # below 1e-150, mu(r) = log(4/r) to double precision; s^m may underflow
    modulus = math.log(4.0) - log_r if log_r < -345.0 else mu(math.exp(log_r))
    return TWO_PI * m / modulus


def lb_continuum(x, y):
    """Lower bound for continua containing x and y, attained by the geodesic."""
    x, y = complex(x), complex(y)
    if x == y:
        raise DomainError("points coincide")
    return TWO_PI / mu(math.tanh(0.5 * rho_disk(x, y)))


def halfdisk_bounds(t):
    """Bounds for the half of the hyperbolic disk B(x, t) above the real axis.

    The capacity does not depend on the center x in (-1, 1). Labels:
    ``symmetrization`` from the hyperbolic diameter 2t,
    ``perimeter-segment`` from the segment of equal perimeter,
    ``split`` from the symmetric split into two half-plane condensers, and
    ``perimeter-disk`` for the disk of equal perimeter.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    per = math.pi * math.sinh(t) + 2.0 * t
    th = math.tanh(t)
    lower = (
        ("symmetrization", TWO_PI / mu(th)),
        ("perimeter-segment", TWO_PI / mu(math.tanh(0.25 * per))),
        ("split", math.pi / -math.log(math.tanh(0.5 * t)) + math.pi / mu(th)),
    )
    upper = (("perimeter-disk", cap_disk_by_perimeter(per)),)
    return CapacityBounds(lower, upper)


def cap_rect_segment(spec):
    """Exact capacity of the rectangle (-a, a) x (0, b) minus the slit [ic, id].

    The rectangle is mapped to the upper half-plane by a scaled elliptic
    sine, the slit to a segment of the imaginary axis, and the symmetric
    half-plane condenser to the disk minus a radial slit.
    """
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    k, kc = modulus_from_nome(math.exp(-math.pi * b / a))
    alpha = a / _ell_K_from_complement(kc)
    ch = _sn_imag(c / alpha, k, kc)
    dh = _sn_imag(d / alpha, k, kc)
    r = (dh - ch) / (dh + ch)
    rc = 2.0 * math.sqrt(ch * dh) / (dh + ch)
    return TWO_PI / _mu_pair(r, rc)


def et_max_t(theta, r):
    """Largest admissible t for the tube E(t) about the arc |z| = r, angle >= theta."""
    return 2.0 * math.asinh(2.0 * r * math.sin(0.5 * theta) / ((1.0 - r) * (1.0 + r))) / 3.0


def et_perimeter(theta, r, t):
    """Hyperbolic perimeter of the tube E(t) of radius t about the arc
    {r e^{is} : theta <= s <= 2 pi}."""
    if not 0 < theta < 0.5 * math.pi or not 0 < r < 1:
        raise DomainError(f"need 0 < theta < pi/2 and 0 < r < 1, got ({theta!r}, {r!r})")
    if not 0 < t <= et_max_t(theta, r) * (1.0 + 1e-12):
        raise ConstraintError(f"t = {t!r} outside (0, {et_max_t(theta, r)!r}]")
    return TWO_PI * math.sinh(t) + 4.0 * r * (TWO_PI - theta) * math.cosh(t) / (
        (1.0 - r) * (1.0 + r)
    )
