"""Special functions: Gauss hypergeometric, elliptic integrals, Grötzsch mu,
gamma/beta, Jacobi theta functions and the elliptic sine.

Everything works in double precision on real arguments. Functions are pure
and keep no global state.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "EllipticModulus",
    "ThetaPair",
    "agm",
    "asn",
    "beta_fn",
    "ell_K",
    "gamma_fn",
    "hyp2f1",
    "mu",
    "mu_inv",
    "sn",
    "sn_imag",
    "theta23",
]

_MAX_TERMS = 200
_SERIES_TOL = 1e-16
# c - a - b closer than this to an integer uses the logarithmic formulas
_LOG_CASE_WINDOW = 1e-7
# step of the b-derivative correction around the logarithmic case
_LOG_CASE_STEP = 1e-3


@dataclass(frozen=True)
class EllipticModulus:
    """Modulus ``k`` together with an accurately computed complement."""

    k: float
    k_prime: float

    @classmethod
    def from_k(cls, k):
        if not 0.0 < k < 1.0:
            raise DomainError(f"elliptic modulus must lie in (0, 1), got {k!r}")
        return cls(k, math.sqrt((1.0 - k) * (1.0 + k)))


@dataclass(frozen=True)
class ThetaPair:
    q: float
    theta2: float
    theta3: float


def _is_nonpositive_int(x):
    return x <= 0 and x == math.floor(x)


def gamma_fn(x):
    """Gamma function of a real argument."""
    if _is_nonpositive_int(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    return math.gamma(x)


def _rgamma(x):
    """Reciprocal gamma, zero at the poles."""
    if _is_nonpositive_int(x):
        return 0.0
    return 1.0 / math.gamma(x)


def beta_fn(x, y):
    """Euler beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y)."""
    if _is_nonpositive_int(x) or _is_nonpositive_int(y):
        raise PoleError(f"beta has a pole at ({x!r}, {y!r})")
    if x > 0 and y > 0 and x + y > 150.0:
        return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))
    return math.gamma(x) * math.gamma(y) * _rgamma(x + y)


# --------------------------------------------------------------------------
# Gauss hypergeometric function


def _series(a, b, c, z):
    """Defining power series, for |z| <= 1/2 or terminating parameters."""
    term = 1.0
    total = 1.0
    for n in range(_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0.0 or abs(term) <= _SERIES_TOL * abs(total):
            return total
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in {_MAX_TERMS} terms"
    )


def _connection(a, b, c, z, zc):
    """Linear transformation z -> 1 - z for non-integer c - a - b."""
    d = c - a - b
    gc = math.gamma(c)
    t1 = gc * math.gamma(d) * _rgamma(c - a) * _rgamma(c - b)
    t2 = gc * math.gamma(-d) * _rgamma(a) * _rgamma(b)
    out = 0.0
    if t1 != 0.0:
        out += t1 * _series(a, b, 1.0 - d, zc)
    if t2 != 0.0:
        out += t2 * zc**d * _series(c - a, c - b, d + 1.0, zc)
    return out


def _log_series(a, b, m, zc, log_zc):
    """Logarithmic series for F(a, b; a+b+m; z), m >= 0 an integer."""
    gc = math.gamma(a + b + m)
    head = 0.0
    if m > 0:
        coef = math.gamma(m) * gc * _rgamma(a + m) * _rgamma(b + m)
        term = 1.0
        head = term
        for n in range(m - 1):
            term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * zc
            head += term
        head *= coef
    pref = gc * _rgamma(a) * _rgamma(b)
    if pref == 0.0:
        return head
    term = 1.0 / math.factorial(m)
    tail = 0.0
    psi_1 = digamma(1.0)
    psi_m1 = digamma(m + 1.0)
    psi_a = digamma(a + m)
    psi_b = digamma(b + m)
    for n in range(_MAX_TERMS):
        bracket = log_zc - psi_1 - psi_m1 + psi_a + psi_b
        tail += term * bracket
        if abs(term) * (abs(bracket) + 1.0) <= _SERIES_TOL * abs(tail):
            break
        term *= (a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * zc
        psi_1 += 1.0 / (n + 1)
        psi_m1 += 1.0 / (n + m + 1)
        psi_a += 1.0 / (a + m + n)
        psi_b += 1.0 / (b + m + n)
    else:
        raise ConvergenceError("logarithmic 2F1 series did not converge")
    sign = -1.0 if m % 2 == 0 else 1.0
    # (z - 1)^m = (-1)^m zc^m
    return head + sign * pref * zc**m * tail


def _log_case(a, b, c, zc):
    """F(a, b; c; z) with c - a - b an integer."""
    m = round(c - a - b)
    if m < 0:
        # Euler's transformation flips the sign of c - a - b
        return zc**m * _log_case(c - a, c - b, c, zc)
    return _log_series(a, b, m, zc, math.log(zc))


def _b_derivative(a, b, c, z, zc):
    """dF/db by Richardson-extrapolated central differences."""

    def central(h):
        return (_connection(a, b + h, c, z, zc) - _connection(a, b - h, c, z, zc)) / (2 * h)

    h = _LOG_CASE_STEP
    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def _transformed(a, b, c, z, zc):
    d = c - a - b
    m = round(d)
    delta = d - m
    if abs(delta) >= _LOG_CASE_WINDOW:
        return _connection(a, b, c, z, zc)
    # F is entire in b, so move b onto the logarithmic case and correct
    # to first order with a central difference taken away from it
    b0 = c - a - m
    value = _log_case(a, b0, c, zc)
    if b != b0:
        value += (b - b0) * _b_derivative(a, b0, c, z, zc)
    return value


def _hyp2f1(a, b, c, z, zc):
    """2F1 on z < 1 with the complement zc = 1 - z supplied by the caller."""
    if z == 0.0:
        return 1.0
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return _series(a, b, c, z)
    if z < 0.0:
        # Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        w = z / (z - 1.0)
        return zc ** (-a) * _hyp2f1(a, c - b, c, w, 1.0 / zc)
    if z <= 0.5:
        return _series(a, b, c, z)
    return _transformed(a, b, c, z, zc)


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function F(a, b; c; z) for real z < 1.

    The defining series is used on [0, 1/2], the z -> 1 - z connection
    formula on (1/2, 1), and Pfaff's transformation for negative z. When
    c - a - b is an integer the logarithmic connection formulas are used.
    """
    if _is_nonpositive_int(c):
        raise DomainError(f"c = {c!r} is a nonpositive integer")
    if not z < 1.0:
        raise DomainError(f"z = {z!r} is not below 1")
    return _hyp2f1(a, b, c, z, 1.0 - z)


# --------------------------------------------------------------------------
# AGM, elliptic integrals and the Grötzsch mu function


def agm(x, y, *, full_output=False):
    """Arithmetic-geometric mean of two nonnegative numbers.

    With ``full_output`` the number of iterations is returned as well.
    """
    if x < 0 or y < 0:
        raise DomainError("agm needs nonnegative arguments")
    a, b = float(x), float(y)
    steps = 0
    while abs(a - b) > 1e-15 * a and steps < 64:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        steps += 1
    a = 0.5 * (a + b)
    return (a, steps) if full_output else a


def _ell_K_from_complement(kp):
    return math.pi / (2.0 * agm(1.0, kp))


def ell_K(k):
    """Complete elliptic integral of the first kind, K(k) = pi/(2 agm(1, k'))."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"ell_K needs 0 <= k < 1, got {k!r}")
    return _ell_K_from_complement(math.sqrt((1.0 - k) * (1.0 + k)))


def _mu_pair(r, rc):
    """mu(r) given r and its complement rc = sqrt(1 - r^2)."""
    if r < 1e-150:
        return math.log(4.0 / r)
    if rc < 1e-150:
        return math.pi**2 / (4.0 * math.log(4.0 / rc))
    return 0.5 * math.pi * agm(1.0, rc) / agm(1.0, r)


def mu(r):
    """Grötzsch ring modulus mu(r) = (pi/2) K(r')/K(r) for 0 < r < 1."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"mu needs 0 < r < 1, got {r!r}")
    return _mu_pair(r, math.sqrt((1.0 - r) * (1.0 + r)))


def _pair_from_log_ratio(u):
    """(r, r') with r/r' = exp(u) and r^2 + r'^2 = 1, accurate at both ends."""
    if u >= 0.0:
        e = math.exp(-u)
        rc = e / math.sqrt(1.0 + e * e)
        return 1.0 / math.sqrt(1.0 + e * e), rc
    e = math.exp(u)
    return e / math.sqrt(1.0 + e * e), 1.0 / math.sqrt(1.0 + e * e)


def _mu_inv_pair(y):
    lo, hi = -y - 2.0, 2.0
    while _mu_pair(*_pair_from_log_ratio(hi)) > y:
        hi *= 2.0
    while _mu_pair(*_pair_from_log_ratio(lo)) < y:
        lo *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _mu_pair(*_pair_from_log_ratio(mid)) > y:
            lo = mid
        else:
            hi = mid
    return _pair_from_log_ratio(0.5 * (lo + hi))


def mu_inv(y):
    """Inverse of mu on (0, inf), computed by bisection."""
    if not 0.0 < y < math.inf:
        raise DomainError(f"mu_inv needs y > 0, got {y!r}")
    return _mu_inv_pair(y)[0]


# --------------------------------------------------------------------------
# Theta functions


def _theta3_tail(q):
    """Sum of q^(n^2) over n >= 1."""
    total, n = 0.0, 1
    while True:
        term = q ** (n * n)
        total += term
        if term < 1e-17:
            return total
        n += 1


def _theta2_core(q):
    """Sum of q^(n(n+1)) over n >= 0."""
    total, n = 1.0, 1
    while True:
        term = q ** (n * (n + 1))
        total += term
        if term < 1e-17:
            return total
        n += 1


def theta23(q):
    """Jacobi theta functions theta2(q) and theta3(q) for a nome 0 < q < 1."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0, 1), got {q!r}")
    theta3 = 1.0 + 2.0 * _theta3_tail(q)
    # theta2 = 2 q^(1/4) sum q^(n(n+1)), factored to survive tiny q
    theta2 = 2.0 * q**0.25 * _theta2_core(q)
    return ThetaPair(q, theta2, theta3)


def _theta4(q):
    total = 0.0
    n = 1
    while True:
        term = q ** (n * n)
        total += -term if n % 2 else term
        if term < 1e-17:
            return 1.0 + 2.0 * total
        n += 1


def modulus_from_nome(q):
    """Elliptic modulus (k, k') belonging to the nome q.

    For q above exp(-pi) the conjugate nome is used so that whichever of
    k, k' is small is obtained without cancellation.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0, 1), got {q!r}")
    if q <= math.exp(-math.pi):
        t = theta23(q)
        return (t.theta2 / t.theta3) ** 2, (_theta4(q) / t.theta3) ** 2
    log_qc = math.pi**2 / math.log(q)
    if log_qc < -600.0:
        # k' = 4 qc^(1/2) to full precision; the series corrections are below 1e-260
        return 1.0, 4.0 * math.exp(0.5 * log_qc)
    qc = math.exp(log_qc)
    t = theta23(qc)
    return (_theta4(qc) / t.theta3) ** 2, (t.theta2 / t.theta3) ** 2


# --------------------------------------------------------------------------
# Elliptic sine


def _sncndn(u, k, kc):
    """sn, cn, dn of real u by descending Landen (AGM) recursion."""
    a = [1.0]
    c = [k]
    b = kc
    while abs(c[-1]) > 1e-16 and len(a) < 64:
        an, bn = a[-1], b
        a.append(0.5 * (an + bn))
        c.append(0.5 * (an - bn))
        b = math.sqrt(an * bn)
    n = len(a) - 1
    phi = 2.0**n * a[n] * u
    prev = phi
    for j in range(n, 0, -1):
        prev = phi
        phi = 0.5 * (phi + math.asin(c[j] / a[j] * math.sin(phi)))
    s, cphi = math.sin(phi), math.cos(phi)
    dn = cphi / math.cos(prev - phi) if n > 0 else 1.0
    return s, cphi, dn


def sn(u, k):
    """Jacobi elliptic sine sn(u; k) for real u and 0 <= k < 1."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"sn needs 0 <= k < 1, got {k!r}")
    return _sncndn(u, k, math.sqrt((1.0 - k) * (1.0 + k)))[0]


def _sn_imag(y, k, kc):
    kp_period = _ell_K_from_complement(k)
    if abs(y) >= kp_period * (1.0 - 1e-14):
        raise PoleError(f"sn(iy) has a pole at |y| = K(k') = {kp_period!r}")
    s, c, _ = _sncndn(y, kc, k)
    return s / c


def sn_imag(y, k):
    """Imaginary part of sn(iy; k) for |y| < K(k').

    Uses Jacobi's imaginary transformation sn(iy; k) = i sn(y; k')/cn(y; k').
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"sn_imag needs 0 < k < 1, got {k!r}")
    return _sn_imag(y, k, math.sqrt((1.0 - k) * (1.0 + k)))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gauss_legendre(f, lo, hi):
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def _adaptive_quad(f, lo, hi, tol, depth=0):
    """Adaptive bisection with a 20-point Gauss-Legendre rule per panel."""
    mid = 0.5 * (lo + hi)
    whole = _gauss_legendre(f, lo, hi)
    left = _gauss_legendre(f, lo, mid)
    right = _gauss_legendre(f, mid, hi)
    if abs(left + right - whole) <= max(tol, 4e-15 * abs(whole)) or depth >= 30:
        return left + right
    return _adaptive_quad(f, lo, mid, 0.5 * tol, depth + 1) + _adaptive_quad(
        f, mid, hi, 0.5 * tol, depth + 1
    )


def asn(w, k):
    """Inverse elliptic sine, the integral of dt/sqrt((1-t^2)(1-k^2 t^2)) on [0, w].

    The substitution t = sin(phi) removes the endpoint singularity at w = 1.
    """
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"asn needs 0 <= w <= 1, got {w!r}")
    if not 0.0 <= k < 1.0:
        raise DomainError(f"asn needs 0 <= k < 1, got {k!r}")
    if w == 0.0:
        return 0.0
    kc2 = (1.0 - k) * (1.0 + k)

    def integrand(phi):
        # 1 - k^2 sin^2 written without cancellation near phi = pi/2
        return 1.0 / np.sqrt(np.cos(phi) ** 2 + kc2 * np.sin(phi) ** 2)

    return _adaptive_quad(integrand, 0.0, math.asin(w), 1e-14)
