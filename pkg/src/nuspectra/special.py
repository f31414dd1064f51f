"""Gamma, Gauss hypergeometric and Jacobi kernels.

Everything here works on real scalars. The Gamma function uses the
Lanczos approximation with g = 7 and nine coefficients, which is good to
roughly 1e-15 relative on the positive axis.
"""

import math

from .errors import ConvergenceDomainError, DomainError

# Lanczos (g = 7, n = 9) coefficients, as tabulated by Godfrey.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

# z within this distance of the unit circle is rejected by the series.
_DISC_MARGIN = 1e-3
_MAX_TERMS = 200_000


def _lanczos_sum(x):
    # x is the shifted argument (Gamma(x + 1) is being computed)
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    return acc


def ln_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"ln_gamma needs x > 0, got {x!r}")
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x keeps the Lanczos sum in its good range
        return ln_gamma(x + 1.0) - math.log(x)
    y = x - 1.0
    t = y + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (y + 0.5) * math.log(t) - t + math.log(_lanczos_sum(y))


def gamma(x):
    """Signed Gamma function on the real line (poles raise DomainError)."""
    x = float(x)
    if x > 0.0:
        if x > 171.6:
            raise DomainError(f"Gamma({x}) overflows")
        return math.exp(ln_gamma(x))
    if x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    # reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))


def pochhammer(a, k):
    """Rising factorial (a)_k for integer k >= 0."""
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def _is_nonpositive_int(v):
    return v <= 0 and v == math.floor(v)


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real arguments.

    Valid inside the unit disc (|z| < 1 - 1e-3), at z = 1 when
    c - a - b > 0 (Gauss summation), and for any z when the series
    terminates because a or b is a non-positive integer.

    Raises:
        DomainError: c is a non-positive integer.
        ConvergenceDomainError: z lies outside the convergence domain.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    terminating = _is_nonpositive_int(a) or _is_nonpositive_int(b)
    if _is_nonpositive_int(c):
        raise DomainError(f"2F1 undefined for c = {c!r}")
    if z == 0.0:
        return 1.0
    if terminating:
        degree = int(-max(v for v in (a, b) if _is_nonpositive_int(v)))
        return _series(a, b, c, z, max_terms=degree, early_stop=False)
    if z == 1.0:
        if c - a - b <= 0.0:
            raise ConvergenceDomainError(f"2F1 at z=1 diverges (c-a-b = {c - a - b})")
        return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
    if abs(z) >= 1.0 - _DISC_MARGIN:
        raise ConvergenceDomainError(f"2F1 series needs |z| < 1, got z = {z!r}")
    if z < -0.5:
        # Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)), argument in (0, 1/2)
        return (1.0 - z) ** (-a) * _series(a, c - b, c, z / (z - 1.0))
    return _series(a, b, c, z)


def _series(a, b, c, z, max_terms=_MAX_TERMS, early_stop=True):
    term = 1.0
    total = 1.0
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if term == 0.0 or not early_stop:
            continue
        # stop once several consecutive terms are negligible
        if abs(term) <= 1e-17 * max(abs(total), 1.0):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return total


def jacobi_coefficients(n, a, b):
    """Coefficients c_m with P_n^(a,b)(x) = sum_m c_m u^m, u = (1 - x)/2.

    Built from Pochhammer products, so it stays finite for every real (a, b),
    including the parameter values where the three-term recurrence degenerates.
    """
    if n < 0:
        raise DomainError("jacobi degree must be >= 0")
    nfact = math.factorial(n)
    coefs = []
    for m in range(n + 1):
        c = math.comb(n, m) * pochhammer(a + m + 1.0, n - m) * pochhammer(a + b + n + 1.0, m)
        coefs.append((-1.0) ** m * c / nfact)
    return coefs


def jacobi_p_sum(n, a, b, x):
    """Jacobi polynomial from the explicit Pochhammer sum."""
    u = (1.0 - x) / 2.0
    acc = 0.0
    for c in reversed(jacobi_coefficients(n, a, b)):
        acc = acc * u + c
    return acc


def jacobi_p(n, a, b, x):
    """Jacobi polynomial P_n^(a,b)(x) by the three-term recurrence.

    Falls back to the explicit sum when a recurrence denominator vanishes
    (n + a + b = 0 or 2n + a + b - 2 = 0 for some step).
    """
    if n < 0:
        raise DomainError("jacobi degree must be >= 0")
    x = float(x)
    p0 = 1.0
    if n == 0:
        return p0
    p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
    if n == 1:
        return p1
    ab = a + b
    for k in range(2, n + 1):
        s = 2.0 * k + ab
        den = 2.0 * k * (k + ab) * (s - 2.0)
        if abs(den) < 1e-13 * (1.0 + abs(s) ** 3):
            return jacobi_p_sum(n, a, b, x)
        c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p0, p1 = p1, (c1 * p1 - c2 * p0) / den
    return p1
