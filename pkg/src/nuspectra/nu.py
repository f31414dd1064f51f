"""Generic Nikiforov-Uvarov machinery for hypergeometric-type equations.

An equation

    psi'' + (tau_t / sigma) psi' + (sigma_t / sigma^2) psi = 0

is reduced with psi = phi(z) y(z) to sigma y'' + tau y' + lambda y = 0, where

    pi(z)  = (sigma' - tau_t)/2 +/- sqrt(((sigma' - tau_t)/2)^2 - sigma_t + k sigma)
    tau    = tau_t + 2 pi
    lambda = k + pi'

and k is fixed by requiring the radicand to be the square of a polynomial.
Polynomials are numpy ``Polynomial`` objects with ascending coefficients.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .errors import (
    NoAdmissibleBranch,
    NonRealDelta,
    NoRealK,
    NoSignChange,
    UnsupportedSigma,
)

_TINY = 1e-14


def poly(*coefs):
    """Polynomial from ascending coefficients, trailing zeros trimmed."""
    p = Polynomial(np.asarray(coefs, dtype=float))
    return p.trim()


def coef(p, i):
    c = p.coef
    return float(c[i]) if i < len(c) else 0.0


@dataclass(frozen=True)
class HypergeometricODE:
    sigma: Polynomial
    sigma_tilde: Polynomial
    tau_tilde: Polynomial

    def __post_init__(self):
        if not np.any(self.sigma.coef):
            raise ValueError("sigma must not vanish identically")
        if self.sigma.degree() > 2 or self.sigma_tilde.degree() > 2 or self.tau_tilde.degree() > 1:
            raise ValueError("degrees must satisfy sigma, sigma_tilde <= 2 and tau_tilde <= 1")


@dataclass(frozen=True)
class NUBranch:
    k: float
    pi: Polynomial
    tau: Polynomial
    sqrt_sign: int
    root: Polynomial  # the polynomial whose square is the radicand

    @property
    def tau_slope(self):
        return coef(self.tau, 1)


@dataclass(frozen=True)
class ExponentForm:
    """f(z) = poly(z) * z^A * (1 - q z)^B."""

    poly: Polynomial
    A: float
    B: float
    q: float

    def derivative(self):
        p, a, b, q = self.poly, self.A, self.B, self.q
        z = Polynomial([0.0, 1.0])
        one_minus_qz = Polynomial([1.0, -q])
        new = p.deriv() * z * one_minus_qz + a * p * one_minus_qz - b * q * p * z
        return ExponentForm(new.trim(), a - 1.0, b - 1.0, q)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return self.poly(z) * z**self.A * (1.0 - self.q * z) ** self.B


def make_ode(p, energy):
    """Hypergeometric-type triple for the combined potential at energy E.

    Uses z = -exp(-2 alpha x), sigma = z - q z^2, tau_t = 1 - q z and the
    bracketed sigma_tilde coefficients built from beta_i = V_i/(4 alpha^2)
    and xi = -E/(4 alpha^2).
    """
    b1, b2, b3, b4, b5, b6 = p.beta
    q = p.q
    xi = -energy / (4.0 * p.alpha**2)
    c2 = b1 * q - b2 - q * q * (b4 + b5 + xi)
    c1 = -b1 - 4.0 * (b3 + b6) - 2.0 * q * b5 + 2.0 * q * xi
    c0 = b4 - xi
    return HypergeometricODE(
        sigma=Polynomial([0.0, 1.0, -q]),
        sigma_tilde=Polynomial([c0, c1, c2]),
        tau_tilde=Polynomial([1.0, -q]),
    )


def _radicand_parts(ode):
    half = (ode.sigma.deriv() - ode.tau_tilde) / 2.0
    base = half * half - ode.sigma_tilde
    # radicand(k) = base + k * sigma, coefficient-wise linear in k
    return half, [coef(base, i) for i in range(3)], [coef(ode.sigma, i) for i in range(3)]


def _k_roots(b, s):
    # discriminant of (b2 + k s2) z^2 + (b1 + k s1) z + (b0 + k s0) as a quadratic in k
    d2 = s[1] ** 2 - 4.0 * s[2] * s[0]
    d1 = 2.0 * b[1] * s[1] - 4.0 * (b[2] * s[0] + s[2] * b[0])
    d0 = b[1] ** 2 - 4.0 * b[2] * b[0]
    scale = max(abs(d2), abs(d1), abs(d0), _TINY)
    if abs(d2) <= 1e-13 * scale:
        if abs(d1) <= 1e-13 * scale:
            # discriminant independent of k: every k works only if it is zero
            if abs(d0) <= 1e-13 * scale:
                return [0.0]
            return []
        return [-d0 / d1]
    disc = d1 * d1 - 4.0 * d2 * d0
    if disc < -1e-12 * max(d1 * d1, abs(4.0 * d2 * d0), _TINY):
        return []
    root = math.sqrt(max(disc, 0.0))
    # numerically stable pair
    qv = -0.5 * (d1 + math.copysign(root, d1))
    if qv == 0.0:
        return [0.0]
    ks = sorted({qv / d2, d0 / qv})
    return ks


def _square_root_poly(r):
    """Return m(z) with m^2 == r0 + r1 z + r2 z^2 (m0 >= 0), or None if not real."""
    r0, r1, r2 = r
    scale = max(abs(r0), abs(r1), abs(r2), _TINY)
    if r0 < -1e-12 * scale or r2 < -1e-12 * scale:
        return None
    m0 = math.sqrt(max(r0, 0.0))
    if m0 > 1e-9 * math.sqrt(scale):
        m1 = r1 / (2.0 * m0)
    else:
        m1 = math.sqrt(max(r2, 0.0))
    return Polynomial([m0, m1])


def pi_branches(ode):
    """All real NU branches: each admissible k root times both square-root signs."""
    half, b, s = _radicand_parts(ode)
    ks = _k_roots(b, s)
    branches = []
    for k in ks:
        r = [b[i] + k * s[i] for i in range(3)]
        root = _square_root_poly(r)
        if root is None:
            continue
        for sign in (+1, -1):
            pi = (half + sign * root).trim()
            tau = (ode.tau_tilde + 2.0 * pi).trim()
            branches.append(NUBranch(k=k, pi=pi, tau=tau, sqrt_sign=sign, root=root))
    if not branches:
        raise NoRealK("perfect-square condition has no real k")
    return branches


def _tau_root_inside(branch, sigma):
    try:
        scale, q = _sigma_form(sigma)
    except UnsupportedSigma:
        return False
    t0, t1 = coef(branch.tau, 0), coef(branch.tau, 1)
    if t1 == 0.0:
        return False
    z0 = -t0 / t1
    lo, hi = sorted((0.0, 1.0 / q))
    return lo < z0 < hi


def _weight_integrable(branch, sigma):
    try:
        w = pearson_weight(branch, sigma)
    except UnsupportedSigma:
        return False
    return w.A > -1.0 and w.B > -1.0


def select_branch(branches, sigma=None):
    """Pick the branch with tau' < 0, preferring an integrable weight on (0, 1/q).

    Preference order: tau' < 0 (required), tau root inside (0, 1/q), weight
    exponents A, B > -1, then smallest k, then the minus square-root sign.
    """
    if not branches:
        raise ValueError("select_branch needs at least one branch")
    ok = [br for br in branches if br.tau_slope < 0.0]
    if not ok:
        raise NoAdmissibleBranch("every branch has tau' >= 0")

    def rank(br):
        inside = sigma is not None and _tau_root_inside(br, sigma)
        integrable = sigma is not None and _weight_integrable(br, sigma)
        return (not inside, not integrable, br.k, br.sqrt_sign)

    return min(ok, key=rank)


def branch_for_eta(branches, eta):
    """The decaying branch (pi(0) >= 0) whose k carries the given eta sign.

    For the combined potential the two k roots differ by 2 eta H q delta, so
    eta = +1 is the larger root.
    """
    plus = [br for br in branches if br.sqrt_sign > 0]
    plus.sort(key=lambda br: br.k)
    if not plus:
        raise NoRealK("no branch with a non-negative square root constant")
    return plus[-1] if eta > 0 else plus[0]


def lambda_of(branch):
    return branch.k + coef(branch.pi.deriv(), 0)


def lambda_n(branch, sigma, n):
    if n < 0:
        raise ValueError("n must be >= 0")
    tau_p = coef(branch.tau, 1)
    sigma_pp = 2.0 * coef(sigma, 2)
    return -n * tau_p - n * (n - 1) / 2.0 * sigma_pp


def _sigma_form(sigma):
    # sigma = c z (1 - q z)
    s0, s1, s2 = coef(sigma, 0), coef(sigma, 1), coef(sigma, 2)
    if abs(s0) > _TINY * max(abs(s1), abs(s2), 1.0) or s1 == 0.0 or s2 == 0.0:
        raise UnsupportedSigma("sigma must have roots 0 and 1/q")
    return s1, -s2 / s1


def pearson_weight(branch, sigma):
    """Weight rho = z^A (1 - q z)^B solving (sigma rho)' = tau rho."""
    c, q = _sigma_form(sigma)
    t0, t1 = coef(branch.tau, 0), coef(branch.tau, 1)
    a = t0 / c - 1.0
    b = -t1 / (c * q) - a - 2.0
    return ExponentForm(Polynomial([1.0]), a, b, q)


def phi_factor(branch, sigma):
    """phi = z^a (1 - q z)^b with pi / sigma = (ln phi)'."""
    c, q = _sigma_form(sigma)
    p0, p1 = coef(branch.pi, 0), coef(branch.pi, 1)
    a = p0 / c
    b = -p1 / (c * q) - a
    return ExponentForm(Polynomial([1.0]), a, b, q)


def rodrigues_polynomial(branch, sigma, weight, n):
    """y_n = (1/rho) d^n/dz^n [sigma^n rho], exact in ExponentForm arithmetic.

    The result is returned without normalization; it is proportional to
    P_n^(A,B)(1 - 2 q z).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    c, q = _sigma_form(sigma)
    f = ExponentForm(Polynomial([c**n]), weight.A + n, weight.B + n, q)
    for _ in range(n):
        f = f.derivative()
    return f.poly


def weight_is_classical(weight):
    return weight.A > -1.0 and weight.B > -1.0


def quantization_residual(p, energy, n, eta):
    """lambda(E) - lambda_n(E) on the decaying branch with the given eta."""
    ode = make_ode(p, energy)
    br = branch_for_eta(pi_branches(ode), eta)
    return lambda_of(br) - lambda_n(br, ode.sigma, n)


def quantization_solve(p, n, eta, bracket):
    """Energy where lambda(E) = lambda_n(E), found by bracketed root-finding."""
    lo, hi = sorted(float(e) for e in bracket)
    top = -p.V4
    if hi > top:
        raise NonRealDelta(f"xi - beta4 < 0 for E > {top} (bracket ends at {hi})")
    g_lo = quantization_residual(p, lo, n, eta)
    g_hi = quantization_residual(p, hi, n, eta)
    scale = max(1.0, abs(p.q), *(abs(b) for b in p.beta))
    if max(abs(g_lo), abs(g_hi)) <= 1e-10 * scale:
        raise NoSignChange("quantization residual vanishes identically on the bracket")
    if g_lo * g_hi > 0.0:
        raise NoSignChange(f"g({lo}) = {g_lo:.3g} and g({hi}) = {g_hi:.3g} share a sign")
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    return brentq(
        lambda e: quantization_residual(p, e, n, eta),
        lo,
        hi,
        xtol=1e-15 * max(1.0, abs(lo), abs(hi)),
        rtol=4.0 * np.finfo(float).eps,
        maxiter=500,
    )
