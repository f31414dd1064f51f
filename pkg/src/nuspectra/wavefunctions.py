"""Closed-form eigenfunctions sampled on a real grid.

The eigenfunction in the hypergeometric variable z = -exp(-2 alpha x) is

    psi(z) = z^delta (1 - q z)^((1 - eta H)/2) P_n^(2 delta, -eta H)(1 - 2 q z).

On the real line z < 0, so z^delta is evaluated as |z|^delta (a constant
phase is dropped). Everything is assembled in logarithms, which keeps the
far tails finite where the individual factors would overflow.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .closed_form import aux_quantities
from .errors import ConvergenceDomainError, DomainError, GridMismatch, NonDecaying, ZeroNorm
from .potential import Convention, asymptotic_limits, potential_value
from .special import gamma, gauss_2f1, jacobi_coefficients

DEFAULT_POINTS = 8001
DECAY_LENGTHS = 40.0
_DECAY_RATIO = 1e-3
_NODE_FLOOR = 1e-9
_SPEC_TOL = 1e-12


def map_z(alpha, x):
    """z = -exp(-2 alpha x); overflow saturates at -inf instead of warning."""
    with np.errstate(over="ignore"):
        out = -np.exp(-2.0 * alpha * np.asarray(x, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class WavefunctionSpec:
    params: object
    level: object
    exponents: tuple
    jacobi_indices: tuple

    def __post_init__(self):
        delta, power = _exponents_for(self.params, self.level)
        expected = ((delta, power), (2.0 * delta, 2.0 * power - 1.0))
        got = (tuple(self.exponents), tuple(self.jacobi_indices))
        for a, b in zip(sum(expected, ()), sum(got, ())):
            if abs(a - b) > _SPEC_TOL * max(1.0, abs(a)):
                raise ValueError("exponents do not match the level's auxiliary quantities")

    @classmethod
    def from_level(cls, params, level):
        delta, power = _exponents_for(params, level)
        return cls(params, level, (delta, power), (2.0 * delta, 2.0 * power - 1.0))

    @property
    def n(self):
        return self.level.n


def _exponents_for(params, level):
    if isinstance(level.E, complex):
        raise DomainError("wavefunctions need a real energy")
    aux = aux_quantities(params, level.E, level.eta)
    if not (aux.delta_real and aux.H_real):
        raise DomainError("delta and H must be real for a sampled wavefunction")
    return float(aux.delta), 0.5 * (1.0 - level.eta * float(aux.H))


@dataclass(frozen=True)
class SampledWavefunction:
    xs: np.ndarray
    values: np.ndarray
    norm: float = float("nan")
    nodes: int = -1

    def __post_init__(self):
        if len(self.xs) != len(self.values):
            raise ValueError("xs and values must have the same length")
        if len(self.xs) > 1 and not np.all(np.diff(self.xs) > 0.0):
            raise ValueError("xs must be strictly increasing")


def _log_jacobi(coefs, s):
    """ln|P| and sign(P) for P(s) = sum c_m s^m, scaled to avoid overflow."""
    n = len(coefs) - 1
    big = np.abs(s) > 1.0
    acc = np.zeros_like(s)
    # |s| <= 1: Horner in s; |s| > 1: Horner in 1/s on the reversed list
    inv = np.where(big, 1.0 / np.where(big, s, 1.0), 0.0)
    for c in reversed(coefs):
        acc = np.where(big, acc, acc * s + c)
    rev = np.zeros_like(s)
    for c in coefs:
        rev = rev * inv + c
    with np.errstate(divide="ignore"):
        log_small = np.log(np.abs(acc))
        log_big = np.log(np.abs(rev)) + n * np.log(np.abs(np.where(big, s, 1.0)))
    sign_big = np.sign(rev) * np.sign(np.where(big, s, 1.0)) ** n
    return np.where(big, log_big, log_small), np.where(big, sign_big, np.sign(acc))


def psi_raw(spec, xs):
    """Unnormalized closed-form eigenfunction on the grid ``xs``.

    Raises:
        NonDecaying: |psi| at a grid end exceeds 1e-3 of its maximum.
    """
    p = spec.params
    xs = np.asarray(xs, dtype=float)
    delta, power = spec.exponents
    a, b = spec.jacobi_indices
    t = -2.0 * p.alpha * xs  # ln|z|
    ln_q = math.log(abs(p.q))
    # s = q z = -q e^t; ln(1 - s) = ln(1 + q e^t)
    s = -p.q * np.exp(np.minimum(t, 700.0))
    log_one_minus_s = np.logaddexp(0.0, ln_q + t) if p.q > 0 else np.log1p(-s)
    log_p, sign_p = _log_jacobi(jacobi_coefficients(spec.n, a, b), s)
    log_mag = delta * t + power * log_one_minus_s + log_p
    peak = np.max(log_mag[np.isfinite(log_mag)])
    with np.errstate(under="ignore"):
        values = sign_p * np.exp(log_mag - peak)
    values = np.where(np.isfinite(values), values, 0.0)
    ends = max(abs(values[0]), abs(values[-1]))
    top = np.max(np.abs(values))
    if top == 0.0 or ends / top > _DECAY_RATIO:
        raise NonDecaying(f"|psi| at the grid end is {ends / top if top else math.inf:.3g} of its maximum")
    return SampledWavefunction(xs=xs, values=values)


def normalize_numeric(w):
    """Scale to unit L2 norm (composite Simpson); ``norm`` keeps the prior integral."""
    integral = float(simpson(np.abs(w.values) ** 2, x=w.xs))
    if not integral > 0.0 or not math.isfinite(integral):
        raise ZeroNorm("wavefunction has zero norm on the grid")
    values = w.values / math.sqrt(integral)
    out = SampledWavefunction(xs=w.xs, values=values, norm=integral)
    return SampledWavefunction(xs=w.xs, values=values, norm=integral, nodes=node_count(out))


def node_count(w):
    """Strict sign changes of Re(psi), skipping samples with |psi| < 1e-9."""
    vals = np.real(w.values)
    keep = vals[np.abs(w.values) >= _NODE_FLOOR]
    if keep.size < 2:
        return 0
    return int(np.count_nonzero(np.signbit(keep[1:]) != np.signbit(keep[:-1])))


def inner_product(u, v):
    if u.xs.shape != v.xs.shape or not np.array_equal(u.xs, v.xs):
        raise GridMismatch("functions are sampled on different grids")
    return complex(simpson(np.conj(u.values) * v.values, x=u.xs))


def orthogonality_matrix(ws):
    """Gram matrix of Simpson inner products (real part)."""
    ws = list(ws)
    for w in ws[1:]:
        if w.xs.shape != ws[0].xs.shape or not np.array_equal(w.xs, ws[0].xs):
            raise GridMismatch("functions are sampled on different grids")
    k = len(ws)
    gram = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            gram[i, j] = gram[j, i] = inner_product(ws[i], ws[j]).real
    return gram


def potential_extent(p, rel_tol=1e-8, convention=Convention.REDUCED):
    """Half-width beyond which V is within rel_tol*scale of its asymptotic limits."""
    window = asymptotic_limits(p, convention)
    reach = 400.0 / abs(p.alpha)
    xs = np.linspace(-reach, reach, 40001)
    v = potential_value(p, xs, convention)
    scale = max(1.0, *(abs(d) for d in p.depths))
    tol = rel_tol * scale
    left = np.abs(v - window.v_minus) > tol
    right = np.abs(v - window.v_plus) > tol
    busy = np.flatnonzero(left & right)
    if busy.size == 0:
        return 0.0
    return float(max(abs(xs[busy[0]]), abs(xs[busy[-1]])))


def default_half_width(p, convention=Convention.REDUCED):
    """L = max(40 decay lengths, extent of the potential's non-asymptotic region)."""
    return max(DECAY_LENGTHS / abs(p.alpha), potential_extent(p, convention=convention))


def default_grid(p, n_points=DEFAULT_POINTS, half_width=None, convention=Convention.REDUCED):
    half = default_half_width(p, convention) if half_width is None else float(half_width)
    return np.linspace(-half, half, int(n_points))


def closed_form_wavefunction(p, level, xs):
    """psi_raw followed by normalize_numeric, for a level of the combined potential."""
    return normalize_numeric(psi_raw(WavefunctionSpec.from_level(p, level), xs))


def _gamma_checked(x):
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"Gamma argument {x} is a non-positive integer")
    return gamma(x)


def paper_norm_constant(spec, p_index, r_index):
    """Printed normalization factor sqrt(B/A), for comparison only.

    The prefactor of A uses the given (p, r); the inner sum runs over
    p = 0..n at fixed r, as the printed formula's summation limits read.
    B comes from the z-integral written as a Gauss function at argument q,
    so only q < 1 is accepted.

    Raises:
        ConvergenceDomainError: q >= 1.
        DomainError: a Gamma argument is a non-positive integer, or B/A < 0.
    """
    p = spec.params
    q = p.q
    if q >= 1.0:
        raise ConvergenceDomainError(f"normalization series needs q < 1, got q = {q}")
    n = spec.n
    c = spec.exponents[0]
    d = -0.5 * (1.0 - 2.0 * spec.exponents[1])  # -eta H / 2
    eta_h = -2.0 * d
    pi, ri = int(p_index), int(r_index)
    if not (0 <= pi <= n and 0 <= ri <= n):
        raise ValueError("p and r must lie in 0..n")
    pref = (
        (-1.0) ** n
        * _gamma_checked(n + 2 * c + 1) ** 2
        * _gamma_checked(n + 2 * d + 1)
        / (_gamma_checked(n + 2 * c - pi + 1) * _gamma_checked(ri + 2 * d + 1) * _gamma_checked(2 * c + 2 * d + 1))
    )
    total = 0.0
    for k in range(n + 1):
        total += (
            (-1.0) ** (k + ri)
            * q ** (n - k + ri)
            * _gamma_checked(n + 2 * c + 2 * d + ri + 1)
            / (
                math.factorial(k)
                * math.factorial(ri)
                * math.factorial(n - k)
                * math.factorial(n - ri)
                * _gamma_checked(k + 2 * d + 1)
            )
        )
    a_nq = pref * total
    a = n + ri - pi + 2 * c + 1
    b_inv = gauss_2f1(a, eta_h - 1 - pi, a, q) / a
    ratio = (1.0 / b_inv) / a_nq
    if not ratio > 0.0:
        raise DomainError(f"B/A = {ratio:.6g} is not positive")
    return math.sqrt(ratio)
