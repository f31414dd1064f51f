"""The q-deformed Woods-Saxon + Rosen-Morse + double-well potential family.

All six terms are rational functions of the single variable

    A(x) = e^(-2 alpha x) / (1 + q e^(-2 alpha x)) = 1 / (e^(2 alpha x) + q),

because sech_q^2(alpha x) = 4 A (1 - q A) and tanh_q(alpha x) = 1 - 2 q A.
Evaluating through A is overflow-free for any real x: e^(2 alpha x) may
overflow to inf, which simply sends A to 0.

Three sign conventions are supported (see ``Convention``):

* ``PRINTED``: the six-term sum exactly as written in the defining formula.
* ``EXPANDED``: the sign pattern used by the expanded trigonometric forms of
  the complexified potentials and by the special-case potentials
  (V1, V3, V4, V6 attractive, +V5 tanh_q^2).
* ``REDUCED``: the potential whose Schroedinger equation maps exactly onto the
  hypergeometric-type equation behind the closed-form spectrum. It equals
  ``EXPANDED`` minus V5 / (1 + q e^(-2 alpha x))^2.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameters, PoleError

_DEFORMED_POLE_TOL = 1e-14
_REAL_POLE_TOL = 1e-300
_COMPLEX_POLE_TOL = 1e-12


class Convention(str, enum.Enum):
    PRINTED = "printed"
    EXPANDED = "expanded"
    REDUCED = "reduced"


class Mode(str, enum.Enum):
    REAL = "REAL"
    PT = "PT"
    NONPT = "NONPT"


# (V1, V2, V3, V4, V5, V6) sign multipliers relative to the printed sum.
_SIGNS = {
    Convention.PRINTED: (1, 1, 1, 1, 1, 1),
    Convention.EXPANDED: (-1, 1, -1, -1, -1, -1),
    Convention.REDUCED: (-1, 1, -1, -1, -1, -1),
}

DEPTH_NAMES = ("V1", "V2", "V3", "V4", "V5", "V6")


class OutsideClosedFormDomain(UserWarning):
    """Parameters are valid but lie outside the q >= 1 domain of the closed forms."""


@dataclass(frozen=True)
class PotentialParams:
    """Real depths V1..V6, deformation q and inverse range alpha (hbar = 2mu = 1)."""

    V1: float = 0.0
    V2: float = 0.0
    V3: float = 0.0
    V4: float = 0.0
    V5: float = 0.0
    V6: float = 0.0
    q: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        for name in DEPTH_NAMES + ("q", "alpha"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise InvalidParameters(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.alpha == 0.0:
            raise InvalidParameters("alpha != 0 violated: alpha = 0")
        if self.q == 0.0:
            raise InvalidParameters("q != 0 violated: q = 0")

    @property
    def depths(self):
        return tuple(getattr(self, name) for name in DEPTH_NAMES)

    @property
    def beta(self):
        """Dimensionless depths V_i / (4 alpha^2)."""
        s = 4.0 * self.alpha**2
        return tuple(v / s for v in self.depths)

    @property
    def outside_closed_form_domain(self):
        return self.q < 1.0

    def replace(self, **changes):
        values = {name: getattr(self, name) for name in DEPTH_NAMES + ("q", "alpha")}
        values.update(changes)
        return PotentialParams(**values)

    def to_dict(self):
        return {name: getattr(self, name) for name in DEPTH_NAMES + ("q", "alpha")}


@dataclass(frozen=True)
class ComplexPotentialParams:
    """Complexified parameter set.

    The stored fields are the effective complex values that enter the
    potential. Build instances with :meth:`substitute` so the mode's
    substitution rule is applied consistently:

    * PT: alpha -> i alpha, everything else real.
    * NONPT: q -> i q, alpha -> i alpha, V1 -> i V1, V3 -> i V3, V6 -> i V6.
    """

    V1: complex
    V2: complex
    V3: complex
    V4: complex
    V5: complex
    V6: complex
    q: complex
    alpha: complex
    mode: Mode
    base: PotentialParams = field(compare=False, repr=False, default=None)

    @classmethod
    def substitute(cls, p, mode):
        mode = Mode(mode)
        if mode is Mode.REAL:
            raise InvalidParameters("complex parameters need mode PT or NONPT")
        imag = {"alpha"} if mode is Mode.PT else {"q", "alpha", "V1", "V3", "V6"}
        values = {}
        for name in DEPTH_NAMES + ("q", "alpha"):
            v = getattr(p, name)
            values[name] = complex(0.0, v) if name in imag else complex(v, 0.0)
        return cls(mode=mode, base=p, **values)

    @property
    def depths(self):
        return tuple(getattr(self, name) for name in DEPTH_NAMES)


@dataclass(frozen=True)
class AsymptoticWindow:
    v_minus: float
    v_plus: float
    e_max: float


def deformed_hyperbolic(kind, q, x):
    """q-deformed hyperbolic functions; q = 1 gives the ordinary ones.

    sinh_q x = (e^x - q e^-x)/2 and cosh_q x = (e^x + q e^-x)/2; the other
    kinds are the usual ratios and reciprocals.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        ep, em = np.exp(x), np.exp(-x)
    sinh_q = 0.5 * (ep - q * em)
    cosh_q = 0.5 * (ep + q * em)
    if kind == "sinh_q":
        out = sinh_q
    elif kind == "cosh_q":
        out = cosh_q
    elif kind in ("tanh_q", "sech_q"):
        _check_pole(cosh_q, "cosh_q")
        out = sinh_q / cosh_q if kind == "tanh_q" else 1.0 / cosh_q
    elif kind in ("coth_q", "cosech_q"):
        _check_pole(sinh_q, "sinh_q")
        out = cosh_q / sinh_q if kind == "coth_q" else 1.0 / sinh_q
    else:
        raise ValueError(f"unknown deformed function {kind!r}")
    return out[()] if out.ndim == 0 else out


def _check_pole(den, name):
    if np.any(np.abs(den) < _DEFORMED_POLE_TOL):
        raise PoleError(f"{name} vanishes at the requested point")


def _shape_a(two_alpha_x, q, tol):
    with np.errstate(over="ignore", invalid="ignore"):
        den = np.exp(two_alpha_x) + q
    finite = np.isfinite(den)
    if np.any(np.abs(den[finite]) < tol):
        raise PoleError("potential denominator 1 + q e^(-2 alpha x) vanishes")
    with np.errstate(divide="ignore"):
        a = np.where(finite, 1.0 / np.where(finite, den, 1.0), 0.0)
    return a


def _combine(a, q, depths, convention):
    s1, s2, s3, s4, s5, s6 = _SIGNS[convention]
    v1, v2, v3, v4, v5, v6 = depths
    sech2 = 4.0 * a * (1.0 - q * a)
    tanh = 1.0 - 2.0 * q * a
    out = (
        s1 * v1 * a
        + s2 * v2 * a * a
        + (s3 * v3 + s6 * v6) * sech2
        + s4 * v4 * tanh
        - s5 * v5 * tanh * tanh
    )
    if convention is Convention.REDUCED:
        out = out - v5 * (1.0 - q * a) ** 2
    return out


def potential_value(p, x, convention=Convention.PRINTED):
    """Evaluate the real potential at x (scalar or array)."""
    convention = Convention(convention)
    x = np.asarray(x, dtype=float)
    a = _shape_a(2.0 * p.alpha * np.atleast_1d(x), p.q, _REAL_POLE_TOL)
    out = _combine(a, p.q, p.depths, convention).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def potential_value_complex(p, x, convention=Convention.EXPANDED):
    """Evaluate a complexified potential at real x.

    The mode's substitutions are already folded into ``p``; the same
    rational expression in A(x) is evaluated with complex arithmetic.
    """
    convention = Convention(convention)
    x = np.asarray(x, dtype=float)
    two_ax = 2.0 * complex(p.alpha) * np.atleast_1d(x).astype(complex)
    q = complex(p.q)
    den = np.exp(two_ax) + q
    if np.any(np.abs(den) < _COMPLEX_POLE_TOL * (1.0 + abs(q))):
        raise PoleError("complexified potential denominator vanishes")
    a = 1.0 / den
    out = _combine(a, q, p.depths, convention).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def asymptotic_limits(p, convention=Convention.PRINTED):
    """Limits of the real potential as x -> -inf and x -> +inf.

    For alpha > 0, x -> +inf sends A -> 0 and x -> -inf sends A -> 1/q; a
    negative alpha swaps the two ends.
    """
    convention = Convention(convention)
    at_zero = float(_combine(np.array([0.0]), p.q, p.depths, convention)[0])
    at_inv_q = float(_combine(np.array([1.0 / p.q]), p.q, p.depths, convention)[0])
    v_plus, v_minus = (at_zero, at_inv_q) if p.alpha > 0 else (at_inv_q, at_zero)
    return AsymptoticWindow(v_minus=v_minus, v_plus=v_plus, e_max=min(v_minus, v_plus))


def pt_symmetry_check(p, xs, tol=1e-12, convention=Convention.EXPANDED):
    """True iff max |V(-x)* - V(x)| <= tol over the sample points."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("pt_symmetry_check needs at least one sample point")
    if isinstance(p, PotentialParams):
        vp = potential_value(p, xs, convention).astype(complex)
        vm = potential_value(p, -xs, convention).astype(complex)
    else:
        vp = potential_value_complex(p, xs, convention)
        vm = potential_value_complex(p, -xs, convention)
    return bool(np.max(np.abs(np.conj(vm) - vp)) <= tol)


def warn_if_outside_domain(p):
    if p.outside_closed_form_domain:
        warnings.warn(
            f"q = {p.q} lies outside the q >= 1 domain of the closed forms",
            OutsideClosedFormDomain,
            stacklevel=2,
        )
