"""Closed-form energy formulas and bound-state enumeration.

Every printed energy formula has the shape

    E_n = s * (alpha^2 / 4) * [N / m - m]^2 - V4,   m = 2n + 1 - eta * sqrt(R),

with a formula-specific sign s, numerator N and radicand R. ``_nu_energy``
evaluates that shape; the public evaluators only differ in how they build
(s, N, R, eta).
"""

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import CaseViolation, DivisionByZero
from .potential import (
    ComplexPotentialParams,
    Convention,
    Mode,
    asymptotic_limits,
)

_POLE_TOL = 1e-12
_MAX_LEVELS = 1000

DELTA_IMAGINARY = "DELTA_IMAGINARY"
H_IMAGINARY = "H_IMAGINARY"
ABOVE_WINDOW = "ABOVE_WINDOW"
NONMONOTONE = "NONMONOTONE"
NON_NORMALIZABLE = "NON_NORMALIZABLE"
COMPLEX_RADICAND = "COMPLEX_RADICAND"


class SpecialCase(str, enum.Enum):
    WOODS_SAXON = "WOODS_SAXON"
    WS_PT = "WS_PT"
    WS_NONPT = "WS_NONPT"
    ROSEN_MORSE = "ROSEN_MORSE"
    RM_PT = "RM_PT"
    RM_NONPT = "RM_NONPT"
    SDW = "SDW"
    SDW_PT = "SDW_PT"
    SDW_NONPT = "SDW_NONPT"


# depths each case requires to vanish
_CASE_ZEROS = {
    "WS": ("V3", "V4", "V5", "V6"),
    "RM": ("V1", "V2", "V5", "V6"),
    "SDW": ("V1", "V2", "V3", "V4"),
}


@dataclass(frozen=True)
class AuxQuantities:
    xi: complex
    beta: tuple
    delta: complex
    H: complex
    eta: int

    # delta and H are floats when real and complex otherwise
    @property
    def delta_real(self):
        return not isinstance(self.delta, complex)

    @property
    def H_real(self):
        return not isinstance(self.H, complex)


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    eta: int
    E: complex
    admissible: bool
    reasons: tuple = ()
    formula: str = "combined"

    def __post_init__(self):
        if self.admissible and self.reasons:
            raise ValueError("an admissible level cannot carry rejection reasons")

    @property
    def is_real(self):
        return _is_real(self.E)

    def with_reason(self, reason):
        reasons = tuple(dict.fromkeys(self.reasons + (reason,)))
        return EnergyLevel(self.n, self.eta, self.E, False, reasons, self.formula)


def _is_real(v, tol=1e-10):
    if isinstance(v, complex):
        return abs(v.imag) <= tol * max(1.0, abs(v.real))
    return True


def _sqrt(v):
    """Real sqrt for v >= 0, principal complex sqrt otherwise."""
    if isinstance(v, complex):
        return cmath.sqrt(v)
    return math.sqrt(v) if v >= 0.0 else cmath.sqrt(v)


def h_radicand(p):
    """1 + V2/(q^2 a^2) + 4(V3 + V6)/(q a^2) + 3 V5/a^2."""
    a2 = p.alpha**2
    return p.V2 / (p.q**2 * a2) + 4.0 * (p.V3 + p.V6) / (p.q * a2) + 3.0 * p.V5 / a2 + 1.0


def _numerator(p):
    a2 = p.alpha**2
    return (2.0 * p.q * p.V4 + p.q * p.V5 - p.V1) / (p.q * a2) + p.V2 / (p.q**2 * a2)


def aux_quantities(p, energy, eta):
    """xi, beta_i, delta = sqrt(xi - beta4) and H at the given energy."""
    a2 = p.alpha**2
    xi = -energy / (4.0 * a2)
    beta = p.beta
    return AuxQuantities(xi=xi, beta=beta, delta=_sqrt(xi - beta[3]), H=_sqrt(h_radicand(p)), eta=eta)


def _nu_energy(alpha, sign, numerator, radicand, n, eta, v4):
    root = _sqrt(radicand)
    m = 2 * n + 1 - eta * root
    if abs(m) < _POLE_TOL:
        raise DivisionByZero(f"2n + 1 - eta*H = 0 at n={n}, eta={eta:+d}")
    bracket = numerator / m - m
    energy = sign * alpha**2 / 4.0 * bracket * bracket - v4
    return energy, root, m, bracket


def signed_delta(p, n, eta):
    """delta implied by the quantization condition, (N/m - m)/4, with its sign.

    The closed form only squares this quantity; a negative value means the
    energy solves the quantization condition for the growing branch.
    """
    _, _, _, bracket = _nu_energy(p.alpha, -1.0, _numerator(p), h_radicand(p), n, eta, p.V4)
    return bracket / 4.0


def energy_combined(p, n, eta, convention=Convention.REDUCED):
    """Closed-form level of the combined real potential.

    Admissibility flags are derived from the auxiliary quantities at the
    returned energy and from the asymptotic window of the potential the
    closed form actually solves (the reduced convention by default).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    energy, root, m, bracket = _nu_energy(p.alpha, -1.0, _numerator(p), h_radicand(p), n, eta, p.V4)
    reasons = []
    if isinstance(root, complex):
        reasons.append(H_IMAGINARY)
    if isinstance(energy, complex) and not _is_real(energy):
        reasons.append(DELTA_IMAGINARY)
    else:
        energy = energy.real if isinstance(energy, complex) else energy
        aux = aux_quantities(p, energy, eta)
        d2 = aux.xi - aux.beta[3]
        if d2 <= 0.0:
            reasons.append(DELTA_IMAGINARY)
        if not isinstance(root, complex):
            delta_q = bracket.real / 4.0 if isinstance(bracket, complex) else bracket / 4.0
            # decay at z -> 0 needs delta > 0; decay at |z| -> inf needs the total power < 0
            if delta_q <= 0.0 or delta_q + n + 0.5 * (1.0 - eta * root) >= 0.0:
                reasons.append(NON_NORMALIZABLE)
        window = asymptotic_limits(p, convention)
        if energy >= window.e_max:
            reasons.append(ABOVE_WINDOW)
    return EnergyLevel(n=n, eta=eta, E=energy, admissible=not reasons, reasons=tuple(reasons))


def _complex_energy(alpha, numerator, radicand, n, eta, v4, formula):
    energy, root, m, _ = _nu_energy(alpha, 1.0, numerator, radicand, n, eta, v4)
    reasons = () if radicand >= 0 else (COMPLEX_RADICAND,)
    if isinstance(energy, complex) and _is_real(energy):
        energy = energy.real
    return EnergyLevel(n=n, eta=eta, E=energy, admissible=not reasons, reasons=reasons, formula=formula)


def _magnitudes(p):
    if isinstance(p, ComplexPotentialParams):
        return p.base
    return p


def energy_complex_combined(p, n, eta):
    """PT (alpha -> i alpha) or non-PT spectrum of the combined potential.

    The two modes differ only in the sign of the V2 term under the root.
    The level is marked admissible when the radicand is non-negative; use
    ``EnergyLevel.is_real`` to test realness of the result.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    mode = p.mode
    b = p.base
    a2 = b.alpha**2
    numerator = (b.V1 - 2.0 * b.q * b.V4 - b.q * b.V5) / (b.q * a2) - b.V2 / (b.q**2 * a2)
    v2_sign = -1.0 if mode is Mode.PT else 1.0
    radicand = 1.0 + v2_sign * b.V2 / (b.q**2 * a2) - 4.0 * (b.V3 + b.V6) / (b.q * a2) - 3.0 * b.V5 / a2
    formula = "pt_combined" if mode is Mode.PT else "nonpt_combined"
    return _complex_energy(b.alpha, numerator, radicand, n, eta, b.V4, formula)


def _check_case(p, family):
    bad = [name for name in _CASE_ZEROS[family] if getattr(p, name) != 0.0]
    if bad:
        raise CaseViolation(f"{family} case requires {', '.join(bad)} = 0")


def special_case_energy(case, p, n, eta=1):
    """Evaluate a printed special-case formula.

    Cases with a hard-coded branch ignore ``eta`` and report the branch they
    use: Woods-Saxon (all three variants) and the complexified Rosen-Morse
    forms use eta = +1, the real Rosen-Morse form eta = -1. The double-well
    forms keep eta free.
    """
    case = SpecialCase(case)
    b = _magnitudes(p)
    family = case.value.split("_")[0]
    family = {"WOODS": "WS", "ROSEN": "RM"}.get(family, family)
    _check_case(b, family)
    a, q = b.alpha, b.q
    a2 = a * a
    if case is SpecialCase.WOODS_SAXON:
        eta = 1
        num = b.V1 / (q * a2) + b.V2 / (q * q * a2)
        e, *_ = _nu_energy(a, -1.0, num, b.V2 / (q * q * a2) + 1.0, n, eta, 0.0)
        return _plain_level(n, eta, e, case)
    if case in (SpecialCase.WS_PT, SpecialCase.WS_NONPT):
        eta = 1
        num = b.V1 / (q * a2) - b.V2 / (q * q * a2)
        sgn = -1.0 if case is SpecialCase.WS_PT else 1.0
        return _complex_energy(a, num, 1.0 + sgn * b.V2 / (q * q * a2), n, eta, 0.0, case.value)
    if case is SpecialCase.ROSEN_MORSE:
        eta = -1
        num = 2.0 * q * b.V4 / (q * a2)
        e, *_ = _nu_energy(a, -1.0, num, 1.0 + 4.0 * b.V3 / (q * a2), n, eta, b.V4)
        return _plain_level(n, eta, e, case)
    if case in (SpecialCase.RM_PT, SpecialCase.RM_NONPT):
        eta = 1
        num = 2.0 * b.V4 / a2
        return _complex_energy(a, num, 1.0 - 4.0 * b.V3 / (q * a2), n, eta, b.V4, case.value)
    if case is SpecialCase.SDW:
        num = b.V5 / a2
        rad = 4.0 * b.V6 / (q * a2) + 3.0 * b.V5 / a2 + 1.0
        e, *_ = _nu_energy(a, -1.0, num, rad, n, eta, 0.0)
        return _plain_level(n, eta, e, case)
    # SDW_PT and SDW_NONPT share one printed formula
    num = q * b.V5 / (q * a2)
    rad = 1.0 - 4.0 * b.V6 / (q * a2) - 3.0 * b.V5 / a2
    return _complex_energy(a, num, rad, n, eta, 0.0, case.value)


def _plain_level(n, eta, energy, case):
    if isinstance(energy, complex) and not _is_real(energy):
        return EnergyLevel(n, eta, energy, False, (H_IMAGINARY,), case.value)
    energy = energy.real if isinstance(energy, complex) else energy
    return EnergyLevel(n, eta, energy, True, (), case.value)


def _enumerate_eta(p, eta, convention):
    levels = []
    previous = -math.inf
    for n in range(_MAX_LEVELS):
        try:
            level = energy_combined(p, n, eta, convention)
        except DivisionByZero:
            break
        if not level.admissible:
            break
        if not level.E > previous:
            break
        levels.append(level)
        previous = level.E
    return levels


def enumerate_bound_states(p, eta_policy="AUTO", convention=Convention.REDUCED):
    """Admissible closed-form levels n = 0, 1, ... until the first violation.

    ``eta_policy`` is ``"AUTO"``, ``"BOTH"``, or a fixed sign (+1 / -1).
    AUTO keeps the branch with more admissible levels (+1 on a tie); BOTH
    returns the +1 list followed by the -1 list.
    """
    if eta_policy in ("AUTO", "BOTH"):
        plus = _enumerate_eta(p, 1, convention)
        minus = _enumerate_eta(p, -1, convention)
        if eta_policy == "BOTH":
            return plus + minus
        return plus if len(plus) >= len(minus) else minus
    eta = int(eta_policy)
    if eta not in (1, -1):
        raise ValueError(f"unknown eta policy {eta_policy!r}")
    return _enumerate_eta(p, eta, convention)


def candidate_levels(p, n_max, convention=Convention.REDUCED):
    """Every (n, eta) evaluation up to n_max, flagged; used by verification reports.

    Unlike ``enumerate_bound_states`` nothing is dropped: inadmissible and
    non-monotone levels are kept with their reasons.
    """
    out = []
    for eta in (1, -1):
        previous = -math.inf
        for n in range(n_max + 1):
            try:
                level = energy_combined(p, n, eta, convention)
            except DivisionByZero:
                continue
            if isinstance(level.E, float):
                if not level.E > previous:
                    level = level.with_reason(NONMONOTONE)
                previous = max(previous, level.E)
            out.append(level)
    return out
