"""Verification reports: closed-form levels against the numerical oracles."""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .closed_form import candidate_levels, energy_complex_combined
from .errors import NoConvergence, NonDecaying, NuSpectraError
from .oracle import Grid, complex_shoot, discretize, eigenvector, fd_levels, numerov_shoot
from .potential import Mode, asymptotic_limits, potential_value, potential_value_complex
from .wavefunctions import (
    SampledWavefunction,
    closed_form_wavefunction,
    default_half_width,
    inner_product,
    orthogonality_matrix,
)

ORACLE_MATCH_REL = 5e-3  # a closed-form level is "verified" within 0.5% of its oracle level
CLOSED_AGREE_ABS = 1e-6


@dataclass
class WavefunctionCheck:
    nodes: int
    norm_integral: float
    overlap_with_oracle: float


@dataclass
class LevelRecord:
    n: int
    eta: int
    E_closed: float
    E_oracle_fd: float = None
    E_oracle_numerov: float = None
    abs_residual: float = None
    rel_residual: float = None
    admissible: bool = False
    flags: list = field(default_factory=list)
    verified: bool = False
    wavefunction: WavefunctionCheck = None


@dataclass
class OracleLevel:
    n: int
    E_fd: float
    E_numerov: float
    fd_numerov_abs_diff: float


@dataclass
class VerifyReport:
    toolkit_version: str
    mode: str
    convention: str
    params: dict
    window: dict
    grid: dict
    oracle_levels: list
    levels: list
    summary: dict

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return dumps(self.to_dict())


@dataclass
class ComplexLevelRecord:
    n: int
    eta: int
    E_closed_re: float
    E_closed_im: float
    E_shoot_re: float = None
    E_shoot_im: float = None
    abs_residual: float = None
    shoot_residual: float = None
    converged: bool = False
    admissible: bool = False
    flags: list = field(default_factory=list)


def dumps(obj):
    """Deterministic JSON: sorted keys, shortest round-trip floats, non-finite as null."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def parallel_map(fn, items, workers):
    """Ordered map; fans out to worker processes when more than one is allowed."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def oracle_grid(params, points, half_width=None):
    half = default_half_width(params) if half_width is None else float(half_width)
    return Grid.symmetric(half, points)


def _real_potential(params, convention):
    return lambda x: potential_value(params, x, convention)


def _numerov_task(args):
    params, convention, grid, n, e_max = args
    try:
        return numerov_shoot(_real_potential(params, convention), grid, n, e_max)
    except NuSpectraError:
        return None


def _wavefunction_check(params, level, grid, h_coarse, e_oracle):
    try:
        w = closed_form_wavefunction(params, level, grid.x)
    except (NonDecaying, NuSpectraError):
        return None
    vec = eigenvector(h_coarse, e_oracle)
    ow = SampledWavefunction(xs=grid.x, values=vec)
    ow_norm = inner_product(ow, ow).real
    overlap = abs(inner_product(w, ow)) / math.sqrt(ow_norm)
    integral = inner_product(w, w).real
    return WavefunctionCheck(nodes=w.nodes, norm_integral=integral, overlap_with_oracle=overlap), w


def build_verify_report(cfg, workers=1):
    """Verify the real-mode closed forms of a config against both oracles."""
    p = cfg.params
    conv = cfg.convention
    window = asymptotic_limits(p, conv)
    grid = oracle_grid(p, cfg.grid.points, cfg.grid.half_width)
    v = _real_potential(p, conv)
    fd = fd_levels(v, grid, window.e_max)
    tasks = [(p, conv, grid, n, window.e_max) for n in range(len(fd))]
    numerov = parallel_map(_numerov_task, tasks, workers)
    oracle_levels = [
        OracleLevel(
            n=n,
            E_fd=fd[n],
            E_numerov=numerov[n],
            fd_numerov_abs_diff=None if numerov[n] is None else abs(fd[n] - numerov[n]),
        )
        for n in range(len(fd))
    ]

    n_max = max(cfg.n_max_hint, len(fd))
    h_coarse = discretize(v, grid)
    records, sampled = [], []
    for level in candidate_levels(p, n_max, conv):
        rec = LevelRecord(
            n=level.n,
            eta=level.eta,
            E_closed=level.E if isinstance(level.E, float) else float("nan"),
            admissible=level.admissible,
            flags=list(level.reasons),
        )
        if level.n < len(fd) and isinstance(level.E, float):
            e_fd = fd[level.n]
            rec.E_oracle_fd = e_fd
            rec.E_oracle_numerov = numerov[level.n]
            rec.abs_residual = abs(level.E - e_fd)
            rec.rel_residual = rec.abs_residual / max(abs(e_fd), 1e-300)
            rec.verified = level.admissible and rec.abs_residual <= ORACLE_MATCH_REL * max(abs(e_fd), 1e-12)
            if rec.verified:
                got = _wavefunction_check(p, level, grid, h_coarse, e_fd)
                if got is not None:
                    rec.wavefunction, w = got
                    sampled.append(w)
        records.append(rec)

    gram_off = 0.0
    if len(sampled) > 1:
        gram = orthogonality_matrix(sampled)
        gram_off = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    diffs = [o.fd_numerov_abs_diff for o in oracle_levels]
    admissible = [r for r in records if r.admissible]
    resid = [r.abs_residual for r in admissible if r.abs_residual is not None]
    summary = {
        "oracle_count": len(fd),
        "numerov_complete": all(d is not None for d in diffs),
        "max_fd_numerov_abs_diff": max((d for d in diffs if d is not None), default=0.0),
        "closed_admissible_count": len(admissible),
        "max_closed_abs_residual": max(resid, default=0.0),
        "closed_matches_oracle": bool(admissible)
        and len(admissible) == len(fd)
        and all(r is not None and r <= CLOSED_AGREE_ABS for r in resid),
        "gram_max_off_diagonal": gram_off,
    }
    return VerifyReport(
        toolkit_version=__version__,
        mode=Mode.REAL.value,
        convention=conv.value,
        params=p.to_dict(),
        window={"v_minus": window.v_minus, "v_plus": window.v_plus, "e_max": window.e_max},
        grid={
            "x_min": grid.x_min,
            "x_max": grid.x_max,
            "points": grid.n_points,
            "h": grid.h,
            "boundary": "dirichlet",
            "richardson_points": grid.refined().n_points,
        },
        oracle_levels=oracle_levels,
        levels=records,
        summary=summary,
    )


def _eta_list(policy):
    if policy == "BOTH":
        return (1, -1)
    if policy == "AUTO":
        return (1,)
    return (int(policy),)


def complex_levels(cfg):
    """Closed-form levels of a complex-mode config, n = 0..n_max_hint."""
    cp = cfg.complex_params
    out = []
    for eta in _eta_list(cfg.eta_policy):
        for n in range(cfg.n_max_hint + 1):
            try:
                out.append(energy_complex_combined(cp, n, eta))
            except NuSpectraError:
                continue
    return out


def _shoot_task(args):
    cp, conv, grid, seed = args
    v = lambda x: potential_value_complex(cp, x, conv)  # noqa: E731
    try:
        res = complex_shoot(v, grid, seed)
        return res.E, res.residual, True
    except NoConvergence as exc:
        best = exc.best
        return best.E, best.residual, False
    except NuSpectraError:
        return None, None, False


def build_complex_report(cfg, workers=1):
    """Box-truncated complex shooting seeded by the closed forms (PT / NONPT modes).

    The complexified potentials are periodic in x, so the shooting spectrum
    depends on the box; values are reported, realness is measured.
    """
    cp = cfg.complex_params
    half = cfg.grid.half_width if cfg.grid.half_width is not None else 10.0 / abs(cfg.params.alpha)
    grid = Grid.symmetric(half, cfg.grid.points)
    levels = complex_levels(cfg)
    conv = "expanded"
    results = parallel_map(_shoot_task, [(cp, conv, grid, complex(lv.E)) for lv in levels], workers)
    records = []
    for lv, (e, resid, ok) in zip(levels, results):
        ec = complex(lv.E)
        rec = ComplexLevelRecord(
            n=lv.n,
            eta=lv.eta,
            E_closed_re=ec.real,
            E_closed_im=ec.imag,
            admissible=lv.admissible,
            flags=list(lv.reasons),
        )
        if e is not None:
            rec.E_shoot_re, rec.E_shoot_im = e.real, e.imag
            rec.abs_residual = abs(e - ec)
            rec.shoot_residual = resid
            rec.converged = ok
        records.append(rec)
    ims = [abs(r.E_shoot_im) for r in records if r.E_shoot_im is not None]
    return VerifyReport(
        toolkit_version=__version__,
        mode=cfg.mode.value,
        convention=conv,
        params=cfg.params.to_dict(),
        window={},
        grid={
            "x_min": grid.x_min,
            "x_max": grid.x_max,
            "points": grid.n_points,
            "h": grid.h,
            "boundary": "dirichlet_box",
        },
        oracle_levels=[],
        levels=records,
        summary={
            "level_count": len(records),
            "converged_count": sum(r.converged for r in records),
            "max_abs_im_E_shoot": max(ims, default=0.0),
        },
    )
