"""Run configuration parsed from a single JSON document.

Example::

    {
      "mode": "REAL",
      "params": {"V3": 2.0, "q": 1.0, "alpha": 1.0},
      "eta_policy": "AUTO",
      "n_max_hint": 10,
      "grid": {"points": 8001, "half_width": null}
    }

Unknown keys are rejected at every level so typos fail loudly.
"""

import json
import os
from dataclasses import dataclass, field, replace

from .closed_form import SpecialCase
from .errors import ConfigError, InvalidParameters
from .potential import DEPTH_NAMES, ComplexPotentialParams, Convention, Mode, PotentialParams

_TOP_KEYS = {"mode", "params", "case", "n_max_hint", "eta_policy", "convention", "grid", "outputs"}
_PARAM_KEYS = set(DEPTH_NAMES) | {"q", "alpha"}
_GRID_KEYS = {"points", "half_width"}
_OUTPUT_KEYS = {"figures"}
_ETA_POLICIES = ("AUTO", "BOTH", 1, -1)


@dataclass(frozen=True)
class GridOverrides:
    points: int = 8001
    half_width: float = None


@dataclass(frozen=True)
class RunConfig:
    mode: Mode = Mode.REAL
    params: PotentialParams = field(default_factory=PotentialParams)
    case: SpecialCase = None
    n_max_hint: int = 10
    eta_policy: object = "AUTO"
    convention: Convention = Convention.REDUCED
    grid: GridOverrides = field(default_factory=GridOverrides)
    figures: bool = True

    @property
    def complex_params(self):
        """Mode-substituted parameters (complex modes only)."""
        if self.mode is Mode.REAL:
            raise ConfigError("complex parameters requested in REAL mode")
        return ComplexPotentialParams.substitute(self.params, self.mode)

    def with_grid(self, points=None, half_width=None):
        g = self.grid
        return replace(
            self,
            grid=GridOverrides(
                points=g.points if points is None else _positive_int("grid.points", points, minimum=3),
                half_width=g.half_width if half_width is None else _positive_float("grid.half_width", half_width),
            ),
        )

    def to_dict(self):
        return {
            "mode": self.mode.value,
            "params": self.params.to_dict(),
            "case": None if self.case is None else self.case.value,
            "n_max_hint": self.n_max_hint,
            "eta_policy": self.eta_policy,
            "convention": self.convention.value,
            "grid": {"points": self.grid.points, "half_width": self.grid.half_width},
        }


def _reject_unknown(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"{section} must be a JSON object")
    extra = sorted(set(data) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(extra)}")


def _number(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def _positive_int(name, value, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def _positive_float(name, value):
    value = _number(name, value)
    if not value > 0.0:
        raise ConfigError(f"{name} must be > 0, got {value!r}")
    return value


def parse_eta_policy(value):
    if isinstance(value, str):
        text = value.strip().upper()
        if text in ("AUTO", "BOTH"):
            return text
        try:
            value = int(text)
        except ValueError:
            raise ConfigError(f"eta_policy must be AUTO, BOTH, 1 or -1, got {value!r}") from None
    if value in (1, -1) and not isinstance(value, bool):
        return int(value)
    raise ConfigError(f"eta_policy must be AUTO, BOTH, 1 or -1, got {value!r}")


def config_from_dict(data):
    """Validate a decoded JSON object and build a RunConfig.

    Raises:
        ConfigError: malformed or unknown fields.
        InvalidParameters: the potential parameters violate an invariant.
    """
    _reject_unknown("config", data, _TOP_KEYS)
    try:
        mode = Mode(str(data.get("mode", "REAL")).upper())
    except ValueError:
        raise ConfigError(f"mode must be one of REAL, PT, NONPT, got {data.get('mode')!r}") from None
    params_raw = data.get("params", {})
    _reject_unknown("params", params_raw, _PARAM_KEYS)
    values = {k: _number(f"params.{k}", v) for k, v in params_raw.items()}
    params = PotentialParams(**values)

    case = data.get("case")
    if case is not None:
        try:
            case = SpecialCase(str(case).upper())
        except ValueError:
            names = ", ".join(c.value for c in SpecialCase)
            raise ConfigError(f"case must be one of {names}, got {case!r}") from None

    n_max = _positive_int("n_max_hint", data.get("n_max_hint", 10))
    eta = parse_eta_policy(data.get("eta_policy", "AUTO"))
    try:
        convention = Convention(str(data.get("convention", "reduced")).lower())
    except ValueError:
        raise ConfigError(f"convention must be printed, expanded or reduced, got {data.get('convention')!r}") from None

    grid_raw = data.get("grid", {})
    _reject_unknown("grid", grid_raw, _GRID_KEYS)
    grid = GridOverrides(
        points=_positive_int("grid.points", grid_raw.get("points", 8001), minimum=3),
        half_width=None
        if grid_raw.get("half_width") is None
        else _positive_float("grid.half_width", grid_raw["half_width"]),
    )
    outputs = data.get("outputs", {})
    _reject_unknown("outputs", outputs, _OUTPUT_KEYS)
    figures = outputs.get("figures", True)
    if not isinstance(figures, bool):
        raise ConfigError("outputs.figures must be true or false")
    return RunConfig(
        mode=mode,
        params=params,
        case=case,
        n_max_hint=n_max,
        eta_policy=eta,
        convention=convention,
        grid=grid,
        figures=figures,
    )


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return config_from_dict(data)


def worker_count():
    """Worker cap from NUSPECTRA_THREADS, defaulting to the available CPUs."""
    raw = os.environ.get("NUSPECTRA_THREADS")
    if raw is None or raw.strip() == "":
        return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"NUSPECTRA_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"NUSPECTRA_THREADS must be a positive integer, got {raw!r}")
    return value


__all__ = [
    "ConfigError",
    "GridOverrides",
    "InvalidParameters",
    "RunConfig",
    "config_from_dict",
    "load_config",
    "parse_eta_policy",
    "worker_count",
]
