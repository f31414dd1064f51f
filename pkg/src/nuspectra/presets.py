"""Documented parameter sets of the combined potential used by verification runs.

Each set switches on all six terms and holds at least two bound states of
the reduced-convention potential on the default grid.
"""

from .potential import PotentialParams

COMBINED_PRESETS = {
    "combined_a": PotentialParams(V1=1.0, V2=0.5, V3=6.0, V4=0.5, V5=0.3, V6=2.0, q=1.0, alpha=1.0),
    "combined_b": PotentialParams(V1=2.0, V2=1.0, V3=10.0, V4=1.0, V5=0.5, V6=4.0, q=2.0, alpha=0.8),
    "combined_c": PotentialParams(V1=-1.5, V2=0.8, V3=8.0, V4=-0.7, V5=0.4, V6=3.0, q=1.5, alpha=1.2),
}

REFLECTIONLESS = PotentialParams(V3=2.0, q=1.0, alpha=1.0)


def preset_config(name):
    """JSON-ready config dict for a named preset."""
    p = COMBINED_PRESETS[name]
    return {"mode": "REAL", "params": p.to_dict(), "eta_policy": "AUTO", "n_max_hint": 6}
