"""Figures written next to the delimited outputs (PNG, headless backend)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .potential import asymptotic_limits, potential_value  # noqa: E402

_STYLE = {"figure.dpi": 110, "font.size": 9, "axes.grid": True, "grid.alpha": 0.3}


def figure_path(out_path):
    """Sibling path with a .png suffix."""
    return str(out_path.with_suffix(".png")) if hasattr(out_path, "with_suffix") else str(out_path) + ".png"


def plot_spectrum(params, levels, path, convention, half_width):
    """Potential profile with the closed-form levels drawn as horizontal lines."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        xs = np.linspace(-half_width, half_width, 2001)
        v = potential_value(params, xs, convention)
        ax.plot(xs, v, color="k", lw=1.2, label=f"V(x), {convention.value}")
        for lv in levels:
            style = "-" if lv.admissible else ":"
            ax.axhline(lv.E, ls=style, lw=0.9, color="C0" if lv.eta > 0 else "C3")
        window = asymptotic_limits(params, convention)
        lo = min([float(np.min(v))] + [lv.E for lv in levels])
        ax.set_ylim(lo - 0.1 * abs(lo) - 0.1, max(window.v_minus, window.v_plus) + 0.5)
        ax.set_xlabel("x")
        ax.set_ylabel("energy")
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_wavefunction(w, energy, path):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.5))
        ax.plot(w.xs, np.real(w.values), lw=1.0)
        ax.set_xlabel("x")
        ax.set_ylabel("psi(x)")
        ax.set_title(f"E = {energy:.10g}, nodes = {w.nodes}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_verify(report, path):
    """Closed-form versus oracle energies, one marker per level."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for o in report.oracle_levels:
            ax.plot(o.n, o.E_fd, "ks", mfc="none", ms=8)
        for r in report.levels:
            if getattr(r, "E_closed", None) is None:
                continue
            marker = "o" if r.admissible else "x"
            ax.plot(r.n, r.E_closed, marker, color="C0" if r.eta > 0 else "C3", ms=5)
        ax.set_xlabel("n")
        ax.set_ylabel("energy")
        ax.set_title("squares: oracle; o admissible, x flagged (blue eta=+1, red eta=-1)")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_scan(values, max_im, path, name):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.5))
        ax.plot(values, max_im, "o-", ms=3)
        ax.set_xlabel(name)
        ax.set_ylabel("max |Im E|")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
