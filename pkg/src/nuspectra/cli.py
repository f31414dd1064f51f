"""Command-line front end.

Exit status: 0 on success, 2 on configuration errors, 3 on numerical
failures. Failures print ``error: <ErrorName>: <message>`` on stderr.
"""

import argparse
import csv
import io
import re
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, nu
from .closed_form import enumerate_bound_states, special_case_energy
from .config import load_config, worker_count
from .errors import ConfigError, InvalidParameters, LevelNotFound, NuSpectraError
from .oracle import Grid, fd_levels, numerov_shoot
from .potential import Mode, OutsideClosedFormDomain, asymptotic_limits, potential_value, warn_if_outside_domain
from .report import build_complex_report, build_verify_report, complex_levels, dumps, oracle_grid, parallel_map
from .wavefunctions import closed_form_wavefunction, default_half_width

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_BUILTINS = {
    "harmonic": (lambda x: x * x, 20.0, 12.0),
    "reflectionless": (lambda x: -2.0 / np.cosh(x) ** 2, 20.0, 0.0),
}


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def _png(out):
    return Path(out).with_suffix(".png")


def _split_complex(e):
    e = complex(e)
    return e.real, e.imag


def _spectrum_levels(cfg):
    if cfg.case is not None:
        eta = 1 if cfg.eta_policy in ("AUTO", "BOTH") else cfg.eta_policy
        return [special_case_energy(cfg.case, cfg.params, n, eta) for n in range(cfg.n_max_hint + 1)]
    if cfg.mode is Mode.REAL:
        return enumerate_bound_states(cfg.params, cfg.eta_policy, cfg.convention)
    return complex_levels(cfg)


def cmd_spectrum(args):
    cfg = load_config(args.config)
    warn_if_outside_domain(cfg.params)
    levels = _spectrum_levels(cfg)
    rows = []
    for lv in levels:
        re_e, im_e = _split_complex(lv.E)
        rows.append([lv.n, lv.eta, re_e, im_e, lv.admissible, ";".join(lv.reasons), lv.formula])
    _write_csv(args.out, ["n", "eta", "E", "E_imag", "admissible", "reasons", "formula"], rows)
    if cfg.figures and cfg.mode is Mode.REAL and cfg.case is None:
        from .plotting import plot_spectrum

        plot_spectrum(cfg.params, levels, _png(args.out), cfg.convention, default_half_width(cfg.params) / 4.0)
    return EXIT_OK


def cmd_verify(args):
    cfg = load_config(args.config).with_grid(args.grid_points, args.half_width)
    warn_if_outside_domain(cfg.params)
    workers = worker_count()
    if cfg.mode is Mode.REAL:
        report = build_verify_report(cfg, workers)
    else:
        report = build_complex_report(cfg, workers)
    Path(args.out).write_text(report.to_json(), encoding="utf-8")
    if cfg.figures:
        from .plotting import plot_verify

        plot_verify(report, _png(args.out))
    return EXIT_OK


def cmd_wavefunction(args):
    cfg = load_config(args.config)
    if cfg.mode is not Mode.REAL:
        raise ConfigError("wavefunction needs mode REAL")
    levels = [lv for lv in enumerate_bound_states(cfg.params, cfg.eta_policy, cfg.convention) if lv.n == args.level]
    if not levels:
        raise LevelNotFound(f"no admissible closed-form level n={args.level}")
    level = levels[0]
    half = cfg.grid.half_width if cfg.grid.half_width is not None else default_half_width(cfg.params)
    xs = np.linspace(-half, half, cfg.grid.points)
    w = closed_form_wavefunction(cfg.params, level, xs)
    lines = [f"# n={level.n} eta={level.eta} E={level.E!r} nodes={w.nodes}", "# x psi"]
    lines += [f"{x!r} {float(np.real(v))!r}" for x, v in zip(w.xs.tolist(), w.values.tolist())]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if cfg.figures:
        from .plotting import plot_wavefunction

        plot_wavefunction(w, level.E, _png(args.out))
    return EXIT_OK


_TERM = re.compile(r"^\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(q(?:\^2)?)?\s*$")


def parse_coefficients(text, q):
    """Comma list of ascending coefficients; a term may carry a q or q^2 factor.

    Accepted terms look like ``1``, ``-0.5``, ``q``, ``-q``, ``2q``, ``3*q^2``.
    """
    out = []
    for item in text.split(","):
        m = _TERM.match(item)
        if m is None or (m.group(2) is None and m.group(3) is None):
            raise ConfigError(f"cannot parse coefficient {item!r}")
        sign, num, sym = m.groups()
        value = float(num) if num is not None else 1.0
        if sign == "-":
            value = -value
        if sym == "q":
            value *= q
        elif sym == "q^2":
            value *= q * q
        out.append(value)
    return out


def parse_range(text):
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if m is None:
        raise ConfigError(f"--n expects N or A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise ConfigError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def cmd_nu_solve(args):
    sigma = nu.poly(*parse_coefficients(args.sigma, args.q))
    sigma_tilde = nu.poly(*parse_coefficients(args.sigma_tilde, args.q))
    tau_tilde = nu.poly(*parse_coefficients(args.tau_tilde, args.q))
    try:
        ode = nu.HypergeometricODE(sigma, sigma_tilde, tau_tilde)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ns = parse_range(args.n)
    branches = nu.pi_branches(ode)

    def describe(br):
        item = {
            "k": br.k,
            "sqrt_sign": br.sqrt_sign,
            "pi": [float(c) for c in br.pi.coef],
            "tau": [float(c) for c in br.tau.coef],
            "tau_slope": br.tau_slope,
            "lambda": nu.lambda_of(br),
        }
        try:
            w = nu.pearson_weight(br, ode.sigma)
            phi = nu.phi_factor(br, ode.sigma)
            item["weight_exponents"] = [w.A, w.B]
            item["phi_exponents"] = [phi.A, phi.B]
        except NuSpectraError:
            item["weight_exponents"] = None
            item["phi_exponents"] = None
        return item

    out = {"branches": [describe(br) for br in branches]}
    try:
        chosen = nu.select_branch(branches, ode.sigma)
        out["selected"] = describe(chosen)
        out["lambda_n"] = {str(n): nu.lambda_n(chosen, ode.sigma, n) for n in ns}
    except NuSpectraError as exc:
        out["selected"] = None
        out["selection_error"] = type(exc).__name__
    text = dumps(out)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def parse_sweep(text):
    m = re.fullmatch(r"\s*(V[1-6]|q|alpha)\s*=\s*([^:]+):([^:]+):([^:]+)\s*", text)
    if m is None:
        raise ConfigError(f"--sweep expects NAME=start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(m.group(i)) for i in (2, 3, 4))
    except ValueError:
        raise ConfigError(f"--sweep bounds must be numbers, got {text!r}") from None
    if step <= 0.0 or stop < start:
        raise ConfigError("--sweep needs step > 0 and stop >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return m.group(1), [start + i * step for i in range(count)]


def _scan_task(args):
    cfg, name, value = args
    try:
        point = replace(cfg, params=cfg.params.replace(**{name: value}))
        levels = complex_levels(point)
    except NuSpectraError:
        return value, None, 0, 0
    ims = [abs(complex(lv.E).imag) for lv in levels]
    n_real = sum(1 for lv in levels if lv.is_real)
    return value, max(ims, default=0.0), len(levels), n_real


def cmd_pt_scan(args):
    cfg = load_config(args.config)
    if cfg.mode is Mode.REAL:
        raise ConfigError("pt-scan needs mode PT or NONPT")
    name, values = parse_sweep(args.sweep)
    rows = parallel_map(_scan_task, [(cfg, name, v) for v in values], worker_count())
    _write_csv(args.out, [name, "max_abs_im_E", "n_levels", "n_real"], rows)
    if cfg.figures:
        from .plotting import plot_scan

        ok = [(r[0], r[1]) for r in rows if r[1] is not None]
        plot_scan([a for a, _ in ok], [b for _, b in ok], _png(args.out), name)
    return EXIT_OK


def cmd_oracle(args):
    if args.builtin:
        v, half, e_max = _BUILTINS[args.builtin]
        grid = Grid.symmetric(args.half_width or half, args.grid_points or 8001)
    else:
        if not args.config:
            raise ConfigError("oracle needs --config or --builtin")
        cfg = load_config(args.config)
        if cfg.mode is not Mode.REAL:
            raise ConfigError("oracle needs mode REAL")
        p, conv = cfg.params, cfg.convention
        grid = oracle_grid(p, args.grid_points or cfg.grid.points, args.half_width or cfg.grid.half_width)
        e_max = asymptotic_limits(p, conv).e_max

        def v(x):
            return potential_value(p, x, conv)

    if args.e_max is not None:
        e_max = args.e_max
    fd = fd_levels(v, grid, e_max)
    rows = []
    for n, e in enumerate(fd):
        try:
            en = numerov_shoot(v, grid, n, e_max)
        except NuSpectraError:
            en = None
        rows.append([n, e, en, None if en is None else abs(e - en)])
    _write_csv(args.out, ["n", "E_fd", "E_numerov", "abs_diff"], rows)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="nuspectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nuspectra {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="closed-form bound-state spectrum as CSV")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_spectrum)

    vp = sub.add_parser("verify", help="closed forms against the numerical oracles (JSON report)")
    vp.add_argument("--config", required=True)
    vp.add_argument("--out", required=True)
    vp.add_argument("--grid-points", type=int, default=None)
    vp.add_argument("--half-width", type=float, default=None)
    vp.set_defaults(func=cmd_verify)

    wp = sub.add_parser("wavefunction", help="normalized closed-form eigenfunction (x, psi columns)")
    wp.add_argument("--config", required=True)
    wp.add_argument("--level", type=int, required=True)
    wp.add_argument("--out", required=True)
    wp.set_defaults(func=cmd_wavefunction)

    np_ = sub.add_parser("nu-solve", help="generic NU solver for a raw (sigma, sigma~, tau~) triple")
    np_.add_argument("--sigma", required=True, help='ascending coefficients, e.g. "0,1,-q"')
    np_.add_argument("--sigma-tilde", required=True)
    np_.add_argument("--tau-tilde", required=True)
    np_.add_argument("--n", default="0..5", help="level range, e.g. 0..5")
    np_.add_argument("--q", type=float, default=1.0, help="value substituted for the symbol q")
    np_.add_argument("--out", default=None)
    np_.set_defaults(func=cmd_nu_solve)

    pp = sub.add_parser("pt-scan", help="sweep one parameter, record max |Im E| per point")
    pp.add_argument("--config", required=True)
    pp.add_argument("--sweep", required=True, help="NAME=start:stop:step, e.g. V1=0:2:0.05")
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=cmd_pt_scan)

    op = sub.add_parser("oracle", help="numerical spectrum only (FD with Richardson, Numerov)")
    src = op.add_mutually_exclusive_group()
    src.add_argument("--config")
    src.add_argument("--builtin", choices=sorted(_BUILTINS))
    op.add_argument("--out", required=True)
    op.add_argument("--grid-points", type=int, default=None)
    op.add_argument("--half-width", type=float, default=None)
    op.add_argument("--e-max", type=float, default=None)
    op.set_defaults(func=cmd_oracle)
    return parser


_VALUE_OPTIONS = ("--sigma", "--sigma-tilde", "--tau-tilde", "--sweep")


def _join_option_values(argv):
    # coefficient lists such as "-0.25,1,q" start with a dash; bind them to their option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_join_option_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", OutsideClosedFormDomain)
            return args.func(args)
    except (ConfigError, InvalidParameters) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NuSpectraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "build_parser", "parse_coefficients", "parse_range", "parse_sweep"]
