#!/usr/bin/env python3
"""
conical-ab command line.

Subcommands:
    planes        grid of the pi_-/pi_+ planes over (alpha, beta)
    region        critical channels, boundary channels and alpha_min for one configuration
    scatter       phase shifts and S-matrix elements per channel
    bound         bound state by the bg, ks or shell route
    wavefunction  truncated partial-wave sum on an (r, varphi) grid
    verify        invariant suite (pass/fail table on stderr, report on stdout)

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
"""
import argparse
import logging
import math
import sys
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Sequence

from __version__ import __version__
from bg import ExtensionParam, bound_state_bg, partial_wave_sum, phase_shift_regular, scatter_channel
from config import ConicalABConfig, split_run_file
from console_theme import (
    print_banner,
    print_check_table,
    print_error,
    print_info,
    print_parameter_table,
    print_success,
    print_warning,
)
from error_handling import (
    EXIT_NUMERICAL,
    EXIT_OK,
    ConicalABError,
    IllConditionedError,
    PoleError,
    exit_code_for,
)
from grid_executor import GridExecutor
from input_validation import (
    InputValidator,
    ValidationError,
    parse_int_range,
    parse_range,
    validate_config_dict,
    validate_grid,
    validate_integer,
)
from ks import MatchingVariant, ShellConfig, bound_state_ks, exterior_log_derivative, nu_from_physical
from model import (
    Effect,
    PhysicalConfig,
    alpha_min_for_two_channels,
    boundary_channels,
    channel_beta_windows,
    coupling_lambda,
    critical_channels,
    effective_j,
    planes,
    planes_ab,
    planes_ac,
)
from oracle import RootFindSpec, delta_shell_bound_state, shell_ks_gap
from output_writers import emit, render_csv, render_json
from verification import DEFAULT_SEED, UNITARITY_SAMPLES, InvariantSuite, report_rows

logger = logging.getLogger(__name__)

UNITARITY_TOL = 1e-12
TAIL_WARNING_RATIO = 1e-3

FRIEDRICHS_NAMES = ("friedrichs", "inf", "infinity")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ValidationError (exit code 1)."""

    def error(self, message):
        raise ValidationError(message)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def parse_extension(text: Any) -> ExtensionParam:
    """'friedrichs' (or inf) for the Friedrichs extension, otherwise a finite nu."""
    if isinstance(text, ExtensionParam):
        return text
    raw = str(text).strip().lower()
    if raw in FRIEDRICHS_NAMES:
        return ExtensionParam.friedrichs()
    try:
        nu = float(raw)
    except ValueError:
        raise ValidationError(f"nu must be a real number or 'friedrichs', got {text!r}")
    if not math.isfinite(nu):
        raise ValidationError(f"nu must be finite or 'friedrichs', got {text!r}")
    return ExtensionParam.finite(nu)


def _physical(args, config: ConicalABConfig) -> PhysicalConfig:
    validate_config_dict(vars(args), ["alpha", "phi", "s"])
    values = InputValidator().validate_all(alpha=args.alpha, phi=args.phi, s=args.s,
                                           mass=config.physics.mass, g_factor=config.physics.g_factor)
    return PhysicalConfig(alpha=values["alpha"], phi=values["phi"], s=values["s"],
                          mass=values["mass"], g_factor=values["g_factor"])


def _root_spec(config: ConicalABConfig) -> RootFindSpec:
    rf = config.root_find
    return RootFindSpec(rel_tol=rf.rel_tol, max_iter=rf.max_iter,
                        growth_factor=rf.growth_factor, max_expansions=rf.max_expansions)


def _write_table(args, config: ConicalABConfig, header: Sequence[str], rows: List[Sequence[Any]],
                 key: str):
    if args.format == "json":
        text = render_json({key: [dict(zip(header, row)) for row in rows]}, config.output.units_banner)
    else:
        text = render_csv(header, rows, config.output.units_banner, config.output.significant_digits)
    emit(text, args.output)


def _write_object(args, config: ConicalABConfig, payload: Dict[str, Any]):
    emit(render_json(payload, config.output.units_banner), args.output)


def _executor(args, config: ConicalABConfig) -> GridExecutor:
    return GridExecutor(threads=args.threads, scheduler=config.execution.scheduler)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_planes(args, config: ConicalABConfig) -> int:
    """CSV of the planes over an (alpha, beta) grid, alpha-major."""
    validate_config_dict(vars(args), ["s"])
    values = InputValidator().validate_all(s=args.s, n=args.n)
    effect = Effect(args.effect)
    alphas = validate_grid("alpha", parse_range(args.alpha, "alpha"), 0.0, 1.0, include_lo=False)
    betas = validate_grid("beta", parse_range(args.beta, "beta"), 0.0, 1.0, include_hi=False)
    points = [(a, b) for a in sorted(alphas) for b in sorted(betas)]

    def evaluate(point):
        alpha, beta = point
        return (alpha, beta) + planes(effect, alpha, beta, values["s"], values["n"])

    with _executor(args, config) as executor:
        rows = executor.values(evaluate, points)
    _write_table(args, config, ("alpha", "beta", "pi_minus", "pi_plus"), rows, "planes")
    return EXIT_OK


def _channel_dict(channel, parts, cfg: PhysicalConfig) -> Dict[str, Any]:
    lo, hi = planes_ab(cfg.alpha, parts.beta, cfg.s, parts.n_integer)
    return {"m": channel.m, "j": channel.j, "lam": channel.lam, "pi_minus": lo, "pi_plus": hi}


def cmd_region(args, config: ConicalABConfig) -> int:
    """JSON description of the non-self-adjoint region for one configuration."""
    cfg = _physical(args, config)
    parts = cfg.flux_parts()
    critical = critical_channels(cfg)
    boundary = boundary_channels(cfg)
    for channel in boundary:
        print_info(f"channel m={channel.m} sits on a plane (|j| = 1) and is self-adjoint")

    windows = {}
    for effect in (Effect.AB, Effect.AC):
        windows[effect.value] = [
            {"m": w.m, "beta_lo": w.beta_lo, "beta_hi": w.beta_hi}
            for w in channel_beta_windows(cfg.alpha, cfg.s, parts.n_integer, effect)
        ]

    payload = {
        "alpha": cfg.alpha,
        "phi": cfg.phi,
        "s": cfg.s,
        "n_integer": parts.n_integer,
        "beta": parts.beta,
        "lam": coupling_lambda(cfg),
        "critical_channels": [_channel_dict(c, parts, cfg) for c in critical],
        "boundary_channels": [{"m": c.m, "j": c.j} for c in boundary],
        "planes_ab": list(planes_ab(cfg.alpha, parts.beta, cfg.s, parts.n_integer)),
        "planes_ac": list(planes_ac(cfg.alpha, parts.beta, cfg.s, parts.n_integer)),
        "beta_windows": windows,
        "alpha_min": asdict(alpha_min_for_two_channels(cfg.s)),
        "alpha_min_at_beta": asdict(alpha_min_for_two_channels(cfg.s, parts.beta)),
    }
    _write_object(args, config, payload)
    return EXIT_OK


def cmd_scatter(args, config: ConicalABConfig) -> int:
    """Scattering table; channels where mu_nu has a pole are flagged."""
    cfg = _physical(args, config)
    validate_config_dict(vars(args), ["k"])
    k = InputValidator().validate_all(k=args.k)["k"]
    ext = parse_extension(args.nu)
    ms = parse_int_range(args.m, "m")

    with _executor(args, config) as executor:
        outcomes = executor.map(lambda m: scatter_channel(cfg, m, ext, k), ms)
        summary = executor.errors.get_error_summary()

    rows = []
    for outcome in outcomes:
        if not outcome.ok:
            if not isinstance(outcome.error, PoleError):
                raise outcome.error
            j = effective_j(cfg, outcome.point)
            rows.append((outcome.point, j, phase_shift_regular(outcome.point, j), "pole", "pole", "pole", True))
            continue
        entry = outcome.value
        deviation = abs(abs(entry.s_element) - 1.0)
        if deviation > UNITARITY_TOL:
            raise IllConditionedError(f"|S| deviates from 1 by {deviation:.3e} at m={entry.m}")
        rows.append((entry.m, entry.j, entry.delta_reg, entry.delta_nu,
                     entry.s_element.real, entry.s_element.imag, entry.critical))

    if summary["total_errors"]:
        print_warning(f"{summary['total_errors']} channel(s) sit on a pole of mu_nu at k={k}; "
                      f"their rows are flagged 'pole'")
    _write_table(args, config, ("m", "j", "delta_reg", "delta_nu", "re_s", "im_s", "critical"), rows, "channels")
    return EXIT_OK


def _resolve_channel(args, config: ConicalABConfig):
    """(j, lambda or None) from --j/--lam, or from --alpha/--phi/--s/--m."""
    if args.j is not None:
        return InputValidator().validate_all(j=args.j)["j"], args.lam
    validate_config_dict(vars(args), ["alpha", "phi", "s", "m"])
    cfg = _physical(args, config)
    m = InputValidator().validate_all(m=args.m)["m"]
    lam = args.lam if args.lam is not None else coupling_lambda(cfg)
    return effective_j(cfg, m), lam


def cmd_bound(args, config: ConicalABConfig) -> int:
    """Bound state by the chosen route, as one JSON object."""
    j, lam = _resolve_channel(args, config)
    mass = args.mass if args.mass is not None else config.physics.mass
    mass = InputValidator().validate_all(mass=mass)["mass"]
    matching = MatchingVariant(args.matching)
    payload: Dict[str, Any] = {"method": args.method, "j": j, "mass": mass}

    if args.method == "bg":
        validate_config_dict(vars(args), ["nu"])
        ext = parse_extension(args.nu)
        state = bound_state_bg(ext, j, mass)
        payload.update(nu=ext.nu, scattering_length=ext.scattering_length)
    else:
        validate_config_dict({"lam": lam, "r0": args.r0}, ["lam", "r0"])
        values = InputValidator().validate_all(lam=lam, r0=args.r0)
        shell = ShellConfig(r0=values["r0"], lam=values["lam"])
        payload.update(lam=shell.lam, r0=shell.r0, matching=matching.value,
                       implied_nu=nu_from_physical(shell, j, matching).nu)
        if args.method == "ks":
            state = bound_state_ks(shell, j, mass, matching)
            payload["advisory"] = exterior_log_derivative(j, state.kappa_b, shell.r0).advisory
        else:
            state = delta_shell_bound_state(shell, j, mass, _root_spec(config))
            try:
                comparison = shell_ks_gap(shell, j, mass, matching, _root_spec(config))
                payload.update(kappa_ks=comparison.kappa_ks, relative_gap=comparison.relative_gap)
            except ConicalABError as e:
                logger.warning(f"no KS counterpart to compare against: {e}")
        payload["kappa_r0"] = state.kappa_b * shell.r0

    payload.update(kappa_b=state.kappa_b, energy=state.energy, method_tag=state.method_tag.value)
    if args.verbose:
        print_parameter_table("BOUND STATE", {k: v for k, v in payload.items() if not isinstance(v, dict)})
    _write_object(args, config, payload)
    return EXIT_OK


def cmd_wavefunction(args, config: ConicalABConfig) -> int:
    """Partial-wave sum on an (r, varphi) grid, r-major."""
    cfg = _physical(args, config)
    validate_config_dict(vars(args), ["k", "r"])
    values = InputValidator().validate_all(k=args.k, m_max=args.m_max)
    ext = parse_extension(args.nu)
    radii = validate_grid("r", parse_range(args.r, "r"), 0.0, math.inf, include_lo=False, include_hi=False)
    angles = parse_range(args.varphi, "varphi")
    points = [(r, phi) for r in radii for phi in angles]

    def evaluate(point):
        r, varphi = point
        return partial_wave_sum(cfg, ext, values["k"], r, varphi, values["m_max"])

    with _executor(args, config) as executor:
        results = executor.values(evaluate, points)

    rows, truncated = [], 0
    for (r, varphi), result in zip(points, results):
        magnitude = abs(result.psi)
        if result.tail_estimate > TAIL_WARNING_RATIO * magnitude:
            truncated += 1
        rows.append((r, varphi, result.psi.real, result.psi.imag, magnitude, result.tail_estimate))
    if truncated:
        message = (f"{truncated} grid point(s) have tail_estimate > {TAIL_WARNING_RATIO:g} |psi|; "
                   f"increase --m-max (now {values['m_max']})")
        logger.warning(message)
        print_warning(message)

    _write_table(args, config, ("r", "varphi", "re_psi", "im_psi", "abs_psi", "tail_estimate"), rows, "points")
    return EXIT_OK


def cmd_verify(args, config: ConicalABConfig) -> int:
    """Run the invariant suite; exit 0 iff every check passes."""
    seed = validate_integer("seed", args.seed, minimum=0)
    samples = validate_integer("samples", args.samples, minimum=1)
    if args.verbose:
        print_banner(f"conical-ab {__version__}", "invariant suite")
    suite = InvariantSuite(config, seed=seed, unitarity_samples=samples)
    results = suite.run_all()
    failed = print_check_table(results)
    if suite.errors:
        summary = suite.errors.get_error_summary()
        print_warning(f"{summary['total_errors']} check(s) raised instead of returning; "
                      f"most common: {summary['most_common']}")
    if failed == 0:
        print_success(f"all {len(results)} checks passed")
    _write_table(args, config, ("name", "status", "detail"), report_rows(results), "checks")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


COMMANDS = {
    "planes": cmd_planes,
    "region": cmd_region,
    "scatter": cmd_scatter,
    "bound": cmd_bound,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_physical(parser: argparse.ArgumentParser):
    parser.add_argument('--alpha', type=float, help='Cone parameter, 0 < alpha <= 1')
    parser.add_argument('--phi', type=float, help='Flux in units of the flux quantum')
    parser.add_argument('--s', type=int, help='Spin projection, -1 or +1')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='conical-ab',
                     description='Spin-1/2 Aharonov-Bohm problem on a cone: self-adjoint extensions, '
                                 'scattering and bound states')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', type=str, help='Run file with key = value lines')
    parser.add_argument('--format', choices=['csv', 'json'], help='Output format (default from config)')
    parser.add_argument('--output', '-o', type=str, help='Output file (default: stdout)')
    parser.add_argument('--threads', type=int, help='Worker threads for grid commands')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging and parameter tables')

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    parser.commands = sub.choices
    range_help = ('single value, comma list, or lo:hi:step (hi included only on an exact step '
                  'multiple); write --flag=-1:1 for negative starts')

    p = sub.add_parser('planes', help='Grid of the planes pi_-/pi_+')
    p.add_argument('--effect', choices=['ab', 'ac'], default='ab', help='Plane family')
    p.add_argument('--s', type=int, help='Spin projection, -1 or +1')
    p.add_argument('--n', type=int, default=0, help='Integer part N of the flux')
    p.add_argument('--alpha', type=str, default='0.05:1.0:0.05', help=f'alpha grid ({range_help})')
    p.add_argument('--beta', type=str, default='0:0.95:0.05', help=f'beta grid ({range_help})')

    p = sub.add_parser('region', help='Critical channels and alpha_min')
    _add_physical(p)

    p = sub.add_parser('scatter', help='Phase shifts and S-matrix elements')
    _add_physical(p)
    p.add_argument('--nu', type=str, default='friedrichs', help="Extension parameter or 'friedrichs'")
    p.add_argument('--k', type=float, help='Wave number k > 0')
    p.add_argument('--m', type=str, default='-5:5', help='Channels (lo:hi inclusive or comma list)')

    p = sub.add_parser('bound', help='Bound-state energy')
    p.add_argument('--method', choices=['bg', 'ks', 'shell'], default='bg', help='Route')
    p.add_argument('--j', type=float, help='Effective angular momentum, 0 < |j| < 1')
    _add_physical(p)
    p.add_argument('--m', type=int, help='Channel, used with --alpha/--phi/--s instead of --j')
    p.add_argument('--nu', type=str, help='Extension parameter (bg), nu < 0')
    p.add_argument('--lam', type=float, help='Shell coupling lambda (ks, shell)')
    p.add_argument('--r0', type=float, help='Shell radius r0 > 0 (ks, shell)')
    p.add_argument('--mass', type=float, help='Mass M > 0 (default from config)')
    p.add_argument('--matching', choices=['coupling', 'shell'], default='coupling',
                   help='Interior matching value for ks (lambda or lambda + |j|)')

    p = sub.add_parser('wavefunction', help='Partial-wave sum on an (r, varphi) grid')
    _add_physical(p)
    p.add_argument('--nu', type=str, default='friedrichs', help="Extension parameter or 'friedrichs'")
    p.add_argument('--k', type=float, help='Wave number k > 0')
    p.add_argument('--r', type=str, help=f'Radial grid, r > 0 ({range_help})')
    p.add_argument('--varphi', type=str, default='0', help=f'Angle grid ({range_help})')
    p.add_argument('--m-max', dest='m_max', type=int, default=40, help='Truncation |m| <= m_max')

    p = sub.add_parser('verify', help='Run the invariant suite')
    p.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed of the sampled checks')
    p.add_argument('--samples', type=int, default=UNITARITY_SAMPLES, help='Unitarity samples')

    return parser


def _apply_run_file(parser: argparse.ArgumentParser, command: str, params: Dict[str, str]):
    """Install run-file parameters as defaults, so command-line flags win."""
    subparser = parser.commands[command]
    known = {action.dest for action in subparser._actions} | {action.dest for action in parser._actions}
    unknown = sorted(set(params) - known)
    if unknown:
        raise ValidationError(f"unknown run-file key(s) for {command}: {', '.join(unknown)}")
    subparser.set_defaults(**{k: v for k, v in params.items() if k in {a.dest for a in subparser._actions}})
    parser.set_defaults(**{k: v for k, v in params.items() if k in {a.dest for a in parser._actions}})


def _configure_logging(config: ConicalABConfig, verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, config.logging.level.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=config.logging.format, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        try:
            config, params = split_run_file(args.config)
            config.validate()
        except ValueError as e:
            raise ValidationError(str(e))
        if params:
            _apply_run_file(parser, args.command, params)
            args = parser.parse_args(argv)

        _configure_logging(config, args.verbose)
        logger.debug(f"configuration {config.to_dict()}")
        args.format = args.format or config.output.format
        args.threads = args.threads if args.threads is not None else config.execution.threads
        if args.threads < 1:
            raise ValidationError(f"violated threads >= 1: threads={args.threads}")
        if args.output is not None:
            InputValidator().validate_all(path=args.output)

        logger.debug(f"command {args.command} with {vars(args)}")
        return COMMANDS[args.command](args, config)
    except (ValidationError, ConicalABError, OSError) as e:
        print_error(str(e))
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
