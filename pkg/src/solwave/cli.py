"""Command-line front end.

    solwave wave           closed-form solitary wave profile
    solwave melnikov-scan  M*, M and dM*/dc along a grid of wave speeds
    solwave melnikov-root  persistent wave speed c*(g)
    solwave simulate       reduced slow-manifold flow near c*, with return metrics
    solwave verify         property checks, pass/fail table

Exit codes: 0 success, 1 verification failure, 2 no root, 3 invalid
arguments, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, core, melnikov, persistence, plotting, verify
from .core import ModelParams
from .errors import DegenerateSystem, IntegrationError, InvalidArgument, NoRoot, SolwaveError
from .io import fmt, write_csv
from .slowfast import PerturbationKind

log = logging.getLogger("solwave")

EXIT_OK, EXIT_VERIFY, EXIT_NOROOT, EXIT_ARGS, EXIT_NUMERIC = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SOLWAVE_THREADS", "1")))
    except ValueError:
        return 1


def _wants(args, fmt_name):
    return args.format in (fmt_name, "both")


def _report(pairs):
    for key, value in pairs:
        print(f"{key}={fmt(value) if isinstance(value, float) else value}")


# -- wave -------------------------------------------------------------------


def cmd_wave(args) -> int:
    params = ModelParams(args.c, args.g)
    orbit = core.HomoclinicOrbit(params)
    span = args.span if args.span is not None else 40.0 / orbit.width
    xi = np.linspace(-0.5 * span, 0.5 * span, args.samples)
    phi, y = orbit.phi(xi), orbit.y(xi)
    out = Path(args.out)
    written = []
    if _wants(args, "csv"):
        written.append(write_csv(out / "wave.csv", ("xi", "phi", "y"), zip(xi, phi, y)))
    if _wants(args, "svg"):
        written.append(plotting.line_plot(out / "wave_profile.svg", xi, phi, r"$\xi$", r"$\phi$",
                                          title=f"solitary wave, c={args.c:g}, g={args.g:g}"))
        written.append(plotting.phase_plot(out / "wave_phase.svg", phi, y, saddle=orbit.eq.phi1,
                                           title="homoclinic loop"))
    eq = orbit.eq
    _report([("phi1", eq.phi1), ("phi2", eq.phi2), ("phi_r", eq.phi_r), ("h1", eq.h1), ("width", orbit.width)])
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


# -- melnikov scan ----------------------------------------------------------


def scan_row(kind, c, g):
    if not c > 0 or (c - 1.0) ** 2 + 2.0 * g <= 0:
        return (c, None, None, None)
    p = ModelParams(c, g)
    ev = melnikov.melnikov(kind, p)
    return (c, ev.M_star, ev.M, melnikov.melnikov_dc(kind, p))


def scan_roots(kind, g, rows):
    """Zeros of M* between neighbouring valid samples that change sign."""
    roots = []
    for (c0, m0, *_), (c1, m1, *_) in zip(rows, rows[1:]):
        if m0 is None or m1 is None:
            continue
        if m0 == 0:
            roots.append(c0)
        elif m0 * m1 < 0:
            root, _ = melnikov.bisect_secant(lambda c: melnikov.m_star(kind, c, g), c0, c1)
            roots.append(root)
    if rows and rows[-1][1] == 0:
        roots.append(rows[-1][0])
    return roots


def cmd_melnikov_scan(args) -> int:
    kind = PerturbationKind.parse(args.kind)
    cs = np.linspace(args.c_min, args.c_max, args.samples)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda c: scan_row(kind, float(c), args.g), cs))
    roots = scan_roots(kind, args.g, rows)
    out = Path(args.out)
    if _wants(args, "csv"):
        write_csv(out / "melnikov_scan.csv", ("c", "M_star", "M", "dM_star_dc"), rows)
    if _wants(args, "svg"):
        c = np.array([r[0] for r in rows])
        ms = np.array([np.nan if r[1] is None else r[1] for r in rows])
        m = np.array([np.nan if r[2] is None else r[2] for r in rows])
        tag = kind.value.upper()
        plotting.line_plot(out / "melnikov_mstar.svg", c, ms, "$c$", f"$M^*_{{{tag}}}$",
                           title=f"g = {args.g:g}", markers=roots, zero_line=True)
        plotting.line_plot(out / "melnikov_m.svg", c, m, "$c$", f"$M_{{{tag}}}$",
                           title=f"g = {args.g:g}", markers=roots, zero_line=True)
    _report([("kind", kind.value), ("g", args.g), ("roots", " ".join(fmt(r) for r in roots) or "none")])
    return EXIT_OK


# -- melnikov root ----------------------------------------------------------


def cmd_melnikov_root(args) -> int:
    kind = PerturbationKind.parse(args.kind)
    try:
        res = melnikov.find_c_star(kind, args.g, args.branch)
    except NoRoot as exc:
        print(f"NoZero: {exc}", file=sys.stderr)
        return EXIT_NOROOT
    pairs = [
        ("kind", kind.value), ("g", args.g), ("c_star", res.c_star),
        ("bracket_lo", res.bracket[0]), ("bracket_hi", res.bracket[1]),
        ("iterations", res.iterations), ("residual", res.residual), ("dM_star_dc", res.derivative),
    ]
    _report(pairs)
    if args.out is not None and _wants(args, "csv"):
        write_csv(Path(args.out) / "melnikov_root.csv", [k for k, _ in pairs], [[v for _, v in pairs]])
    return EXIT_OK


# -- simulate ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    kind = PerturbationKind.parse(args.kind)
    if not 0.0 <= args.tau <= 0.1:
        raise InvalidArgument("tau must lie in [0, 0.1]")
    if args.c is not None:
        c = args.c
    else:
        c = melnikov.find_c_star(kind, args.g, args.branch).c_star + args.offset
    params = ModelParams(c, args.g, args.tau)
    metric = persistence.homoclinic_return_metric(kind, params, args.eps0, span=args.span)
    xi, states = persistence.full_orbit(metric)
    out = Path(args.out)
    if _wants(args, "csv"):
        write_csv(out / "phase.csv", ("phi", "y"), states)
        write_csv(out / "history.csv", ("xi", "phi"), zip(xi, states[:, 0]))
    if _wants(args, "svg"):
        orbit = core.HomoclinicOrbit(params)
        ref_xi = np.linspace(-12.0 / orbit.width, 12.0 / orbit.width, 801)
        reference = (orbit.phi(ref_xi), orbit.y(ref_xi))
        title = f"{kind.value.upper()}, g={args.g:g}, c={c:.10g}, tau={args.tau:g}"
        plotting.phase_plot(out / "phase.svg", states[:, 0], states[:, 1], saddle=orbit.eq.phi1,
                            reference=reference, title=title)
        plotting.line_plot(out / "history.svg", xi, states[:, 0], r"$\xi$", r"$\phi$", title=title)
    _report([
        ("kind", kind.value), ("g", args.g), ("c", c), ("tau", args.tau), ("eps0", args.eps0),
        ("min_saddle_distance", metric.min_saddle_distance), ("threshold", metric.threshold),
        ("loop_closure_gap", metric.loop_closure_gap), ("energy_split", metric.energy_split),
        ("near_closed", "yes" if metric.near_closed else "no"),
    ])
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify.run_all(fault=args.inject_fault, seed=args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(results)} checks passed")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _positive_int(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("sample/grid counts must be >= 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solwave", description="Travelling waves and Melnikov speed selection for a delayed RLW model.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, kind=True):
        if kind:
            p.add_argument("--kind", choices=("ks", "me"), default="ks", help="perturbation")
        p.add_argument("--g", type=float, default=0.0, help="integration constant g")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p = sub.add_parser("wave", help="closed-form solitary wave")
    common(p, kind=False)
    p.add_argument("--c", type=float, default=0.5, help="wave speed")
    p.add_argument("--span", type=float, default=None, help="xi window width (default 40/width)")
    p.add_argument("--samples", type=_positive_int, default=801)
    p.set_defaults(func=cmd_wave)

    p = sub.add_parser("melnikov-scan", help="M*, M, dM*/dc over a c grid")
    common(p)
    p.add_argument("--c-min", type=float, default=0.01)
    p.add_argument("--c-max", type=float, default=3.0)
    p.add_argument("--samples", type=_positive_int, default=300)
    p.set_defaults(func=cmd_melnikov_scan)

    p = sub.add_parser("melnikov-root", help="persistent wave speed c*(g)")
    common(p)
    p.set_defaults(out=None)
    p.add_argument("--branch", choices=("low", "high"), default="low")
    p.set_defaults(func=cmd_melnikov_root)

    p = sub.add_parser("simulate", help="reduced flow near c*")
    common(p)
    p.add_argument("--tau", type=float, default=0.01)
    p.add_argument("--c", type=float, default=None, help="override the speed (default c* + offset)")
    p.add_argument("--offset", type=float, default=1e-4)
    p.add_argument("--eps0", type=float, default=1e-4)
    p.add_argument("--span", type=float, default=None, help="xi span per leg (default 4/width)")
    p.add_argument("--branch", choices=("low", "high"), default="low")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the property checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=verify.FAULTS, default=None,
                   help="deliberately break one closed form to exercise the checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InvalidArgument, DegenerateSystem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except NoRoot as exc:
        print(f"NoZero: {exc}", file=sys.stderr)
        return EXIT_NOROOT
    except (IntegrationError, SolwaveError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
