"""Command-line driver: ``drinfeld-torsion {torsion,verify,galois,modular,demo}``.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .torsion import torsion_checks
from .pipeline import SUITES, ConfigError, load_config, make_case, report_json, run

__all__ = ["main", "build_parser"]

_SUBCOMMAND_SUITES = {
    "torsion": ["qn", "torsion"],
    "verify": None,
    "galois": ["galois"],
    "modular": ["modular"],
}


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drinfeld-torsion",
                                     description="p-power torsion of Drinfeld modules from Anderson "
                                                 "generating functions, with identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("torsion", "interpolation polynomials and torsion tables"),
                            ("verify", "run the configured verification suites"),
                            ("galois", "simulated Galois action identities"),
                            ("modular", "lattice-varying AGF values"),
                            ("demo", "Carlitz theta-adic walkthrough")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", default="carlitz-theta" if name == "demo" else None,
                        required=name != "demo", help="config file path or bundled config name")
        if name != "demo":
            sp.add_argument("--suite", help=f"comma-separated suites from {','.join(SUITES)}")
            sp.add_argument("--seed", type=_u64, help="override the config seed")
            sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--precision", type=_positive, help="working precision N")
        sp.add_argument("--trunc", type=_positive, help="AGF truncation length T")
    return parser


def _configure(args):
    cfg = load_config(args.config)
    if args.precision is not None:
        cfg.prec = args.precision
    if args.trunc is not None:
        cfg.trunc = args.trunc
    return cfg


def _summary_lines(report) -> list[str]:
    lines = []
    for section in report["suites"]:
        for rec in section["records"]:
            res = rec.get("worst_residual")
            tail = "" if res is None else f"  residual {res}"
            lines.append(f"{rec['status'].upper():4}  {section['suite']}/{rec['name']}{tail}")
    lines.append(f"verdict: {report['verdict']} ({report['summary']['checks']} checks, "
                 f"{len(report['summary']['failed'])} failed)")
    return lines


def _demo(cfg, out) -> int:
    case = make_case(cfg)
    C = case.C
    print(f"Drinfeld module over F_{C.q}, rank {case.rank}, prime p = {case.p}, levels 0..{case.n}", file=out)
    print(f"working constant field F_{C.q}^{C.m}, precision {C.prec} (+{C.guard} guard digits)", file=out)
    print("\nlattice basis:", file=out)
    for j, z in enumerate(case.lattice.basis, 1):
        print(f"  z_{j} = {z.render(5)}", file=out)
    print("\nmodule coefficients:", file=out)
    for i, g in enumerate(case.phi.g, 1):
        print(f"  g_{i} = {g.render(5)}", file=out)
    case.E.ensure(3)
    print("\nexponential coefficients:", file=out)
    for m in range(4):
        print(f"  e_{m} = {case.E.coeffs[m].render(4)}", file=out)
    print("\nAnderson generating function coefficients:", file=out)
    for j, om in enumerate(case.omegas, 1):
        for i in range(3):
            print(f"  ω_{j}[t^{i}] = {om.coeffs[i].render(4)}", file=out)
    tb = case.table("b")
    ta = case.table("a")
    checks = {tuple(c["key"]): c for c in torsion_checks(tb, case.phi)}
    print("\ntorsion values c_{j,(m),l} (exp route) and checks:", file=out)
    for key in tb.keys():
        c = checks[key]
        print(f"  c{key} = {tb[key].render(4)}", file=out)
        print(f"      AGF-route residual {(tb[key] - ta[key]).val()}, "
              f"φ_(p^(m+1)) image valuation {c['membership_residual']}, "
              f"φ_(p^m) image nonzero: {c['strict']}", file=out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _configure(args)
        if args.command == "demo":
            return _demo(cfg, sys.stdout)
        suites = _SUBCOMMAND_SUITES[args.command]
        if args.suite:
            suites = [s.strip() for s in args.suite.split(",") if s.strip()]
        report = run(cfg, suites=suites, seed=args.seed)
    except ConfigError as exc:
        print(f"drinfeld-torsion: configuration error: {exc}", file=sys.stderr)
        return 2
    text = report_json(report)
    if args.out:
        Path(args.out).write_text(text)
        print("\n".join(_summary_lines(report)))
    else:
        sys.stdout.write(text)
        print("\n".join(_summary_lines(report)), file=sys.stderr)
    return 0 if report["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
