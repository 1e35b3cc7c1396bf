"""``zetagap`` command line: scan, verify, report, constants."""

from __future__ import annotations

import argparse
import sys

from . import pipeline, theoremlab
from .config import UsageError, resolve_config
from .errors import NoRootError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(pipeline.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--sigma-max", type=float)
    p.add_argument("--tol", type=float, help="absolute tolerance for zeta evaluations")
    p.add_argument("--threads", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zetagap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _run_flags(sub.add_parser("scan", help="locate zeros, pair zeta' zeros with ordinates"))
    v = sub.add_parser("verify", help="run a numerical verification suite")
    v.add_argument("suite", choices=pipeline.SUITES + ("all",))
    _run_flags(v)
    r = sub.add_parser("report", help="summarize a scan directory")
    r.add_argument("scan_dir")
    c = sub.add_parser("constants", help="solve for c0 and the implied constant")
    c.add_argument("--A", type=float, default=0.25)
    c.add_argument("--epsilon", type=float, default=0.0)
    return parser


def _config(args):
    overrides = {"t_min": args.t_min, "t_max": args.t_max, "sigma_max": args.sigma_max,
                 "abs_tol": args.tol, "threads": args.threads, "seed": args.seed,
                 "output_format": args.format, "out": args.out}
    return resolve_config(args.config, overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report":
        return pipeline.run_report(args.scan_dir)
    if args.command == "constants":
        if not (args.A > 0 and args.epsilon >= 0):
            print("constants: need A > 0 and epsilon >= 0", file=sys.stderr)
            return pipeline.EXIT_USAGE
        try:
            sol = theoremlab.solve_c0(args.A, args.epsilon)
        except NoRootError as exc:
            print(f"constants: {exc}", file=sys.stderr)
            return pipeline.EXIT_VERIFY
        print(f"c0 = {sol.c0!r}")
        print(f"implied_constant = {sol.implied_constant!r}")
        print(f"residual = {sol.residual!r}")
        return pipeline.EXIT_OK
    try:
        cfg = _config(args)
    except UsageError as exc:
        print(f"zetagap: {exc}", file=sys.stderr)
        return pipeline.EXIT_USAGE
    if args.command == "scan":
        return pipeline.run_scan(cfg)
    return pipeline.run_verify(cfg, args.suite)


if __name__ == "__main__":
    sys.exit(main())
