"""
Command-line entry point ``nls-kato``.

Subcommands::

    ground-state --alpha A [--r-max R --n-points N --tol T]
    validate-potential --config PATH [--theorem NAME]
    evolve --config PATH
    sweep --config PATH [--workers N]
    diagnose --config PATH --trajectory PATH
    decay-test --config PATH
    threshold-case --config PATH

Exit codes: 0 success, 1 runtime failure, 2 validation failure,
64 usage error.
"""

import argparse
import logging
import os
import sys

import numpy as np

from ..exceptions import NLSConfigurationError, NLSDomainError, NLSKatoError
from ..grid import RadialGrid
from ..groundstate import DEFAULT_TOL
from ..potentials import Theorem
from .config import load_config
from .runner import (
    EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_VALIDATION, run_decay_test, run_diagnose,
    run_ground_state, run_single, run_sweep, run_threshold_case, run_validate_potential,
)

logger = logging.getLogger("nlskato.experiments.cli")


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, needs_config: bool = True) -> None:
    if needs_config:
        p.add_argument("--config", required=True, help="experiment config (INI)")
    p.add_argument("--out", default=None, help="override the output directory")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    p.add_argument("-q", "--quiet", action="store_true", help="warnings only")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="nls-kato",
        description="Numerical lab for the 3D intercritical NLS with Kato potentials.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("ground-state", help="solve for Q and write Q.csv, constants.json")
    _common(p, needs_config=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r-max", type=float, default=20.0)
    p.add_argument("--n-points", type=int, default=4096)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--cache-dir", default=None)

    p = sub.add_parser("validate-potential", help="check the potential hypotheses")
    _common(p)
    p.add_argument("--theorem", choices=[t.value for t in Theorem], default=None)

    p = sub.add_parser("evolve", help="run one configuration end to end")
    _common(p)

    p = sub.add_parser("sweep", help="beta sweep; writes dichotomy.csv")
    _common(p)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("diagnose", help="Morawetz suite on a saved trajectory")
    _common(p)
    p.add_argument("--trajectory", required=True)

    p = sub.add_parser("decay-test", help="linear L-infinity decay exponent")
    _common(p)

    p = sub.add_parser("threshold-case", help="evolve data on the energy threshold")
    _common(p)
    return parser


def _configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def _load(args):
    cfg = load_config(args.config)
    if args.out:
        cfg = cfg.with_output_dir(args.out)
    return cfg


def _dispatch(args) -> int:
    if args.command == "ground-state":
        grid = RadialGrid(args.r_max, args.n_points)
        out = args.out or "."
        constants = run_ground_state(args.alpha, grid, args.tol, out, args.cache_dir)
        print(f"Q(0) = {constants['q0']!r}  C_opt = {constants['c_opt']!r}  -> {os.path.abspath(out)}")
        return EXIT_OK

    cfg = _load(args)
    if args.command == "validate-potential":
        theorem = Theorem(args.theorem) if args.theorem else None
        report = run_validate_potential(cfg, theorem)
        for msg in report.messages:
            print(msg)
        print("satisfied" if report.satisfied else "NOT satisfied")
        return EXIT_OK if report.satisfied else EXIT_VALIDATION

    if args.command == "sweep":
        result = run_sweep(cfg, workers=args.workers)
        for row in result.rows:
            print(f"beta={row['beta']:.4g}  {row['verdict']:<17} {row['outcome']:<18} {row['proxy']}")
        if np.isfinite(result.crossing):
            print(f"gradient threshold crossing at beta = {result.crossing:.9f}")
        return result.exit_code

    if args.command == "decay-test":
        result = run_decay_test(cfg)
        print(f"decay exponent {result['exponent']:.4f} (target {result['target']}, "
              f"tol {result['tolerance']})")
        return EXIT_OK

    if args.command == "diagnose":
        summary = run_diagnose(cfg, args.trajectory)
    elif args.command == "threshold-case":
        summary = run_threshold_case(cfg)
    else:
        summary = run_single(cfg)

    if summary.threshold is not None:
        print(f"verdict {summary.threshold.verdict.value}")
    if summary.outcome:
        hint = summary.proxy.verdict_hint.value if summary.proxy else "-"
        print(f"outcome {summary.outcome}, proxy {hint}")
    for row in summary.diagnostics:
        status = ("pass" if row.passed else "FAIL") if row.applicable else "n/a"
        print(f"  {row.name:<17} {status:<4}  {row.detail}")
    if summary.error:
        print(summary.error, file=sys.stderr)
    return summary.exit_code


def main(argv=None) -> int:
    """Parse *argv*, run the subcommand, return the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return _dispatch(args)
    except (NLSDomainError, NLSConfigurationError) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NLSKatoError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
