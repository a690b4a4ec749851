"""Command-line client for the verification services.

The CLI is a thin layer over the same handlers the HTTP API calls: it parses
flags into a RunConfig, runs the command in-process, and serializes the
report.  Exit status is 0 when every check passes (the contrast command's
demonstrated contradiction is the expected result, not a failure), 1 when a
proposition check fails or the report cannot be written, and 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import BlochViolationError, NumericFailureError, SpectrumViolationError
from .schemas import (
    ContrastEnvelope,
    GridSpec,
    LemmaEnvelope,
    RunOptions,
    SuiteEnvelope,
    VerificationEnvelope,
    emit_report,
)
from .service import run_all, run_contrast, run_lemma_check, run_verify_hv, run_verify_quantum

SEED_ENV_VAR = "NOGO_SEED"

_COMMANDS = {
    "verify-quantum": run_verify_quantum,
    "verify-hv": run_verify_hv,
    "contrast": run_contrast,
    "lemma-check": run_lemma_check,
    "all": run_all,
}


def _parse_state(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return (x, y, z)


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected NP,NA integers, got {text!r}")
    try:
        n_polar, n_azimuthal = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NP,NA integers, got {text!r}")
    return (n_polar, n_azimuthal)


def _default_seed(parser: argparse.ArgumentParser) -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        parser.error(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincontrast",
        description=(
            "Compare the direction-integrated squared spin expectation of a "
            "qubit state (capped at 4*pi/3) against classical outcome models "
            "(capped at 4*pi)."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--state",
        type=_parse_state,
        default=(0.0, 0.0, 1.0),
        metavar="X,Y,Z",
        help="Bloch vector of the state (default 0,0,1)",
    )
    common.add_argument(
        "--model",
        choices=("ks", "deterministic", "custom-file"),
        default="deterministic",
        help="outcome model: the sign model, the hemisphere-sign dispersion-free "
        "model, or a finite model loaded from --model-file",
    )
    common.add_argument(
        "--model-file",
        metavar="PATH",
        help="JSON model file, required with --model custom-file",
    )
    common.add_argument(
        "--grid",
        type=_parse_grid,
        default=(8, 16),
        metavar="NP,NA",
        help="polar x azimuthal quadrature sizes (default 8,16)",
    )
    common.add_argument(
        "--samples",
        type=int,
        default=1_000_000,
        metavar="N",
        help="sample budget per estimated expectation (default 1000000)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        metavar="S",
        help=f"random seed (default: ${SEED_ENV_VAR} if set, else 42)",
    )
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default="text",
        help="report format (default text)",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser(
        "verify-quantum", parents=[common], help="check the quantum-side invariants"
    )
    subparsers.add_parser(
        "verify-hv", parents=[common], help="check an outcome model against the quantum statistics"
    )
    subparsers.add_parser(
        "contrast", parents=[common], help="compute both contrast values and the joint verdict"
    )
    subparsers.add_parser(
        "lemma-check", parents=[common], help="finite-space expectation identity over random spaces"
    )
    subparsers.add_parser("all", parents=[common], help="run every suite")
    return parser


def _exit_status(envelope) -> int:
    if isinstance(envelope, ContrastEnvelope):
        return 0  # the demonstrated contradiction is the expected outcome
    if isinstance(envelope, (VerificationEnvelope, LemmaEnvelope, SuiteEnvelope)):
        return 0 if envelope.results.passed else 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    seed = args.seed if args.seed is not None else _default_seed(parser)
    if seed < 0:
        parser.error("--seed must be nonnegative")
    if args.samples < 1:
        parser.error("--samples must be at least 1")
    if args.model == "custom-file" and not args.model_file:
        parser.error("--model custom-file requires --model-file PATH")

    try:
        options = RunOptions(
            state=args.state,
            model=args.model,
            model_file=args.model_file,
            grid=GridSpec(n_polar=args.grid[0], n_azimuthal=args.grid[1]),
            samples=args.samples,
            seed=seed,
        )
        envelope = _COMMANDS[args.command](options)
    except FileNotFoundError as exc:
        print(f"spincontrast: cannot read model file: {exc}", file=sys.stderr)
        return 1
    except (BlochViolationError, SpectrumViolationError, ValueError) as exc:
        parser.error(str(exc))
    except NumericFailureError as exc:
        print(f"spincontrast: numeric failure: {exc}", file=sys.stderr)
        return 1

    payload = emit_report(envelope, args.format)
    if args.output:
        try:
            Path(args.output).write_bytes(payload)
        except OSError as exc:
            print(f"spincontrast: cannot write {args.output}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return _exit_status(envelope)


if __name__ == "__main__":
    raise SystemExit(main())
