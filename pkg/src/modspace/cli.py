"""``modspace`` command line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import DomainError, ModspaceError, ParameterError, PreconditionError
from .experiments import COMMANDS, ExperimentConfig, ExperimentResult
from .family import FAMILY_SIZE
from .norms import parse_exponent

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _exponent(text: str) -> float:
    try:
        return parse_exponent(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty lambda list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modspace", description="Modulation-space experiments.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=4096, help="grid size (power of two)")
    common.add_argument("--spacing", type=float, default=None, help="grid spacing (default 32/n)")
    common.add_argument("--p", type=_exponent, default=None, help="time exponent, number or 'inf'")
    common.add_argument("--q", type=_exponent, default=None, help="frequency exponent, number or 'inf'")
    common.add_argument("--radius", type=float, default=1.0, help="support radius R")
    common.add_argument("--lambdas", type=_float_list, default=None, help="comma-separated lambda sweep")
    common.add_argument("--window", choices=("gaussian", "plateau"), default="gaussian")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="CSV path; a .dat file is written next to it")
    common.add_argument("--family-size", type=int, default=FAMILY_SIZE,
                        help="number of test functions (0 is rejected)")
    common.add_argument("--full-density", action="store_true", help="evaluate the STFT at every grid point")

    helps = {
        "local-equivalence": "local M^{p,q} vs FL^q bounds on the test family",
        "covariance": "affine covariance identity of the STFT",
        "blowup": "norm growth under chirps or quadratic changes of variables",
        "piecewise": "composition with a piecewise affine map",
        "multiplier": "Fourier multiplier invariants",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "blowup":
            sp.add_argument("--family", dest="blowup_family", choices=("chirp", "quadratic"), default="chirp")
        if name == "piecewise":
            sp.add_argument("--map", dest="piecewise_map", choices=("abs", "identity"), default="abs")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    extra = {}
    if args.lambdas is not None:
        extra["lambdas"] = args.lambdas
    for key in ("blowup_family", "piecewise_map"):
        if hasattr(args, key):
            extra[key] = getattr(args, key)
    return ExperimentConfig(
        command=args.command,
        n=args.n,
        spacing=args.spacing,
        p=args.p,
        q=args.q,
        radius=args.radius,
        window=args.window,
        seed=args.seed,
        out=args.out,
        family_size=args.family_size,
        full_density=args.full_density,
        **extra,
    )


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def render_csv(cfg: ExperimentConfig, result: ExperimentResult) -> str:
    buf = io.StringIO()
    buf.write(f"# {cfg.describe()}\n")
    for note in result.notes:
        buf.write(f"# note: {note}\n")
    cols = result.columns
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in result.rows:
        writer.writerow([_cell(row.get(c, "")) for c in cols])
    return buf.getvalue()


def render_dat(cfg: ExperimentConfig, result: ExperimentResult) -> str:
    """Whitespace-separated numeric columns for gnuplot; one block per row kind."""
    lines = [f"# {cfg.describe()}"]
    kinds: list[str] = []
    for row in result.rows:
        if row["experiment"] not in kinds:
            kinds.append(row["experiment"])
    for block, kind in enumerate(kinds):
        rows = [r for r in result.rows if r["experiment"] == kind]
        cols = [c for c in rows[0] if all(isinstance(r.get(c), (int, float)) for r in rows)]
        if block:
            lines += ["", ""]
        lines.append(f"# {kind}: " + " ".join(cols))
        for r in rows:
            lines.append(" ".join(_cell(float(r[c])) for c in cols))
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        result = COMMANDS[cfg.command](cfg)
    except (ParameterError, PreconditionError, DomainError) as exc:
        print(f"modspace {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModspaceError as exc:
        print(f"modspace {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    text = render_csv(cfg, result)
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        out.with_suffix(".dat").write_text(render_dat(cfg, result))
    else:
        sys.stdout.write(text)
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
