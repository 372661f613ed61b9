"""Command-line workflows: transform, verify and bench.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid parameters,
3 verification mismatch.
"""

import argparse
import logging
import re
import sys
from pathlib import Path

import numpy as np

from quaddt.bench import (
    BENCH_KERNELS,
    DEFAULT_REPS,
    DEFAULT_SIZES,
    mean_avg_inner,
    predicted_avg_inner,
    run_bench,
    write_bench_csv,
)
from quaddt.errors import (
    InputError,
    InvalidParameterError,
    LaneError,
    NumericalDegeneracyError,
    OracleSizeError,
    ParseError,
)
from quaddt.generators import DISTRIBUTIONS
from quaddt.grid_io import load_grid, save_grid
from quaddt.models import AxisParams, Sense, TransformSpec
from quaddt.oracle import DEFAULT_MAX_POINTS
from quaddt.transform import dt_nd
from quaddt.verify import DEFAULT_TOLERANCE, random_cases, verify_case

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARAMS = 2
EXIT_MISMATCH = 3

LIST_FLAGS = ("--alpha", "--beta", "--axis-order")
_NEGATIVE_LIST = re.compile(r"-[\d.]")

PARAM_ERRORS = (InvalidParameterError, InputError, LaneError, NumericalDegeneracyError, OracleSizeError)


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise InvalidParameterError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise InvalidParameterError(f"{flag}: expected comma-separated integers, got {text!r}") from None


def spec_from_args(args: argparse.Namespace, rank: int, *, want_argmax: bool = False) -> TransformSpec:
    """Build a TransformSpec from --mode/--alpha/--beta/--axis-order."""
    if args.mode is None or args.alpha is None:
        raise InvalidParameterError("--mode and --alpha are required")
    alphas = _float_list(args.alpha, "--alpha")
    betas = _float_list(args.beta, "--beta") if args.beta else [0.0] * len(alphas)
    if len(alphas) != rank:
        raise InvalidParameterError(f"--alpha: grid has rank {rank}, got {len(alphas)} value(s)")
    if len(betas) != rank:
        raise InvalidParameterError(f"--beta: grid has rank {rank}, got {len(betas)} value(s)")
    for axis, alpha in enumerate(alphas):
        if alpha == 0:
            raise InvalidParameterError(f"--alpha: value for axis {axis} must be non-zero")
    order = _int_list(args.axis_order, "--axis-order") if args.axis_order else None
    return TransformSpec(
        sense=Sense(args.mode),
        axes=tuple(AxisParams(a, b) for a, b in zip(alphas, betas)),
        axis_order=None if order is None else tuple(order),
        want_argmax=want_argmax,
    )


def _read_input(path: Path):
    try:
        return load_grid(path)
    except OSError as exc:
        _error(f"cannot read {path}: {exc}")
    except ParseError as exc:
        _error(f"{path}: {exc}")
    return None


def _save_all(outputs: list[tuple[np.ndarray, Path]]):
    """Write every (grid, path) pair, or remove the ones already written and re-raise."""
    written: list[Path] = []
    try:
        for grid, path in outputs:
            save_grid(grid, path)
            written.append(path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise


def cmd_transform(args: argparse.Namespace) -> int:
    grid = _read_input(args.input)
    if grid is None:
        return EXIT_IO
    try:
        spec = spec_from_args(args, grid.ndim, want_argmax=args.argmax is not None)
        result = dt_nd(grid, spec, threads=args.threads)
    except PARAM_ERRORS as exc:
        _error(str(exc))
        return EXIT_PARAMS

    outputs = [(result.values, args.output)]
    if args.argmax is not None:
        outputs += [(coords, Path(f"{args.argmax}.axis{axis}")) for axis, coords in enumerate(result.argmax)]
    try:
        _save_all(outputs)
    except OSError as exc:
        _error(f"cannot write output: {exc}")
        return EXIT_IO
    except InvalidParameterError as exc:
        _error(str(exc))
        return EXIT_PARAMS
    logger.info("transformed grid %s, %d inner iterations", result.values.shape, result.stats.inner_iterations)
    return EXIT_OK


def _parse_random(text: str) -> tuple[int, int, int, int]:
    parts = _int_list(text, "--random")
    if len(parts) != 4:
        raise InvalidParameterError(f"--random: expected count,maxrank,maxextent,seed, got {text!r}")
    count, max_rank, max_extent, seed = parts
    if count < 1 or max_rank < 1 or max_extent < 1:
        raise InvalidParameterError(f"--random: count, maxrank and maxextent must be positive, got {text!r}")
    return count, max_rank, max_extent, seed


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        if args.random is not None:
            cases = random_cases(*_parse_random(args.random))
        elif args.input is not None:
            grid = _read_input(args.input)
            if grid is None:
                return EXIT_IO
            cases = [(grid, spec_from_args(args, grid.ndim))]
        else:
            raise InvalidParameterError("verify needs --input or --random")

        count = 0
        max_err = 0.0
        first_failure = None
        for index, (grid, spec) in enumerate(cases):
            report = verify_case(
                grid,
                spec,
                index=index,
                tolerance=args.tolerance,
                max_points=args.max_points,
                threads=args.threads,
            )
            print(report.describe())
            count += 1
            max_err = max(max_err, report.max_abs_err)
            if not report.passed and first_failure is None:
                first_failure = report
    except PARAM_ERRORS as exc:
        _error(str(exc))
        return EXIT_PARAMS

    print(f"verified {count} cases, max-abs-err {max_err:.3e}")
    if first_failure is not None:
        coord, kernel_value, oracle_value = first_failure.failure
        _error(
            f"case {first_failure.index} first mismatch at {coord}: "
            f"kernel {kernel_value!r}, oracle {oracle_value!r}"
        )
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if args.threads > 1:
        logger.warning("bench times one lane at a time; --threads %d has no effect", args.threads)
    try:
        sizes = _int_list(args.sizes, "--sizes")
        records = run_bench(
            sizes,
            args.dist,
            args.seed,
            args.reps,
            kernel=args.kernel,
            params=AxisParams(args.alpha, args.beta),
        )
    except PARAM_ERRORS as exc:
        _error(str(exc))
        return EXIT_PARAMS

    if args.output is None:
        write_bench_csv(records, sys.stdout)
        return EXIT_OK
    try:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        with open(args.output, "w", newline="") as f:
            write_bench_csv(records, f)
    except OSError as exc:
        _error(f"cannot write {args.output}: {exc}")
        return EXIT_IO

    for n, measured in mean_avg_inner(records).items():
        print(f"n={n}: avg_inner {measured:.4f} (model {predicted_avg_inner(n):.4f})")
    print(f"{len(records)} rows written to {args.output}")
    return EXIT_OK


def _add_transform_flags(parser: argparse.ArgumentParser, required: bool):
    parser.add_argument("--mode", choices=[s.value for s in Sense], required=required, help="minimize or maximize")
    parser.add_argument("--alpha", required=required, help="quadratic coefficient per axis, comma-separated")
    parser.add_argument("--beta", help="linear coefficient per axis, comma-separated (default zeros)")
    parser.add_argument("--axis-order", help="order in which axes are processed, comma-separated")
    parser.add_argument("--threads", type=int, default=1, help="worker threads per axis pass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quaddt", description="Quadratic minimum/maximum distance transforms")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    transform = commands.add_parser("transform", help="transform a grid file")
    transform.add_argument("--input", type=Path, required=True, help="tensor file, or .csv for rank 2")
    transform.add_argument("--output", type=Path, required=True, help="where to write the result")
    transform.add_argument("--argmax", help="write per-axis optimizer coordinates to PATH.axis<k>")
    _add_transform_flags(transform, required=True)
    transform.set_defaults(handler=cmd_transform)

    verify = commands.add_parser("verify", help="check the kernels against the brute-force oracle")
    verify.add_argument("--input", type=Path, help="grid file to verify")
    verify.add_argument("--random", help="count,maxrank,maxextent,seed for generated cases")
    verify.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE, help="relative tolerance")
    verify.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS, help="oracle size cap")
    _add_transform_flags(verify, required=False)
    verify.set_defaults(handler=cmd_verify)

    bench = commands.add_parser("bench", help="measure inner-loop work and wall time")
    bench.add_argument("--sizes", default=",".join(str(n) for n in DEFAULT_SIZES), help="lane lengths, comma-separated")
    bench.add_argument("--dist", choices=sorted(DISTRIBUTIONS), default="uniform", help="input generator")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--reps", type=int, default=DEFAULT_REPS)
    bench.add_argument("--output", type=Path, help="CSV file (default stdout)")
    bench.add_argument("--kernel", choices=sorted(BENCH_KERNELS), default="upper")
    bench.add_argument("--alpha", type=float, default=1.0)
    bench.add_argument("--beta", type=float, default=0.0)
    bench.add_argument("--threads", type=int, default=1, help="kept at 1 for single-threaded timing")
    bench.set_defaults(handler=cmd_bench)
    return parser


def join_list_flags(argv: list[str]) -> list[str]:
    """Rewrite ``--alpha -1,2`` as ``--alpha=-1,2`` so comma lists may start with a minus."""
    joined = []
    tokens = iter(argv)
    for token in tokens:
        if token in LIST_FLAGS:
            value = next(tokens, None)
            if value is not None and _NEGATIVE_LIST.match(value):
                joined.append(f"{token}={value}")
                continue
            joined.append(token)
            if value is not None:
                joined.append(value)
            continue
        joined.append(token)
    return joined


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    if argv is None:
        argv = sys.argv[1:]
    return build_parser().parse_args(join_list_flags(list(argv)))


def run(argv: list[str] | None = None) -> int:
    """Parse argv and run the chosen command; returns the exit code."""
    args = parse_args(argv)
    return args.handler(args)
