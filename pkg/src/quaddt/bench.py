"""Inner-loop and wall-clock measurements of the envelope kernels.

The average-case model for the upper-envelope kernel predicts 3N/(N+2) inner
iterations per new grid point; bench reports the measured figure next to it.
"""

import csv
import logging
import time
from collections.abc import Iterable, Sequence
from statistics import fmean
from typing import TextIO

import numpy as np

from quaddt.envelope import (
    build_lower_envelope,
    build_upper_envelope,
    sample_envelope,
    sample_lower_envelope,
)
from quaddt.errors import InvalidParameterError
from quaddt.generators import DISTRIBUTIONS, lane_rng
from quaddt.models import AxisParams, BenchRecord, EnvelopeStats

logger = logging.getLogger(__name__)

CSV_HEADER = ["n", "dist", "seed", "rep", "wall_time_s", "inner_iterations", "avg_inner"]
DEFAULT_SIZES = (1024, 4096, 16384, 65536)
DEFAULT_REPS = 3

BENCH_KERNELS = {
    "upper": (build_upper_envelope, sample_envelope),
    "lower": (build_lower_envelope, sample_lower_envelope),
}


def predicted_avg_inner(n: int) -> float:
    """Average inner iterations per grid point under the uniform tree model."""
    return 3 * n / (n + 2)


def time_kernel(
    lane: np.ndarray,
    params: AxisParams,
    kernel: str = "upper",
) -> tuple[float, EnvelopeStats]:
    """Build and sample one envelope; returns (seconds, stats)."""
    build, sample = BENCH_KERNELS[kernel]
    values = lane.tolist()
    started = time.perf_counter()
    envelope, stats = build(values, params)
    sample(envelope, values, params)
    return time.perf_counter() - started, stats


def run_bench(
    sizes: Sequence[int],
    dist: str,
    seed: int,
    reps: int = DEFAULT_REPS,
    *,
    kernel: str = "upper",
    params: AxisParams = AxisParams(1.0, 0.0),
) -> list[BenchRecord]:
    """One record per (size, repetition), sizes in the order given."""
    if dist not in DISTRIBUTIONS:
        raise InvalidParameterError(f"unknown distribution {dist!r}; choose from {sorted(DISTRIBUTIONS)}")
    if kernel not in BENCH_KERNELS:
        raise InvalidParameterError(f"unknown kernel {kernel!r}; choose from {sorted(BENCH_KERNELS)}")
    if reps < 1:
        raise InvalidParameterError(f"reps must be at least 1, got {reps}")
    for n in sizes:
        if n < 2:
            raise InvalidParameterError(f"bench needs lanes of at least 2 points, got {n}")

    generate = DISTRIBUTIONS[dist]
    records = []
    for n in sizes:
        for rep in range(reps):
            lane = generate(lane_rng(seed, n, rep), n, params.alpha)
            wall, stats = time_kernel(lane, params, kernel)
            record = BenchRecord(
                n=n, dist=dist, seed=seed, rep=rep, wall_time=wall, inner_iterations=stats.inner_iterations
            )
            logger.info(
                "n=%d rep=%d: %.4fs, %d inner iterations (%.3f per point), envelope peaked at %d",
                n, rep, wall, stats.inner_iterations, record.avg_inner, stats.max_envelope_size,
            )
            records.append(record)
        measured = fmean(r.avg_inner for r in records if r.n == n)
        logger.info("n=%d: mean avg_inner %.4f, model predicts %.4f", n, measured, predicted_avg_inner(n))
    return records


def mean_avg_inner(records: Iterable[BenchRecord]) -> dict[int, float]:
    """Mean avg_inner per lane size."""
    by_size: dict[int, list[float]] = {}
    for record in records:
        by_size.setdefault(record.n, []).append(record.avg_inner)
    return {n: fmean(values) for n, values in by_size.items()}


def write_bench_csv(records: Iterable[BenchRecord], stream: TextIO):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.as_row())
