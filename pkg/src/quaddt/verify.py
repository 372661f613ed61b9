"""Kernel-versus-oracle comparison."""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, replace

import numpy as np

from quaddt.generators import random_case
from quaddt.models import TransformSpec
from quaddt.oracle import DEFAULT_MAX_POINTS, brute_nd, objective_at
from quaddt.transform import dt_nd

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


@dataclass
class CaseReport:
    """Outcome of checking one grid against the oracle."""

    index: int
    shape: tuple[int, ...]
    passed: bool
    max_abs_err: float
    failure: tuple[tuple[int, ...], float, float] | None = None

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"case {self.index} shape {self.shape}: {status} (max-abs-err {self.max_abs_err:.3e})"
        if self.failure is not None:
            coord, kernel_value, oracle_value = self.failure
            line += f" at {coord}: kernel {kernel_value!r}, oracle {oracle_value!r}"
        return line


def within(actual: np.ndarray, expected: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Elementwise |actual - expected| <= tolerance * max(1, |expected|)."""
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    return np.abs(actual - expected) <= tolerance * np.maximum(1.0, np.abs(expected))


def verify_case(
    grid: np.ndarray,
    spec: TransformSpec,
    *,
    index: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    max_points: int = DEFAULT_MAX_POINTS,
    threads: int = 1,
) -> CaseReport:
    """Compare dt_nd with brute_nd on values and on the objective at dt_nd's argmax."""
    data = np.asarray(grid, dtype=np.float64)
    result = dt_nd(data, replace(spec, want_argmax=True), threads=threads)
    expected, _ = brute_nd(data, spec, max_points=max_points)

    ok = within(result.values, expected, tolerance)
    ok &= within(objective_at(data, spec.axes, result.argmax), result.values, tolerance)
    err = float(np.max(np.abs(result.values - expected)))

    failure = None
    if not ok.all():
        coord = tuple(int(c) for c in np.argwhere(~ok)[0])
        failure = (coord, float(result.values[coord]), float(expected[coord]))
    return CaseReport(index, data.shape, bool(ok.all()), err, failure)


def random_cases(
    count: int,
    max_rank: int,
    max_extent: int,
    seed: int,
) -> Iterator[tuple[np.ndarray, TransformSpec]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_case(rng, max_rank, max_extent)
