"""Seeded inputs for bench runs and random verification cases."""

from collections.abc import Callable

import numpy as np

from quaddt.models import AxisParams, Sense, TransformSpec

VALUE_RANGE = (-10.0, 10.0)
GAUSSIAN_SD = 5.0
ALPHA_RANGE = (0.1, 5.0)
BETA_RANGE = (-5.0, 5.0)


def uniform_lane(rng: np.random.Generator, n: int, alpha: float = 1.0) -> np.ndarray:
    return rng.uniform(*VALUE_RANGE, size=n)


def gaussian_lane(rng: np.random.Generator, n: int, alpha: float = 1.0) -> np.ndarray:
    return rng.normal(0.0, GAUSSIAN_SD, size=n)


def increasing_lane(rng: np.random.Generator, n: int, alpha: float = 1.0) -> np.ndarray:
    return np.sort(rng.uniform(*VALUE_RANGE, size=n))


def adversarial_lane(rng: np.random.Generator, n: int, alpha: float = 1.0) -> np.ndarray:
    """Worst case for the upper-envelope kernel.

    I(p) = -2|alpha| p^2 makes I(p) + alpha p^2 strictly concave in p, so no
    parabola ever leaves the upper envelope and grid point q is intersected
    with all q members before it joins: N(N-1)/2 inner iterations in total.
    With an integer alpha every value is an integer below 2^53 for lanes up
    to 2^20 points, so the crossings -(p+q)/2 come out exact. rng is unused.
    """
    p = np.arange(n, dtype=np.float64)
    return -2.0 * abs(alpha) * p * p


DISTRIBUTIONS: dict[str, Callable[[np.random.Generator, int, float], np.ndarray]] = {
    "uniform": uniform_lane,
    "gaussian": gaussian_lane,
    "increasing": increasing_lane,
    "adversarial": adversarial_lane,
}


def lane_rng(seed: int, n: int, rep: int) -> np.random.Generator:
    """Independent generator per (seed, size, repetition)."""
    return np.random.default_rng([seed, n, rep])


def random_axis(rng: np.random.Generator) -> AxisParams:
    """Alpha in +-[0.1, 5] with a random sign, beta in [-5, 5]."""
    alpha = rng.uniform(*ALPHA_RANGE) * rng.choice([-1.0, 1.0])
    return AxisParams(float(alpha), float(rng.uniform(*BETA_RANGE)))


def random_case(
    rng: np.random.Generator,
    max_rank: int,
    max_extent: int,
    *,
    sense: Sense | None = None,
) -> tuple[np.ndarray, TransformSpec]:
    """A random grid with a matching random spec (argmax requested)."""
    rank = int(rng.integers(1, max_rank + 1))
    extents = tuple(int(d) for d in rng.integers(1, max_extent + 1, size=rank))
    grid = rng.uniform(*VALUE_RANGE, size=extents)
    if sense is None:
        sense = Sense.MAX if rng.random() < 0.5 else Sense.MIN
    spec = TransformSpec(
        sense=sense,
        axes=tuple(random_axis(rng) for _ in range(rank)),
        want_argmax=True,
    )
    return grid, spec
