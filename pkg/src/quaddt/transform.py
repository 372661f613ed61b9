"""Minimum and maximum distance transforms over 1D lanes and N-D grids.

Both senses and both signs of alpha reduce to the two upward-opening kernels
in :mod:`quaddt.envelope`:

    ============  ==========  ====================================
    sense         alpha       kernel
    ============  ==========  ====================================
    max           > 0         upper envelope
    min           > 0         lower envelope
    max           < 0         lower envelope of -I, -alpha, -beta
    min           < 0         upper envelope of -I, -alpha, -beta
    ============  ==========  ====================================

since max_p f_p(x) = -min_p (-f_p(x)). N-D transforms run one 1D pass per
axis, each pass consuming the previous pass's output.
"""

import logging
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from quaddt.envelope import (
    as_lane,
    build_lower_envelope,
    build_upper_envelope,
    sample_envelope,
    sample_lower_envelope,
)
from quaddt.errors import InputError, InvalidParameterError, LaneError
from quaddt.models import AxisParams, EnvelopeStats, Sense, TransformResult, TransformSpec

logger = logging.getLogger(__name__)

KERNELS = {
    Sense.MAX: (build_upper_envelope, sample_envelope),
    Sense.MIN: (build_lower_envelope, sample_lower_envelope),
}


def as_grid(grid: Sequence | np.ndarray) -> np.ndarray:
    """Return grid as a float64 array after checking rank and finiteness."""
    data = np.asarray(grid, dtype=np.float64)
    if data.ndim < 1:
        raise InputError("grid must have at least one dimension")
    if data.size == 0:
        raise InputError(f"grid extents must all be positive, got {data.shape}")
    finite = np.isfinite(data)
    if not finite.all():
        bad = tuple(int(i) for i in np.argwhere(~finite)[0])
        raise InputError(f"grid value at {bad} is not finite: {data[bad]!r}")
    return data


def dt_1d(
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
    sense: Sense | str,
) -> tuple[np.ndarray, np.ndarray, EnvelopeStats]:
    """Distance transform of one lane. Returns (values, argopt, stats)."""
    sense = Sense(sense)
    if params.alpha == 0:
        raise InvalidParameterError("alpha must be non-zero")
    values = as_lane(lane)

    if params.alpha > 0:
        build, sample = KERNELS[sense]
        envelope, stats = build(values, params)
        out, arg = sample(envelope, values, params)
        return out, arg, stats

    # downward parabolas: solve the dual problem on upward ones
    flipped = [-value for value in values]
    dual_params = params.negated
    build, sample = KERNELS[sense.dual]
    envelope, stats = build(flipped, dual_params)
    out, arg = sample(envelope, flipped, dual_params)
    return -out, arg, stats


def _check_spec(data: np.ndarray, spec: TransformSpec) -> tuple[int, ...]:
    if spec.rank != data.ndim:
        raise InvalidParameterError(f"spec has {spec.rank} axes but grid has rank {data.ndim}")
    order = spec.order()
    if sorted(order) != list(range(data.ndim)):
        raise InvalidParameterError(f"axis order {order} is not a permutation of 0..{data.ndim - 1}")
    for axis, params in enumerate(spec.axes):
        if params.alpha == 0:
            raise InvalidParameterError(f"alpha for axis {axis} must be non-zero")
    return order


def _run_pass(
    data: np.ndarray,
    axis: int,
    params: AxisParams,
    sense: Sense,
    threads: int,
) -> tuple[np.ndarray, np.ndarray, list[EnvelopeStats]]:
    """Transform every lane of data along axis."""
    moved = np.moveaxis(data, axis, -1)
    lane_shape = moved.shape[:-1]
    lanes = moved.reshape(-1, moved.shape[-1])
    out = np.empty(lanes.shape, dtype=np.float64)
    arg = np.empty(lanes.shape, dtype=np.intp)

    def run(i: int) -> EnvelopeStats:
        try:
            out[i], arg[i], stats = dt_1d(lanes[i], params, sense)
        except (InputError, InvalidParameterError, ArithmeticError) as exc:
            index = tuple(int(c) for c in np.unravel_index(i, lane_shape))
            raise LaneError(axis, index, exc) from exc
        return stats

    if threads > 1 and len(lanes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(lanes))))
    else:
        parts = [run(i) for i in range(len(lanes))]

    values = np.moveaxis(out.reshape(moved.shape), -1, axis)
    argopt = np.moveaxis(arg.reshape(moved.shape), -1, axis)
    return np.ascontiguousarray(values), np.ascontiguousarray(argopt), parts


def dt_nd(grid: Sequence | np.ndarray, spec: TransformSpec, *, threads: int = 1) -> TransformResult:
    """Separable distance transform of an N-D grid.

    Axes are processed in spec.order(); any order gives the same values.
    With spec.want_argmax, each pass's 1D optimizers re-index the coordinate
    grids of the axes already processed, so result.argmax[d] holds the
    optimizing coordinate along axis d for every output point.
    """
    data = as_grid(grid)
    order = _check_spec(data, spec)

    current = data
    coords: dict[int, np.ndarray] = {}
    parts: list[EnvelopeStats] = []
    for axis in order:
        started = time.perf_counter()
        current, argopt, pass_stats = _run_pass(current, axis, spec.axes[axis], spec.sense, threads)
        parts.extend(pass_stats)
        if spec.want_argmax:
            for done, coord in coords.items():
                coords[done] = np.take_along_axis(coord, argopt, axis=axis)
            coords[axis] = argopt
        logger.debug(
            "axis %d pass: %d lanes in %.4fs",
            axis,
            len(pass_stats),
            time.perf_counter() - started,
        )

    argmax = [coords[axis] for axis in range(data.ndim)] if spec.want_argmax else None
    return TransformResult(values=current, argmax=argmax, stats=EnvelopeStats.combine(parts))


def dt_2d(
    grid: Sequence | np.ndarray,
    alpha: float,
    beta: float,
    gamma: float,
    delta: float,
    sense: Sense | str = Sense.MAX,
    *,
    want_argmax: bool = False,
) -> TransformResult:
    """2D transform with (alpha, beta) along axis 0 and (gamma, delta) along axis 1."""
    spec = TransformSpec(
        sense=Sense(sense),
        axes=(AxisParams(alpha, beta), AxisParams(gamma, delta)),
        want_argmax=want_argmax,
    )
    return dt_nd(grid, spec)


def _spec_for(
    sense: Sense,
    rank: int,
    alphas: Sequence[float],
    betas: Sequence[float] | None,
    axis_order: Sequence[int] | None,
    want_argmax: bool,
) -> TransformSpec:
    betas = [0.0] * rank if betas is None else list(betas)
    if len(alphas) != rank or len(betas) != rank:
        raise InvalidParameterError(
            f"need one alpha and one beta per axis ({rank}), got {len(alphas)} and {len(betas)}"
        )
    return TransformSpec(
        sense=sense,
        axes=tuple(AxisParams(a, b) for a, b in zip(alphas, betas)),
        axis_order=None if axis_order is None else tuple(axis_order),
        want_argmax=want_argmax,
    )


def max_dt(
    grid: Sequence | np.ndarray,
    alphas: Sequence[float],
    betas: Sequence[float] | None = None,
    *,
    axis_order: Sequence[int] | None = None,
    want_argmax: bool = False,
    threads: int = 1,
) -> TransformResult:
    data = as_grid(grid)
    spec = _spec_for(Sense.MAX, data.ndim, alphas, betas, axis_order, want_argmax)
    return dt_nd(data, spec, threads=threads)


def min_dt(
    grid: Sequence | np.ndarray,
    alphas: Sequence[float],
    betas: Sequence[float] | None = None,
    *,
    axis_order: Sequence[int] | None = None,
    want_argmax: bool = False,
    threads: int = 1,
) -> TransformResult:
    data = as_grid(grid)
    spec = _spec_for(Sense.MIN, data.ndim, alphas, betas, axis_order, want_argmax)
    return dt_nd(data, spec, threads=threads)
