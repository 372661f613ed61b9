"""Brute-force distance transforms, evaluated straight from the definition.

Nothing here touches the envelope kernels: every candidate grid point is
scored at every output point. Ties resolve to the smallest candidate (the
lexicographically smallest coordinate tuple for N-D grids).
"""

import logging
from collections.abc import Sequence

import numpy as np

from quaddt.errors import InputError, InvalidParameterError, OracleSizeError
from quaddt.models import AxisParams, Sense, TransformSpec

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 10_000


def _finite_array(values: Sequence | np.ndarray, ndim: int | None = None) -> np.ndarray:
    data = np.asarray(values, dtype=np.float64)
    if ndim is not None and data.ndim != ndim:
        raise InputError(f"expected {ndim} dimension(s), got shape {data.shape}")
    if data.ndim < 1 or data.size == 0:
        raise InputError(f"need a non-empty array, got shape {data.shape}")
    if not np.isfinite(data).all():
        raise InputError("oracle input holds non-finite values")
    return data


def _pick(cost: np.ndarray, sense: Sense, axis: int | None = None) -> np.ndarray:
    return np.argmax(cost, axis=axis) if sense is Sense.MAX else np.argmin(cost, axis=axis)


def brute_1d(
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
    sense: Sense | str,
) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive 1D transform; O(N^2). alpha may be zero here."""
    sense = Sense(sense)
    values = _finite_array(lane, ndim=1)
    n = len(values)
    grid_points = np.arange(n)
    # rows are candidates p, columns are output points x
    d = grid_points[:, None] - grid_points[None, :]
    cost = values[:, None] + params.alpha * (d * d) + params.beta * d
    argopt = _pick(cost, sense, axis=0)
    return cost[argopt, grid_points], argopt.astype(np.intp)


def brute_nd(
    grid: Sequence | np.ndarray,
    spec: TransformSpec,
    *,
    max_points: int = DEFAULT_MAX_POINTS,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Exhaustive N-D transform over every candidate coordinate tuple.

    Returns the value grid and one coordinate grid per axis. Refuses grids
    with more than max_points points, since the work is quadratic in that.
    """
    data = _finite_array(grid)
    if spec.rank != data.ndim:
        raise InvalidParameterError(f"spec has {spec.rank} axes but grid has rank {data.ndim}")
    points = data.size
    if points > max_points:
        raise OracleSizeError(f"oracle is capped at {max_points} grid points, got {points} ({data.shape})")
    if points * 10 > max_points * 9:
        logger.warning("oracle input of %d points is close to the %d point cap", points, max_points)

    coords = np.indices(data.shape).reshape(data.ndim, -1)
    flat = data.reshape(-1)
    values = np.empty(points, dtype=np.float64)
    best = np.empty(points, dtype=np.intp)
    for j in range(points):
        cost = flat
        for axis, params in enumerate(spec.axes):
            d = coords[axis] - coords[axis, j]
            cost = cost + params.alpha * (d * d) + params.beta * d
        best[j] = _pick(cost, spec.sense)
        values[j] = cost[best[j]]

    argopt = [coords[axis, best].reshape(data.shape) for axis in range(data.ndim)]
    return values.reshape(data.shape), argopt


def objective_at(
    grid: Sequence | np.ndarray,
    axes: Sequence[AxisParams],
    candidates: Sequence[np.ndarray],
) -> np.ndarray:
    """Score each output point at the candidate coordinates given for it."""
    data = _finite_array(grid)
    if len(axes) != data.ndim or len(candidates) != data.ndim:
        raise InvalidParameterError(f"need {data.ndim} axes and candidate grids")
    picks = tuple(np.asarray(c, dtype=np.intp) for c in candidates)
    for axis, pick in enumerate(picks):
        if pick.shape != data.shape or pick.min() < 0 or pick.max() >= data.shape[axis]:
            raise InvalidParameterError(f"candidate coordinates for axis {axis} fall outside the grid")
    out = np.indices(data.shape)
    total = data[picks]
    for axis, params in enumerate(axes):
        d = picks[axis] - out[axis]
        total = total + params.alpha * (d * d) + params.beta * d
    return total
