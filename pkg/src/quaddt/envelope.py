"""Upper and lower envelopes of identically shaped parabolas over one lane.

Grid point ``p`` of a lane ``I`` carries the parabola

    f_p(x) = I(p) + alpha * (p - x)**2 + beta * (p - x)

and all parabolas of a lane share ``alpha``, so any two of them cross exactly
once. The upper-envelope kernel scans the envelope from its rightmost range
for every new grid point and is average-case linear; the lower-envelope
kernel pops from the back of the envelope and is linear in the worst case.
Both kernels require ``alpha > 0``; other signs are handled by duality in
:mod:`quaddt.transform`.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from quaddt.errors import InputError, InvalidParameterError, NumericalDegeneracyError
from quaddt.models import AxisParams, Envelope, EnvelopeKind, EnvelopeStats

logger = logging.getLogger(__name__)

INF = math.inf


def as_lane(lane: Sequence[float] | np.ndarray) -> list[float]:
    """Validate a lane and return its values as a list of floats."""
    values = np.asarray(lane, dtype=np.float64)
    if values.ndim != 1:
        raise InputError(f"lane must be one-dimensional, got shape {values.shape}")
    if values.size == 0:
        raise InputError("lane must hold at least one value")
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise InputError(f"lane value at index {bad} is not finite: {values[bad]!r}")
    return values.tolist()


def _require_upward(params: AxisParams, kernel: str):
    if not params.alpha > 0:
        raise InvalidParameterError(f"{kernel} kernel needs alpha > 0, got {params.alpha!r}")


def _offsets(values: list[float], alpha: float, beta: float) -> list[float]:
    # A(t) = I(t) + alpha t^2 + beta t: the part of f_t that does not depend on x
    return [value + alpha * (t * t) + beta * t for t, value in enumerate(values)]


def parabola_value(p: int, x: float, lane: Sequence[float], params: AxisParams) -> float:
    """Evaluate f_p at x."""
    d = p - x
    return float(lane[p]) + params.alpha * (d * d) + params.beta * d


def intersect(p: int, q: int, lane: Sequence[float], params: AxisParams) -> float:
    """Return the x where f_p and f_q cross.

    f_p(x) - f_q(x) = A(p) - A(q) - 2 alpha (p - q) x, so the crossing is
    (A(p) - A(q)) / (2 alpha (p - q)). Swapping p and q negates numerator and
    denominator exactly, so the result is symmetric bit for bit.
    """
    if p == q:
        raise InvalidParameterError(f"cannot intersect parabola {p} with itself")
    alpha, beta = params.alpha, params.beta
    if alpha == 0:
        raise InvalidParameterError("alpha must be non-zero to intersect parabolas")
    a_p = float(lane[p]) + alpha * (p * p) + beta * p
    a_q = float(lane[q]) + alpha * (q * q) + beta * q
    s = (a_p - a_q) / (2 * alpha * (p - q))
    if not math.isfinite(s):
        raise NumericalDegeneracyError(f"intersection of parabolas {p} and {q} is not finite: {s!r}")
    return s


def build_upper_envelope(
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
    *,
    validate: bool = False,
) -> tuple[Envelope, EnvelopeStats]:
    """Build the upper envelope of the lane's upward-opening parabolas.

    Every new grid point q is intersected with the envelope members starting
    from v[0], which owns the rightmost range. The scan stops at the member
    whose range (z[p+1], z[p]] holds the crossing; q takes everything left of
    the crossing and the members after p are dropped. v and z are allocated
    once at their largest possible size.
    """
    values = as_lane(lane)
    _require_upward(params, "upper-envelope")
    alpha = params.alpha
    n = len(values)
    offsets = _offsets(values, alpha, params.beta)
    two_alpha = 2 * alpha

    v = [0] * n
    z = [0.0] * (n + 1)
    z[0] = INF
    z[1] = -INF
    k = 0
    inner = 0
    sizes = []

    for q in range(1, n):
        a_q = offsets[q]
        for p in range(k + 1):
            inner += 1
            vp = v[p]
            s = (offsets[vp] - a_q) / (two_alpha * (vp - q))
            if s > z[p + 1] and s <= z[p]:
                if s == INF:
                    raise NumericalDegeneracyError(f"intersection of parabolas {vp} and {q} overflowed")
                if s == z[p]:
                    # v[p-1], v[p] and q meet at s: v[p] would own an empty range
                    logger.debug("parabola %d drops out at x=%r where three parabolas cross", vp, s)
                    k = p
                    v[k] = q
                    z[k + 1] = -INF
                    break
                k = p + 1
                v[k] = q
                z[k + 1] = -INF
                z[k] = s
                break
        else:
            raise NumericalDegeneracyError(
                f"no envelope range holds the crossing for grid point {q}; lane or parameters are degenerate"
            )
        sizes.append(k + 1)

    envelope = Envelope(
        k=k,
        v=np.array(v[: k + 1], dtype=np.intp),
        z=np.array(z[: k + 2], dtype=np.float64),
        kind=EnvelopeKind.UPPER,
    )
    stats = EnvelopeStats(
        inner_iterations=inner,
        per_step_envelope_size=tuple(sizes),
        max_envelope_size=max(sizes, default=1),
    )
    if validate:
        check_envelope(envelope, n)
    return envelope, stats


def sample_envelope(
    env: Envelope,
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Read an upper envelope back at the grid points.

    The fill starts from the leftmost range (index env.k) and walks k down as
    q moves right; q belongs to v[k] once z[k] >= q.
    """
    if env.kind is not EnvelopeKind.UPPER:
        raise InvalidParameterError("sample_envelope expects an upper envelope")
    values = as_lane(lane)
    alpha, beta = params.alpha, params.beta
    n = len(values)
    v = env.v.tolist()
    z = env.z.tolist()
    k = env.k

    out = [0.0] * n
    arg = [0] * n
    for q in range(n):
        while z[k] < q:
            k -= 1
        p = v[k]
        d = p - q
        out[q] = values[p] + alpha * (d * d) + beta * d
        arg[q] = p
    return np.array(out, dtype=np.float64), np.array(arg, dtype=np.intp)


def build_lower_envelope(
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
    *,
    validate: bool = False,
) -> tuple[Envelope, EnvelopeStats]:
    """Build the lower envelope of the lane's upward-opening parabolas.

    Breakpoints run from -inf up to +inf and v[p] owns (z[p], z[p+1]]. A new
    grid point pops members off the back while its crossing with the last
    member falls at or left of that member's lower breakpoint, then appends.
    Each grid point is pushed and popped at most once.
    """
    values = as_lane(lane)
    _require_upward(params, "lower-envelope")
    alpha = params.alpha
    n = len(values)
    offsets = _offsets(values, alpha, params.beta)
    two_alpha = 2 * alpha

    v = [0] * n
    z = [0.0] * (n + 1)
    z[0] = -INF
    z[1] = INF
    k = 0
    inner = 0
    sizes = []

    for q in range(1, n):
        a_q = offsets[q]
        while True:
            inner += 1
            vk = v[k]
            s = (offsets[vk] - a_q) / (two_alpha * (vk - q))
            if s > z[k]:
                break
            if k == 0:
                raise NumericalDegeneracyError(
                    f"crossing of grid point {q} with parabola {vk} is not orderable: {s!r}"
                )
            k -= 1
        if s == INF:
            raise NumericalDegeneracyError(f"intersection of parabolas {vk} and {q} overflowed")
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = INF
        sizes.append(k + 1)

    envelope = Envelope(
        k=k,
        v=np.array(v[: k + 1], dtype=np.intp),
        z=np.array(z[: k + 2], dtype=np.float64),
        kind=EnvelopeKind.LOWER,
    )
    stats = EnvelopeStats(
        inner_iterations=inner,
        per_step_envelope_size=tuple(sizes),
        max_envelope_size=max(sizes, default=1),
    )
    if validate:
        check_envelope(envelope, n)
    return envelope, stats


def sample_lower_envelope(
    env: Envelope,
    lane: Sequence[float] | np.ndarray,
    params: AxisParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Read a lower envelope back at the grid points.

    A grid point sitting exactly on a breakpoint stays with the parabola to
    its left, whose range is closed on the right.
    """
    if env.kind is not EnvelopeKind.LOWER:
        raise InvalidParameterError("sample_lower_envelope expects a lower envelope")
    values = as_lane(lane)
    alpha, beta = params.alpha, params.beta
    n = len(values)
    v = env.v.tolist()
    z = env.z.tolist()
    k = 0

    out = [0.0] * n
    arg = [0] * n
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        p = v[k]
        d = p - q
        out[q] = values[p] + alpha * (d * d) + beta * d
        arg[q] = p
    return np.array(out, dtype=np.float64), np.array(arg, dtype=np.intp)


def check_envelope(env: Envelope, n: int, *, strict: bool = True):
    """Raise NumericalDegeneracyError if env breaks an envelope invariant.

    Checks sizes, the +-inf sentinels, breakpoint ordering (so the ranges tile
    the real line), increasing parabola indices and that the first and last
    grid points are members. With strict=False, zero-width ranges are
    tolerated.
    """
    v = env.v.tolist()
    z = env.z.tolist()
    k = env.k

    def fail(what: str):
        raise NumericalDegeneracyError(f"{env.kind} envelope over {n} points: {what}")

    if k < 0 or len(v) != k + 1 or len(z) != k + 2:
        fail(f"sizes disagree: k={k}, len(v)={len(v)}, len(z)={len(z)}")

    if env.kind is EnvelopeKind.UPPER:
        first, last = INF, -INF
        steps = [z[i] - z[i + 1] for i in range(k + 1)]
    else:
        first, last = -INF, INF
        steps = [z[i + 1] - z[i] for i in range(k + 1)]
    if z[0] != first or z[-1] != last:
        fail(f"sentinels are {z[0]!r}, {z[-1]!r}")
    for i, step in enumerate(steps):
        if step < 0 or (strict and step == 0) or step != step:
            fail(f"breakpoints {i} and {i + 1} out of order: {z[i]!r}, {z[i + 1]!r}")
    inner = z[1:-1]
    if not all(math.isfinite(b) for b in inner):
        fail("interior breakpoint is not finite")

    for i in range(k):
        if not v[i] < v[i + 1]:
            fail(f"parabola indices not increasing at {i}: {v[i]}, {v[i + 1]}")
    if v[0] != 0 or v[-1] != n - 1:
        fail(f"endpoints missing: v[0]={v[0]}, v[k]={v[-1]}")
