from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from quaddt.errors import InvalidParameterError


class Sense(StrEnum):
    """Whether a transform minimizes or maximizes over grid points."""

    MIN = "min"
    MAX = "max"

    @property
    def dual(self) -> Sense:
        return Sense.MAX if self is Sense.MIN else Sense.MIN


class EnvelopeKind(StrEnum):
    """Upper envelope (z decreasing) or lower envelope (z increasing)."""

    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class AxisParams:
    """Quadratic and linear displacement coefficients for one axis."""

    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidParameterError(f"axis parameters must be finite, got alpha={self.alpha!r} beta={self.beta!r}")

    @property
    def negated(self) -> AxisParams:
        return AxisParams(-self.alpha, -self.beta)


@dataclass
class Envelope:
    """Parabola indices and range breakpoints of an envelope over one lane.

    Upper envelopes store breakpoints from +inf down to -inf and parabola
    ``v[p]`` owns ``(z[p+1], z[p]]``. Lower envelopes store them from -inf up
    to +inf and ``v[p]`` owns ``(z[p], z[p+1]]``.
    """

    k: int
    v: np.ndarray
    z: np.ndarray
    kind: EnvelopeKind = EnvelopeKind.UPPER

    @property
    def size(self) -> int:
        return self.k + 1


@dataclass
class EnvelopeStats:
    """Inner-loop work performed while building envelopes."""

    inner_iterations: int = 0
    per_step_envelope_size: tuple[int, ...] = ()
    lanes: int = 1
    max_envelope_size: int = 0

    @classmethod
    def combine(cls, parts: list[EnvelopeStats]) -> EnvelopeStats:
        """Sum stats across lanes; per-step traces are per lane and are dropped."""
        return cls(
            inner_iterations=sum(s.inner_iterations for s in parts),
            lanes=sum(s.lanes for s in parts),
            max_envelope_size=max((s.max_envelope_size for s in parts), default=0),
        )


@dataclass(frozen=True)
class TransformSpec:
    """What to compute over a grid: one sense, one AxisParams per dimension."""

    sense: Sense
    axes: tuple[AxisParams, ...]
    axis_order: tuple[int, ...] | None = None
    want_argmax: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.axis_order is not None:
            object.__setattr__(self, "axis_order", tuple(int(a) for a in self.axis_order))

    @property
    def rank(self) -> int:
        return len(self.axes)

    def order(self) -> tuple[int, ...]:
        if self.axis_order is None:
            return tuple(range(self.rank))
        return self.axis_order


@dataclass
class TransformResult:
    """Transformed values, optional per-axis optimizer coordinates and stats."""

    values: np.ndarray
    argmax: list[np.ndarray] | None = None
    stats: EnvelopeStats = field(default_factory=lambda: EnvelopeStats(lanes=0))


@dataclass
class BenchRecord:
    """One row of bench output."""

    n: int
    dist: str
    seed: int
    rep: int
    wall_time: float
    inner_iterations: int

    @property
    def avg_inner(self) -> float:
        return self.inner_iterations / (self.n - 1)

    def as_row(self) -> list[str]:
        return [
            str(self.n),
            self.dist,
            str(self.seed),
            str(self.rep),
            f"{self.wall_time:.6f}",
            str(self.inner_iterations),
            f"{self.avg_inner:.6f}",
        ]
