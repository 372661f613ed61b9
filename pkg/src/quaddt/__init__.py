from quaddt.envelope import (
    build_lower_envelope,
    build_upper_envelope,
    check_envelope,
    intersect,
    parabola_value,
    sample_envelope,
    sample_lower_envelope,
)
from quaddt.models import AxisParams, Envelope, EnvelopeStats, Sense, TransformResult, TransformSpec
from quaddt.oracle import brute_1d, brute_nd
from quaddt.transform import dt_1d, dt_2d, dt_nd, max_dt, min_dt

__all__ = [
    "AxisParams",
    "Envelope",
    "EnvelopeStats",
    "Sense",
    "TransformResult",
    "TransformSpec",
    "brute_1d",
    "brute_nd",
    "build_lower_envelope",
    "build_upper_envelope",
    "check_envelope",
    "dt_1d",
    "dt_2d",
    "dt_nd",
    "intersect",
    "max_dt",
    "min_dt",
    "parabola_value",
    "sample_envelope",
    "sample_lower_envelope",
]
