import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quaddt.errors import InputError, InvalidParameterError, LaneError
from quaddt.generators import random_axis, random_case
from quaddt.models import AxisParams, Sense, TransformSpec
from quaddt.oracle import brute_1d, brute_nd, objective_at
from quaddt.transform import dt_1d, dt_2d, dt_nd, max_dt, min_dt
from quaddt.verify import within

UNIT = AxisParams(1.0, 0.0)


class TestDt1d:
    def test_max_upward(self):
        values, argopt, _ = dt_1d([0.0, 0.0], UNIT, Sense.MAX)
        assert values.tolist() == [1.0, 1.0]
        assert argopt.tolist() == [1, 0]

    def test_min_downward_is_dual_of_max_upward(self):
        values, _, _ = dt_1d([0.0, 0.0], AxisParams(-1.0, 0.0), Sense.MIN)
        assert values.tolist() == [-1.0, -1.0]

    def test_min_flat_lane_keeps_each_point(self):
        values, argopt, _ = dt_1d([3.0, 3.0, 3.0], UNIT, "min")
        assert values.tolist() == [3.0, 3.0, 3.0]
        assert argopt.tolist() == [0, 1, 2]

    def test_max_downward_uses_lower_kernel(self):
        # max of -(p - x)^2 over p is 0, reached at p = x
        values, argopt, _ = dt_1d([0.0, 0.0, 0.0], AxisParams(-1.0, 0.0), Sense.MAX)
        assert values.tolist() == [0.0, 0.0, 0.0]
        assert argopt.tolist() == [0, 1, 2]

    def test_zero_alpha_rejected(self):
        with pytest.raises(InvalidParameterError):
            dt_1d([0.0, 1.0], AxisParams(0.0, 1.0), Sense.MAX)

    def test_non_finite_rejected(self):
        with pytest.raises(InputError):
            dt_1d([0.0, float("nan")], UNIT, Sense.MIN)

    def test_matches_oracle_on_random_lanes(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 65))
            lane = rng.uniform(-10, 10, size=n)
            params = random_axis(rng)
            for sense in Sense:
                values, argopt, _ = dt_1d(lane, params, sense)
                expected, _ = brute_1d(lane, params, sense)
                assert within(values, expected).all()
                assert within(objective_at(lane, [params], [argopt]), values).all()

    def test_duality(self, rng):
        for _ in range(500):
            n = int(rng.integers(1, 65))
            lane = rng.uniform(-10, 10, size=n)
            params = random_axis(rng)
            high, _, _ = dt_1d(lane, params, Sense.MAX)
            low, _, _ = dt_1d(-lane, params.negated, Sense.MIN)
            assert within(high, -low).all()

    def test_stats_follow_the_kernel(self):
        _, _, stats = dt_1d(np.zeros(10), UNIT, Sense.MAX)
        assert stats.inner_iterations >= 9
        assert len(stats.per_step_envelope_size) == 9


class TestDtNd:
    def test_single_point(self):
        spec = TransformSpec(Sense.MIN, (UNIT, AxisParams(-2.0, 1.0)))
        result = dt_nd([[7.0]], spec)
        assert result.values.tolist() == [[7.0]]

    def test_two_by_two_max(self):
        spec = TransformSpec(Sense.MAX, (UNIT, UNIT), want_argmax=True)
        result = dt_nd(np.zeros((2, 2)), spec)
        assert result.values.tolist() == [[2.0, 2.0], [2.0, 2.0]]
        rows, cols = result.argmax
        assert rows.tolist() == [[1, 1], [0, 0]]
        assert cols.tolist() == [[1, 0], [1, 0]]

    def test_values_keep_shape_and_stats_add_up(self, rng):
        grid = rng.uniform(-10, 10, size=(3, 4, 5))
        spec = TransformSpec(Sense.MAX, (UNIT, UNIT, UNIT))
        result = dt_nd(grid, spec)
        assert result.values.shape == (3, 4, 5)
        assert result.argmax is None
        # one lane per point of the other two axes, per pass
        assert result.stats.lanes == 4 * 5 + 3 * 5 + 3 * 4
        assert result.stats.inner_iterations >= 20 * 2 + 15 * 3 + 12 * 4

    def test_random_3x4x5_matches_oracle(self, rng):
        grid = rng.uniform(-10, 10, size=(3, 4, 5))
        for sense in Sense:
            spec = TransformSpec(sense, tuple(random_axis(rng) for _ in range(3)), want_argmax=True)
            result = dt_nd(grid, spec)
            expected, _ = brute_nd(grid, spec)
            assert within(result.values, expected).all()

    def test_matches_oracle_on_random_grids(self, rng):
        for _ in range(200):
            grid, spec = random_case(rng, max_rank=3, max_extent=6)
            result = dt_nd(grid, spec)
            expected, _ = brute_nd(grid, spec)
            assert within(result.values, expected).all()
            objective = objective_at(grid, spec.axes, result.argmax)
            assert within(objective, result.values).all()

    def test_larger_extents_match_oracle(self, rng):
        for _ in range(20):
            grid, spec = random_case(rng, max_rank=3, max_extent=8)
            result = dt_nd(grid, spec)
            expected, _ = brute_nd(grid, spec)
            assert within(result.values, expected).all()

    def test_argmax_indexes_within_extents(self, rng):
        grid, spec = random_case(rng, max_rank=3, max_extent=6)
        result = dt_nd(grid, spec)
        for axis, coords in enumerate(result.argmax):
            assert coords.shape == grid.shape
            assert coords.min() >= 0 and coords.max() < grid.shape[axis]

    def test_axis_order_does_not_matter(self, rng):
        for _ in range(100):
            grid = rng.uniform(-10, 10, size=tuple(int(d) for d in rng.integers(1, 7, size=3)))
            axes = tuple(random_axis(rng) for _ in range(3))
            sense = Sense.MAX if rng.random() < 0.5 else Sense.MIN
            baseline = dt_nd(grid, TransformSpec(sense, axes)).values
            for order in itertools.permutations(range(3)):
                values = dt_nd(grid, TransformSpec(sense, axes, axis_order=order)).values
                assert within(values, baseline).all()

    def test_axis_order_rank_two(self, rng):
        grid = rng.uniform(-10, 10, size=(5, 7))
        axes = (random_axis(rng), random_axis(rng))
        first = dt_nd(grid, TransformSpec(Sense.MIN, axes, axis_order=(0, 1), want_argmax=True))
        second = dt_nd(grid, TransformSpec(Sense.MIN, axes, axis_order=(1, 0), want_argmax=True))
        assert within(first.values, second.values).all()
        assert within(objective_at(grid, axes, second.argmax), first.values).all()

    def test_threads_give_identical_results(self, rng):
        grid, spec = random_case(rng, max_rank=3, max_extent=6)
        single = dt_nd(grid, spec)
        pooled = dt_nd(grid, spec, threads=4)
        assert np.array_equal(single.values, pooled.values)
        for a, b in zip(single.argmax, pooled.argmax):
            assert np.array_equal(a, b)

    def test_euclidean_special_case_1d(self, rng):
        n = 40
        seeds = np.sort(rng.choice(n, size=5, replace=False))
        big = 4.0 * n * n
        lane = np.full(n, big)
        lane[seeds] = 0.0
        values, _, _ = dt_1d(lane, UNIT, Sense.MIN)
        x = np.arange(n)
        expected = np.min((seeds[:, None] - x[None, :]) ** 2, axis=0)
        assert values.tolist() == expected.astype(float).tolist()

    def test_euclidean_special_case_2d(self, rng):
        shape = (9, 12)
        big = 4.0 * max(shape) ** 2
        grid = np.full(shape, big)
        seeds = [(0, 0), (4, 7), (8, 11), (2, 10)]
        for seed in seeds:
            grid[seed] = 0.0
        result = min_dt(grid, [1.0, 1.0])
        rows, cols = np.indices(shape)
        expected = np.min([(rows - r) ** 2 + (cols - c) ** 2 for r, c in seeds], axis=0)
        assert np.array_equal(result.values, expected.astype(float))

    @settings(max_examples=100, deadline=None)
    @given(
        values=st.lists(st.floats(-10, 10), min_size=1, max_size=30),
        shift=st.floats(-100, 100),
        alpha=st.floats(0.1, 5) | st.floats(-5, -0.1),
        beta=st.floats(-5, 5),
        sense=st.sampled_from(list(Sense)),
    )
    def test_shift_equivariance(self, values, shift, alpha, beta, sense):
        lane = np.array(values)
        params = AxisParams(alpha, beta)
        base, _, _ = dt_1d(lane, params, sense)
        moved, _, _ = dt_1d(lane + shift, params, sense)
        assert within(moved, base + shift).all()

    def test_rank_mismatch(self):
        with pytest.raises(InvalidParameterError, match="rank"):
            dt_nd(np.zeros((2, 2)), TransformSpec(Sense.MAX, (UNIT,)))

    def test_bad_axis_order(self):
        spec = TransformSpec(Sense.MAX, (UNIT, UNIT), axis_order=(0, 0))
        with pytest.raises(InvalidParameterError, match="permutation"):
            dt_nd(np.zeros((2, 2)), spec)

    def test_zero_alpha_names_axis(self):
        spec = TransformSpec(Sense.MIN, (UNIT, AxisParams(0.0, 0.0)))
        with pytest.raises(InvalidParameterError, match="axis 1"):
            dt_nd(np.zeros((2, 2)), spec)

    def test_non_finite_grid(self):
        grid = np.zeros((2, 3))
        grid[1, 2] = np.inf
        with pytest.raises(InputError, match=r"\(1, 2\)"):
            dt_nd(grid, TransformSpec(Sense.MIN, (UNIT, UNIT)))

    def test_lane_failure_carries_coordinates(self, monkeypatch):
        from quaddt import transform
        from quaddt.errors import NumericalDegeneracyError

        real = transform.dt_1d

        def failing(lane, params, sense):
            if lane[0] == 5.0:
                raise NumericalDegeneracyError("forced")
            return real(lane, params, sense)

        monkeypatch.setattr(transform, "dt_1d", failing)
        grid = np.zeros((3, 4))
        grid[0, 2] = 5.0
        with pytest.raises(LaneError) as info:
            dt_nd(grid, TransformSpec(Sense.MIN, (UNIT, UNIT), axis_order=(0, 1)))
        assert info.value.axis == 0
        assert info.value.lane_index == (2,)
        assert isinstance(info.value.__cause__, NumericalDegeneracyError)


class TestConvenience:
    def test_dt_2d_uses_gamma_delta_on_second_axis(self, rng):
        grid = rng.uniform(-10, 10, size=(4, 6))
        result = dt_2d(grid, 1.5, -0.5, -2.0, 3.0, Sense.MIN)
        spec = TransformSpec(Sense.MIN, (AxisParams(1.5, -0.5), AxisParams(-2.0, 3.0)))
        expected, _ = brute_nd(grid, spec)
        assert within(result.values, expected).all()

    def test_max_and_min_wrappers(self):
        grid = np.zeros((2, 2))
        assert max_dt(grid, [1.0, 1.0]).values.tolist() == [[2.0, 2.0], [2.0, 2.0]]
        assert min_dt(grid, [1.0, 1.0], [0.0, 0.0]).values.tolist() == [[0.0, 0.0], [0.0, 0.0]]

    def test_wrapper_needs_one_alpha_per_axis(self):
        with pytest.raises(InvalidParameterError):
            max_dt(np.zeros((2, 2)), [1.0])
