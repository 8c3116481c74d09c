import math

import numpy as np
import pytest

from orgswarm import (DimensionMismatchError, InvalidParameterError,
                      clamp_velocity, sigmoid, update_position, update_velocity)


class StubRng:
    """Feeds a fixed uniform sequence to update_position."""

    def __init__(self, values):
        self.values = list(values)

    def random(self, shape):
        size = int(np.prod(shape))
        out = np.array(self.values[:size], dtype=float).reshape(shape)
        del self.values[:size]
        return out


class TestUpdateVelocity:
    def test_pure_inertia_identity(self):
        v = update_velocity([0.3], [0], [0], [0], 1.0, 0.0, 0.0)
        assert v == pytest.approx([0.3])

    def test_zero_acceleration_when_positions_coincide(self):
        v = update_velocity([0.4], [1], [1], [1], 0.5, 1.3, 0.7)
        assert v == pytest.approx([0.2])

    def test_scalar_evaluation(self):
        # 0.5*0.2 + 1.0*(1-0) + 1.5*(1-0) = 2.6
        v = update_velocity([0.2], [0], [1], [1], 0.5, 1.0, 1.5)
        assert v == pytest.approx([2.6])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            update_velocity([0.1, 0.2], [0], [1], [1], 1.0, 1.0, 1.0)

    def test_non_finite_coefficient(self):
        with pytest.raises(InvalidParameterError):
            update_velocity([0.1], [0], [1], [1], float("nan"), 1.0, 1.0)
        with pytest.raises(InvalidParameterError):
            update_velocity([0.1], [0], [1], [1], 1.0, float("inf"), 1.0)

    def test_linearity_in_inertia(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            d = int(rng.integers(1, 30))
            v = rng.normal(size=d)
            p = rng.integers(0, 2, d)
            w = float(rng.uniform(0, 2))
            out = update_velocity(v, p, p, p, w, 0.0, 0.0)
            assert np.allclose(out, w * v)

    def test_geometric_decay_at_consensus(self):
        v = np.array([3.0, -2.0, 0.5])
        p = np.array([1, 0, 1])
        w = 0.7
        for t in range(1, 12):
            v = clamp_velocity(update_velocity(v, p, p, p, w, 1.1, 0.9), 4.0)
            assert np.allclose(np.abs(v), (w ** t) * np.array([3.0, 2.0, 0.5]))

    def test_whole_swarm_matches_per_agent(self):
        rng = np.random.default_rng(8)
        n, d = 7, 5
        vel = rng.normal(size=(n, d))
        pos = rng.integers(0, 2, (n, d))
        pb = rng.integers(0, 2, (n, d))
        gb = rng.integers(0, 2, (n, d))
        w = rng.uniform(0.4, 0.9, n)
        c1 = rng.uniform(0.5, 1.5, n)
        c2 = rng.uniform(0.5, 1.5, n)
        batch = update_velocity(vel, pos, pb, gb, w[:, None], c1[:, None], c2[:, None])
        for i in range(n):
            single = update_velocity(vel[i], pos[i], pb[i], gb[i],
                                     w[i], c1[i], c2[i])
            assert np.array_equal(batch[i], single)


class TestClampVelocity:
    @pytest.mark.parametrize("v,expected", [(5.0, 4.0), (-5.0, -4.0), (3.2, 3.2)])
    def test_clamp_cases(self, v, expected):
        assert clamp_velocity(np.array([v]), 4.0)[0] == expected

    def test_invalid_vmax(self):
        for bad in (0.0, -1.0, float("nan")):
            with pytest.raises(InvalidParameterError):
                clamp_velocity(np.array([1.0]), bad)

    def test_all_components_within_bounds(self):
        rng = np.random.default_rng(4)
        v = clamp_velocity(rng.normal(scale=10, size=1000), 4.0)
        assert (np.abs(v) <= 4.0).all()


class TestSigmoid:
    def test_symmetry_point(self):
        assert sigmoid(0.0) == 0.5

    def test_asymptotes(self):
        assert sigmoid(60.0) == pytest.approx(1.0, abs=1e-12)
        assert sigmoid(-60.0) == pytest.approx(0.0, abs=1e-12)

    def test_reference_value(self):
        expected = 1.0 / (1.0 + math.exp(-2.0))
        assert abs(sigmoid(2.0) - expected) < 1e-12
        assert sigmoid(2.0) == pytest.approx(0.8808, abs=1e-4)

    def test_strictly_increasing(self):
        xs = np.linspace(-8, 8, 500)
        ys = sigmoid(xs)
        assert (np.diff(ys) > 0).all()


class TestUpdatePosition:
    def test_high_velocity_with_draw_below_probability(self):
        # sigmoid(4.0) ~ 0.9820 > 0.9 -> bit set
        new = update_position([0], [4.0], StubRng([0.9]))
        assert new.tolist() == [1]

    def test_zero_velocity_threshold(self):
        assert update_position([0], [0.0], StubRng([0.4])).tolist() == [1]
        assert update_position([1], [0.0], StubRng([0.6])).tolist() == [0]

    def test_deterministic_given_seed(self):
        v = np.linspace(-2, 2, 9)
        p = np.zeros(9, dtype=np.int8)
        a = update_position(p, v, np.random.default_rng(5))
        b = update_position(p, v, np.random.default_rng(5))
        assert np.array_equal(a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            update_position([0, 1], [0.5], np.random.default_rng(0))

    def test_output_is_valid_position(self):
        rng = np.random.default_rng(6)
        out = update_position(rng.integers(0, 2, 200), rng.normal(size=200), rng)
        assert out.shape == (200,)
        assert set(np.unique(out)) <= {0, 1}

    def test_block_draws_equal_sequential_rows(self):
        # The (N, D) matrix form must consume uniforms agent-major,
        # dimension order, exactly like per-agent calls.
        v = np.linspace(-3, 3, 12).reshape(3, 4)
        p = np.zeros((3, 4), dtype=np.int8)
        block = update_position(p, v, np.random.default_rng(21))
        rng = np.random.default_rng(21)
        rows = [update_position(p[i], v[i], rng) for i in range(3)]
        assert np.array_equal(block, np.stack(rows))

    def test_saturated_flip_frequency(self):
        # At the +4.0 clamp, P(bit=1) = sigmoid(4.0); 100,000 draws stay
        # within +/- 0.005 of it.
        rng = np.random.default_rng(77)
        n = 100_000
        out = update_position(np.zeros(n, dtype=np.int8), np.full(n, 4.0), rng)
        assert abs(out.mean() - sigmoid(4.0)) < 0.005


class TestFullStepAgainstHandEvaluator:
    def test_one_step_matches_brute_force(self):
        # Pure-python evaluation of one velocity+clamp+binarization step for
        # D=3, checked bit-for-bit against the library pipeline.
        w, c1, c2, v_max = 0.6, 1.2, 0.8, 4.0
        v = [0.5, -1.0, 2.0]
        p = [0, 1, 1]
        pb = [1, 1, 0]
        gb = [1, 0, 0]
        draws = [0.3, 0.9, 0.05]

        expected_v, expected_bits = [], []
        for d in range(3):
            vd = w * v[d] + c1 * (pb[d] - p[d]) + c2 * (gb[d] - p[d])
            vd = max(-v_max, min(v_max, vd))
            expected_v.append(vd)
            expected_bits.append(1 if draws[d] < 1.0 / (1.0 + math.exp(-vd)) else 0)

        vel = clamp_velocity(update_velocity(v, p, pb, gb, w, c1, c2), v_max)
        got = update_position(p, vel, StubRng(draws))
        assert np.allclose(vel, expected_v, atol=1e-12)
        assert got.tolist() == expected_bits
