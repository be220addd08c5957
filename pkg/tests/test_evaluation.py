import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsequbo import (
    FixedPointFormat,
    Instance,
    oracle_tune,
    oracle_tune_multi,
    reconstruction_error,
    solve_exhaustive_sparse,
    support_error,
    support_vector,
)
from sparsequbo.instances import generate_low_coherence_matrix, make_instance


class TestReconstructionError:
    def test_perfect_estimate(self):
        x = np.array([1.0, -2.0, 0.0])
        assert reconstruction_error(x, x) == 0.0

    def test_zero_estimate(self):
        assert reconstruction_error(np.array([3.0, 4.0]), np.zeros(2)) == 1.0

    def test_swapped_unit_vectors(self):
        assert reconstruction_error(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == (
            pytest.approx(math.sqrt(2.0))
        )

    def test_zero_truth_rejected(self):
        with pytest.raises(ValueError):
            reconstruction_error(np.zeros(3), np.ones(3))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            reconstruction_error(np.ones(3), np.ones(4))


class TestSupportError:
    def test_identical_supports(self):
        x = np.array([0.0, 1.0, 0.0, -2.0])
        assert support_error(x, 5.0 * x) == 0

    def test_zero_estimate_counts_truth_support(self):
        x = np.array([0.0, 1.0, 2.0, 0.0, 3.0])
        assert support_error(x, np.zeros(5)) == 3

    def test_disjoint_supports_add(self):
        x_true = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
        x_hat = np.array([0.0, 0.0, 0.0, 2.0, 2.0, 0.0])
        assert support_error(x_true, x_hat) == 5

    def test_zero_tol_matters(self):
        x_hat = np.array([1e-8, 1.0])
        x_true = np.array([0.0, 1.0])
        assert support_error(x_true, x_hat) == 0
        assert support_error(x_true, x_hat, zero_tol=1e-9) == 1

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            support_error(np.ones(3), np.ones(2))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(1.0, 10.0))
    def test_symmetric_and_scale_invariant(self, seed, scale):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(8) * rng.integers(0, 2, size=8)
        y = rng.standard_normal(8) * rng.integers(0, 2, size=8)
        assert support_error(x, y) == support_error(y, x)
        assert support_error(x, y * scale) == support_error(x, y)

    def test_support_vector_binary(self):
        s = support_vector(np.array([0.0, -3.0, 1e-9]))
        assert s.dtype == np.uint8
        assert np.array_equal(s, [0, 1, 0])


def _noiseless_instance():
    A = generate_low_coherence_matrix(8, 12, K=500, seed=1)
    x_true = np.zeros(12)
    x_true[[3, 8]] = 1.0
    return Instance(A=A, x_true=x_true, b=A @ x_true, sigma=0.0, seed=1)


class TestOracleTune:
    def test_single_point_grid(self):
        inst = _noiseless_instance()
        res = oracle_tune(lambda k: solve_exhaustive_sparse(inst.A, inst.b, int(k)), [2], inst)
        assert res.best_param == 2.0
        assert res.best_error == pytest.approx(0.0, abs=1e-9)

    def test_grid_containing_exact_recovery_point(self):
        inst = _noiseless_instance()
        res = oracle_tune(
            lambda k: solve_exhaustive_sparse(inst.A, inst.b, int(k)),
            [1, 2, 3, 4],
            inst,
            metric="support",
        )
        assert res.best_error == 0.0
        assert res.best_param == 2.0

    def test_best_error_beats_independent_rescan(self):
        fmt = FixedPointFormat.uniform(10, 0.0, 1.0, 1)
        inst = make_instance(6, 10, 2, 0.1, fmt, seed=5, descent_iters=200)

        def method(k):
            return solve_exhaustive_sparse(inst.A, inst.b, int(k))

        grid = [1, 2, 3, 4]
        res = oracle_tune(method, grid, inst, metric="reconstruction")
        for k in grid:
            assert res.best_error <= reconstruction_error(inst.x_true, method(k)) + 1e-12

    def test_ties_take_smallest_parameter(self):
        inst = _noiseless_instance()
        constant = np.zeros(12)
        res = oracle_tune(lambda p: constant, [3.0, 1.0, 2.0], inst)
        assert res.best_param == 1.0

    def test_failing_points_skipped_and_recorded(self):
        inst = _noiseless_instance()

        def flaky(k):
            if k < 2:
                raise ValueError("too small")
            return solve_exhaustive_sparse(inst.A, inst.b, int(k))

        res = oracle_tune(flaky, [1, 2], inst)
        assert res.best_param == 2.0
        assert len(res.failures) == 1 and res.failures[0][0] == 1.0

    def test_all_points_failing_raises(self):
        inst = _noiseless_instance()

        def broken(_):
            raise RuntimeError("no")

        with pytest.raises(ValueError, match="every grid point"):
            oracle_tune(broken, [1, 2], inst)

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            oracle_tune(lambda p: np.zeros(12), [], _noiseless_instance())

    def test_multi_matches_single_metric_runs(self):
        fmt = FixedPointFormat.uniform(10, 0.0, 1.0, 1)
        inst = make_instance(5, 10, 3, 0.2, fmt, seed=9, descent_iters=200)

        def method(k):
            return solve_exhaustive_sparse(inst.A, inst.b, int(k))

        grid = [1, 2, 3, 4, 5]
        multi = oracle_tune_multi(method, grid, inst)
        for metric in ("reconstruction", "support"):
            single = oracle_tune(method, grid, inst, metric=metric)
            assert multi[metric].best_param == single.best_param
            assert multi[metric].best_error == single.best_error

    def test_reported_error_reproducible(self):
        inst = _noiseless_instance()

        def method(k):
            return solve_exhaustive_sparse(inst.A, inst.b, int(k))

        res = oracle_tune(method, [1, 2, 3], inst)
        again = reconstruction_error(inst.x_true, method(res.best_param))
        assert again == res.best_error
