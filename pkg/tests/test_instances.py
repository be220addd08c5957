import numpy as np
import pytest

from sparsequbo import (
    FixedPointFormat,
    encode_vector,
    generate_low_coherence_matrix,
    make_instance,
    mutual_coherence,
    sample_sparse_signal,
    synthesize_measurements,
)
from sparsequbo.instances import load_matrix_csv, normalize_columns, save_matrix_csv


class TestMutualCoherence:
    def test_orthogonal_columns(self):
        assert mutual_coherence(np.eye(2)) == 0.0

    def test_identical_columns(self):
        a = np.array([[0.6], [0.8]])
        assert mutual_coherence(np.hstack([a, a])) == pytest.approx(1.0)

    def test_matches_pairwise_loop(self):
        rng = np.random.default_rng(1)
        A = normalize_columns(rng.standard_normal((4, 6)))
        worst = 0.0
        for i in range(6):
            for j in range(6):
                if i != j:
                    worst = max(worst, abs(float(A[:, i] @ A[:, j])))
        assert mutual_coherence(A) == pytest.approx(worst, abs=1e-15)

    def test_single_column_rejected(self):
        with pytest.raises(ValueError):
            mutual_coherence(np.ones((3, 1)))

    def test_invariant_to_permutation_and_sign_flips(self):
        rng = np.random.default_rng(5)
        A = normalize_columns(rng.standard_normal((5, 8)))
        perm = rng.permutation(8)
        signs = rng.choice([-1.0, 1.0], size=8)
        assert mutual_coherence(A[:, perm] * signs) == pytest.approx(
            mutual_coherence(A), abs=1e-14
        )


class TestNormalizeColumns:
    def test_unit_norms(self):
        A = normalize_columns(np.random.default_rng(0).standard_normal((5, 7)))
        assert np.abs(np.linalg.norm(A, axis=0) - 1.0).max() < 1e-12

    def test_idempotent(self):
        A = normalize_columns(np.random.default_rng(0).standard_normal((5, 7)))
        # renormalizing divides by norms within an ulp of 1
        assert np.allclose(normalize_columns(A), A, rtol=0.0, atol=5e-16)

    def test_zero_column_redrawn_with_rng(self):
        A = np.zeros((3, 2))
        A[:, 0] = [1.0, 0.0, 0.0]
        out = normalize_columns(A, np.random.default_rng(0))
        assert np.abs(np.linalg.norm(out, axis=0) - 1.0).max() < 1e-12

    def test_zero_column_rejected_without_rng(self):
        with pytest.raises(ValueError):
            normalize_columns(np.zeros((3, 2)))


class TestLowCoherenceMatrix:
    def test_square_case_converges_to_orthonormal(self):
        A = generate_low_coherence_matrix(4, 4, alpha=0.05, K=500, seed=0)
        assert mutual_coherence(A) <= 1e-3

    def test_k_zero_is_normalized_initialization(self):
        A = generate_low_coherence_matrix(3, 5, K=0, seed=9)
        rng = np.random.default_rng(9)
        expected = normalize_columns(rng.standard_normal((3, 5)), rng)
        assert np.array_equal(A, expected)

    def test_descent_reduces_coherence(self):
        init = generate_low_coherence_matrix(8, 16, alpha=0.02, K=0, seed=7)
        final = generate_low_coherence_matrix(8, 16, alpha=0.02, K=2000, seed=7)
        assert mutual_coherence(final) < mutual_coherence(init)

    def test_columns_stay_normalized(self):
        A = generate_low_coherence_matrix(6, 12, K=50, seed=3)
        assert np.abs(np.linalg.norm(A, axis=0) - 1.0).max() < 1e-12

    def test_bit_reproducible(self):
        A1 = generate_low_coherence_matrix(5, 10, K=100, seed=42)
        A2 = generate_low_coherence_matrix(5, 10, K=100, seed=42)
        assert np.array_equal(A1, A2)

    def test_gram_distance_shrinks_across_seeds(self):
        # square case: Frobenius distance to the identity Gram drops for
        # every seed as the iterate heads toward an orthonormal basis
        for seed in range(20):
            A0 = generate_low_coherence_matrix(8, 8, K=0, seed=seed)
            A1 = generate_low_coherence_matrix(8, 8, K=300, seed=seed)
            d0 = np.linalg.norm(A0.T @ A0 - np.eye(8))
            d1 = np.linalg.norm(A1.T @ A1 - np.eye(8))
            assert d1 < d0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            generate_low_coherence_matrix(0, 4)
        with pytest.raises(ValueError):
            generate_low_coherence_matrix(4, 1)
        with pytest.raises(ValueError):
            generate_low_coherence_matrix(4, 8, alpha=0.0)
        with pytest.raises(ValueError):
            generate_low_coherence_matrix(4, 8, K=-1)


class TestSampleSparseSignal:
    def test_zero_cardinality(self):
        fmt = FixedPointFormat.uniform(10, 0.0, 1.0, 1)
        assert not sample_sparse_signal(10, 0, fmt, seed=0).any()

    def test_binary_format_forces_ones(self):
        fmt = FixedPointFormat.uniform(16, 0.0, 1.0, 1)
        x = sample_sparse_signal(16, 3, fmt, seed=4)
        assert np.count_nonzero(x) == 3
        assert set(x[x != 0]) == {1.0}

    def test_two_bit_values_in_one_two_three(self):
        fmt = FixedPointFormat.uniform(80, 0.0, 1.0, 2)
        x = sample_sparse_signal(80, 10, fmt, seed=5)
        assert np.count_nonzero(x) == 10
        assert set(x[x != 0]) <= {1.0, 2.0, 3.0}

    def test_all_nonzero_values_hit_eventually(self):
        fmt = FixedPointFormat.uniform(30, 0.0, 1.0, 2)
        seen = set()
        for seed in range(20):
            x = sample_sparse_signal(30, 10, fmt, seed=seed)
            seen |= set(x[x != 0])
        assert seen == {1.0, 2.0, 3.0}

    def test_signed_format_excludes_zero_value(self):
        fmt = FixedPointFormat.uniform(12, -1.0, 1.0, 2)
        x = sample_sparse_signal(12, 12, fmt, seed=6)
        assert set(x) <= {-1.0, 1.0, 2.0}

    def test_cardinality_out_of_range(self):
        fmt = FixedPointFormat.uniform(4, 0.0, 1.0, 1)
        with pytest.raises(ValueError):
            sample_sparse_signal(4, 5, fmt, seed=0)

    def test_values_encodable(self):
        fmt = FixedPointFormat.uniform(9, -2.0, 0.5, 3)
        x = sample_sparse_signal(9, 4, fmt, seed=8)
        encode_vector(fmt, x)  # must not raise


class TestSynthesizeMeasurements:
    def test_noiseless_is_exact_product(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((5, 8))
        x = rng.standard_normal(8)
        assert np.array_equal(synthesize_measurements(A, x, 0.0, seed=1), A @ x)

    def test_zero_signal_noiseless(self):
        A = np.random.default_rng(0).standard_normal((5, 8))
        assert not synthesize_measurements(A, np.zeros(8), 0.0, seed=1).any()

    def test_noise_variance(self):
        A = np.eye(2500)
        x = np.zeros(2500)
        samples = np.concatenate(
            [synthesize_measurements(A, x, 0.1, seed=s) for s in range(4)]
        )
        assert samples.var() == pytest.approx(0.01, rel=0.05)

    def test_deterministic_given_seed(self):
        A = np.random.default_rng(0).standard_normal((5, 8))
        x = np.random.default_rng(1).standard_normal(8)
        b1 = synthesize_measurements(A, x, 0.3, seed=9)
        b2 = synthesize_measurements(A, x, 0.3, seed=9)
        assert np.array_equal(b1, b2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            synthesize_measurements(np.eye(3), np.zeros(4), 0.0, seed=0)

    def test_negative_sigma(self):
        with pytest.raises(ValueError):
            synthesize_measurements(np.eye(3), np.zeros(3), -0.1, seed=0)


class TestMakeInstance:
    def test_invariants_and_determinism(self):
        fmt = FixedPointFormat.uniform(12, 0.0, 1.0, 2)
        inst1 = make_instance(6, 12, 4, 0.1, fmt, seed=77, descent_iters=50)
        inst2 = make_instance(6, 12, 4, 0.1, fmt, seed=77, descent_iters=50)
        assert np.array_equal(inst1.A, inst2.A)
        assert np.array_equal(inst1.b, inst2.b)
        assert np.count_nonzero(inst1.x_true) == 4
        encode_vector(fmt, inst1.x_true)
        assert np.abs(np.linalg.norm(inst1.A, axis=0) - 1.0).max() < 1e-12


class TestCsv:
    def test_matrix_round_trip_exact(self, tmp_path):
        A = np.random.default_rng(3).standard_normal((4, 7)) * 1e3
        path = tmp_path / "a.csv"
        save_matrix_csv(path, A)
        assert np.array_equal(load_matrix_csv(path), A)

    def test_vector_round_trip(self, tmp_path):
        v = np.array([0.1, -2.5e-17, 3.0])
        path = tmp_path / "v.csv"
        save_matrix_csv(path, v[None, :])
        assert np.array_equal(load_matrix_csv(path)[0], v)
