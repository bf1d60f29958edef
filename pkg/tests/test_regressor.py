import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seqdesign.errors import CapacityError, ValidationError
from seqdesign.regressor import (
    PredictedDistribution,
    RegressorSpec,
    fit,
    median_heuristic_bandwidth,
)

HAND_MEAN = np.exp(-2) / (1 + np.exp(-2))  # query x=0, refs y={0,1} at x={0,1}, h=0.5


def two_point_model(h=0.5):
    return fit(RegressorSpec(kind="kernel", bandwidth=h), [[0.0], [1.0]], [0.0, 1.0])


class TestPredictedDistribution:
    def test_invariants_enforced(self):
        with pytest.raises(ValidationError):
            PredictedDistribution([0.0, 1.0], [0.5, 0.5])  # edge/probability mismatch
        with pytest.raises(ValidationError):
            PredictedDistribution([0.0, 1.0, 0.5], [0.5, 0.5])  # non-increasing edges
        with pytest.raises(ValidationError):
            PredictedDistribution([0.0, 0.5, 1.0], [0.9, 0.2])  # sum != 1

    def test_mean_within_edges(self):
        d = PredictedDistribution([0.0, 0.5, 1.0], [0.25, 0.75])
        assert d.bin_edges[0] <= d.mean <= d.bin_edges[-1]


class TestFit:
    def test_capacity_error(self):
        X = np.zeros((10_001, 1))
        with pytest.raises(CapacityError, match="10000"):
            fit(RegressorSpec(kind="kernel", bandwidth=1.0), X, np.zeros(10_001))

    def test_single_row_reference_valid(self):
        m = fit(RegressorSpec(kind="kernel", bandwidth=1.0), [[0.0]], [5.0])
        assert m.predict_mean([[3.0]])[0] == pytest.approx(5.0)

    def test_refit_determinism(self):
        X = np.random.default_rng(0).uniform(size=(20, 3))
        y = np.random.default_rng(1).uniform(size=20)
        q = np.random.default_rng(2).uniform(size=(7, 3))
        spec = RegressorSpec(kind="kernel")
        a = fit(spec, X, y).predict_mean(q)
        b = fit(spec, X, y).predict_mean(q)
        np.testing.assert_array_equal(a, b)


class TestKernelBackend:
    def test_single_support_distribution(self):
        m = fit(RegressorSpec(kind="kernel", bandwidth=1.0), [[0.0]], [5.0])
        d = m.predict_distribution([[2.0]])[0]
        assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-9)
        b = int(np.argmax(d.probabilities))
        assert d.probabilities[b] == pytest.approx(1.0)
        assert d.bin_edges[b] <= 5.0 <= d.bin_edges[b + 1]
        assert d.mean == pytest.approx(5.0, abs=1e-6)

    def test_symmetric_query_mean_half(self):
        m = two_point_model(h=1.0)
        assert m.predict_mean([[0.5]])[0] == pytest.approx(0.5, abs=1e-12)

    def test_hand_kernel_case(self):
        assert two_point_model().predict_mean([[0.0]])[0] == pytest.approx(HAND_MEAN, abs=1e-12)

    def test_width_mismatch(self):
        with pytest.raises(ValueError, match="width"):
            two_point_model().predict_mean([[0.0, 1.0]])

    def test_underflow_falls_back_to_uniform(self):
        m = fit(RegressorSpec(kind="kernel", bandwidth=1e-3), [[0.0], [1.0]], [0.0, 1.0])
        means, diag = m.predict_mean_ex([[1e6]])
        assert diag.any_underflow
        assert means[0] == pytest.approx(0.5)  # uniform fallback = global mean

    def test_large_bandwidth_converges_to_global_mean(self):
        rng = np.random.default_rng(3)
        X, y = rng.uniform(size=(50, 2)), rng.uniform(size=50)
        m = fit(RegressorSpec(kind="kernel", bandwidth=1e6), X, y)
        got = m.predict_mean(rng.uniform(size=(5, 2)))
        assert np.max(np.abs(got - y.mean()) / abs(y.mean())) < 1e-6

    def test_median_heuristic_positive(self):
        X = np.random.default_rng(0).uniform(size=(30, 4))
        assert median_heuristic_bandwidth(X) > 0
        assert median_heuristic_bandwidth(np.zeros((5, 2))) == 1.0


class TestKnnBackend:
    def test_exact_match_memorization(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]])
        y = np.array([10.0, 20.0, 30.0])
        m = fit(RegressorSpec(kind="knn", k=1), X, y)
        np.testing.assert_array_equal(m.predict_mean(X), y)

    def test_tie_breaks_to_lowest_index(self):
        m = fit(RegressorSpec(kind="knn", k=1), [[0.0], [2.0]], [1.0, 9.0])
        assert m.predict_mean([[1.0]])[0] == 1.0  # equidistant, row 0 wins

    def test_k_equal_n_gives_global_mean(self):
        rng = np.random.default_rng(4)
        X, y = rng.uniform(size=(12, 2)), rng.uniform(size=12)
        m = fit(RegressorSpec(kind="knn", k=12), X, y)
        got = m.predict_mean(rng.uniform(size=(3, 2)))
        np.testing.assert_allclose(got, y.mean(), rtol=1e-12)

    def test_constant_target(self):
        m = fit(RegressorSpec(kind="knn", k=2), [[0.0], [1.0], [2.0]], [7.0, 7.0, 7.0])
        assert m.predict_mean([[5.0]])[0] == pytest.approx(7.0)


class TestSample:
    def test_within_support(self):
        m = fit(RegressorSpec(kind="kernel", bandwidth=1.0), [[0.0]], [5.0])
        v = m.sample([[0.0]], seed=0)[0]
        d = m.predict_distribution([[0.0]])[0]
        assert d.bin_edges[0] <= v <= d.bin_edges[-1]

    def test_seed_determinism(self):
        m = two_point_model()
        q = np.linspace(0, 1, 10)[:, None]
        np.testing.assert_array_equal(m.sample(q, seed=42), m.sample(q, seed=42))

    def test_two_bin_frequencies(self):
        # distribution with mass {0.3, 0.7}: y values 3 and 7 with weights via knn k=10
        X = np.zeros((10, 1))
        y = np.array([0.0] * 3 + [1.0] * 7)
        m = fit(RegressorSpec(kind="knn", k=10, num_bins=2), X, y)
        draws = m.sample(np.zeros((10_000, 1)), seed=1)
        frac_high = np.mean(draws > 0.5)
        assert abs(frac_high - 0.7) < 0.02


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(
        arrays(np.float64, (8, 2), elements=st.floats(-5, 5)),
        arrays(np.float64, (8,), elements=st.floats(-10, 10)),
        arrays(np.float64, (4, 2), elements=st.floats(-20, 20)),
        st.sampled_from(["kernel", "knn"]),
    )
    def test_means_are_convex_combinations(self, X, y, q, kind):
        spec = RegressorSpec(kind=kind, bandwidth=0.7, k=3)
        means = fit(spec, X, y).predict_mean(q)
        assert np.all(means >= y.min() - 1e-9)
        assert np.all(means <= y.max() + 1e-9)

    @settings(max_examples=25, deadline=None)
    @given(
        arrays(np.float64, (8, 2), elements=st.floats(-5, 5)),
        arrays(np.float64, (8,), elements=st.floats(-10, 10)),
        arrays(np.float64, (3, 2), elements=st.floats(-5, 5)),
    )
    def test_distributions_normalized(self, X, y, q):
        dists = fit(RegressorSpec(kind="kernel", bandwidth=0.5), X, y).predict_distribution(q)
        for d in dists:
            assert abs(d.probabilities.sum() - 1.0) <= 1e-9
            assert np.all(d.probabilities >= 0)
