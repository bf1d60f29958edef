"""Acceptance gate: one test per release criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS/FAIL lines. Thresholds and the reference-size config were frozen from
implementer oracle runs; see the module-level constants.
"""

import contextlib
import math
import time

import numpy as np
import pytest

from seqdesign.bridge import FitPredictRequest, remote_fit_predict
from seqdesign.data import fit_normalization
from seqdesign.errors import CapacityError
from seqdesign.experiments import ExperimentConfig, run_reference_size_sweep
from seqdesign.generator import GenerationTask, generate, inpaint
from seqdesign.metrics import (
    HistogramPair,
    MmdConfig,
    build_state_space,
    mape,
    mmd_squared,
    prd_curve,
)
from seqdesign.plots import read_result_csv
from seqdesign.regressor import RegressorSpec, fit
from seqdesign.stub_server import StubServer
from seqdesign.synthetic import make_problem

KNN1 = RegressorSpec(kind="knn", k=1)

# Frozen reference-size configuration (criterion 4). Bandwidth 0.05 and the
# <10% endpoint were confirmed by an oracle run on seeds 0, 7, and 42 before
# freezing; observed MAPE with seed 0 is 7.25% @100 and 5.21% @1600.
REFSIZE_PROBLEM = "quadratic-bowl"
REFSIZE_N_PARAMS = 3
REFSIZE_ROWS = 4_000
REFSIZE_DATASET_SEED = 3
REFSIZE_SPLIT = (0.7, 0)
REFSIZE_BANDWIDTH = 0.05
REFSIZE_CONDITIONS = 200
REFSIZE_SIZES = (100, 200, 400, 800, 1600)
REFSIZE_MAPE_LIMIT = 10.0


@contextlib.contextmanager
def verdict(number: int, title: str):
    try:
        yield
    except BaseException:
        print(f"[criterion {number}] FAIL: {title}")
        raise
    print(f"[criterion {number}] PASS: {title}")


def test_criterion_1_memorization_round_trip():
    with verdict(1, "memorization round-trip, 500/500 designs, < 60 s"):
        start = time.monotonic()
        problem = make_problem("linear-sum", 6)
        ds = problem.sample_dataset(500, seed=10)
        assert len(np.unique(ds.performances)) == 500
        result = generate(ds, KNN1, GenerationTask(ds.performances))
        state = fit_normalization(ds, "minmax")
        expected = state.transform(ds.rows, range(7))[:, 1:]
        assert result.designs_normalized.tobytes() == expected.tobytes()
        assert np.max(np.abs(result.designs - ds.parameters)) <= 1e-9
        assert time.monotonic() - start < 60.0


def test_criterion_2_prd_closed_form():
    with verdict(2, "PRD closed form on identical and disjoint supports"):
        samples = np.random.default_rng(0).uniform(size=(1000, 4))
        hist = build_state_space(samples, samples.copy(), num_clusters=20, seed=0)
        np.testing.assert_array_equal(hist.P, hist.Q)
        curve = prd_curve(hist, m=1001)
        for lam, (alpha, beta) in zip(curve.lambdas, curve.points):
            assert abs(alpha - min(lam, 1.0)) <= 1e-12
            assert abs(beta - min(1.0, 1.0 / lam)) <= 1e-12
        mid = 1001 // 2
        assert curve.lambdas[mid] == 1.0
        assert tuple(curve.points[mid]) == (1.0, 1.0)

        disjoint = HistogramPair([1.0, 0.0], [0.0, 1.0], np.zeros((2, 1)))
        np.testing.assert_array_equal(prd_curve(disjoint, m=1001).points, 0.0)


def brute_force_mmd(X, Y, sigma):
    k = lambda a, b: math.exp(-float(np.sum((a - b) ** 2)) / (2 * sigma**2))
    n, m = len(X), len(Y)
    xx = math.fsum(k(X[i], X[j]) for i in range(n) for j in range(n) if i != j)
    yy = math.fsum(k(Y[i], Y[j]) for i in range(m) for j in range(m) if i != j)
    xy = math.fsum(k(X[i], Y[j]) for i in range(n) for j in range(m))
    return xx / (n * (n - 1)) + yy / (m * (m - 1)) - 2 * xy / (n * m)


def test_criterion_3_mmd_oracle_equivalence():
    with verdict(3, "MMD matches brute force to 1e-12 on 200 instances"):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n, m, d = rng.integers(2, 51), rng.integers(2, 51), rng.integers(1, 4)
            X, Y = rng.normal(size=(n, d)), rng.normal(size=(m, d))
            sigma = float(rng.uniform(0.3, 3.0))
            got = mmd_squared(X, Y, MmdConfig(sigma))
            assert abs(got - brute_force_mmd(X, Y, sigma)) <= 1e-12
        hand = mmd_squared(np.array([[0.0], [1.0]]), np.array([[0.0], [1.0]]), MmdConfig(1.0))
        assert hand == pytest.approx(-0.39347, abs=1e-5)
        for _ in range(100):
            X = rng.normal(size=(int(rng.integers(2, 40)), 3))
            assert mmd_squared(X, X, MmdConfig(1.0)) <= 1e-12


def _refsize_config():
    config = ExperimentConfig()
    config.seed = 0
    config.dataset.problem = REFSIZE_PROBLEM
    config.dataset.n_params = REFSIZE_N_PARAMS
    config.dataset.n_rows = REFSIZE_ROWS
    config.dataset.seed = REFSIZE_DATASET_SEED
    config.split.fraction, config.split.seed = REFSIZE_SPLIT
    config.regressor.backend = "kernel"
    config.regressor.bandwidth = REFSIZE_BANDWIDTH
    config.study.num_conditions = REFSIZE_CONDITIONS
    return config


def test_criterion_4_reference_size_trend(tmp_path):
    with verdict(4, "reference-size sweep: MAPE@1600 < MAPE@100 and < 10%"):
        config = _refsize_config()
        path = run_reference_size_sweep(config, tmp_path, sizes=REFSIZE_SIZES)[0]
        _, rows = read_result_csv(path)
        by_size = {int(r[0]): float(r[1]) for r in rows}
        assert set(by_size) == set(REFSIZE_SIZES)
        assert by_size[1600] < by_size[100]
        assert by_size[1600] < REFSIZE_MAPE_LIMIT


def test_criterion_5_inpainting_contracts():
    with verdict(5, "inpainting: all-known verbatim, all-missing == generate"):
        start = time.monotonic()
        problem = make_problem("linear-sum", 5)
        ds = problem.sample_dataset(300, seed=2)
        cond = ds.performances[:50]
        known = ds.parameters[:50]

        all_known = inpaint(
            ds, KNN1, GenerationTask(cond, known_mask=np.ones(5, dtype=bool), known_values=known)
        )
        assert all_known.num_fits == 0
        np.testing.assert_array_equal(all_known.designs, known)
        achieved = problem.evaluate(all_known.designs)
        assert mape(cond[:, 0], achieved[:, 0]).percent == 0.0

        plain = generate(ds, KNN1, GenerationTask(cond))
        all_missing = inpaint(ds, KNN1, GenerationTask(cond, known_mask=np.zeros(5, dtype=bool)))
        assert plain.designs.tobytes() == all_missing.designs.tobytes()

        mask = np.array([True, False, True, False, False])
        partial = inpaint(
            ds,
            RegressorSpec(kind="kernel"),
            GenerationTask(cond, known_mask=mask, known_values=known[:, mask], noise_std=1e-4, noise_seed=0),
        )
        np.testing.assert_array_equal(partial.designs[:, mask], known[:, mask])
        assert time.monotonic() - start < 300.0


def test_criterion_6_consistency_and_noise():
    with verdict(6, "noise: std 0 collapses, std 1e-4 spreads, seeds reproduce"):
        problem = make_problem("linear-sum", 4)
        ds = problem.sample_dataset(500, seed=3)
        cond = np.tile(ds.performances[:1], (1500, 1))
        spec = RegressorSpec(kind="kernel")

        clean = generate(ds, spec, GenerationTask(cond))
        assert np.all(clean.designs == clean.designs[0])

        task = GenerationTask(cond, noise_std=1e-4, noise_seed=0)
        noisy_a = generate(ds, spec, task)
        noisy_b = generate(ds, spec, task)
        assert noisy_a.designs.tobytes() == noisy_b.designs.tobytes()
        assert np.all(noisy_a.designs.std(axis=0) > 0)
        achieved = problem.evaluate(noisy_a.designs)
        err = mape(cond[:, 0], achieved[:, 0]).percent
        assert np.isfinite(err)


def test_criterion_7_pipeline_determinism(tmp_path):
    with verdict(7, "CLI study reruns are byte-identical (CSV and SVG)"):
        from seqdesign.cli import main

        cfg = tmp_path / "exp.ini"
        cfg.write_text(
            "[run]\nseed = 0\n\n"
            "[dataset]\nkind = synthetic\nproblem = quadratic-bowl\n"
            "n_params = 3\nn_rows = 200\nseed = 1\n\n"
            "[regressor]\nbackend = kernel\nbandwidth = 0.05\n\n"
            "[study]\nnum_conditions = 30\n"
        )
        outputs = {}
        for run in ("a", "b"):
            out = tmp_path / run
            assert main(["gen", "--config", str(cfg), "--out", str(out)]) == 0
            csvs = sorted(out.glob("*.csv"))
            assert main(["plot", *map(str, csvs), "--out", str(out)]) == 0
            outputs[run] = {
                p.name: p.read_bytes() for p in sorted(out.iterdir()) if p.is_file()
            }
        assert outputs["a"].keys() == outputs["b"].keys()
        for name in outputs["a"]:
            assert outputs["a"][name] == outputs["b"][name], name


def test_criterion_8_bridge_conformance():
    with verdict(8, "stub bridge matches local kernel to 1e-9; capacity enforced"):
        with StubServer() as stub:
            rng = np.random.default_rng(4)
            for _ in range(100):
                n, d = int(rng.integers(2, 40)), int(rng.integers(1, 5))
                X, y = rng.uniform(size=(n, d)), rng.uniform(size=n)
                q = rng.uniform(size=(int(rng.integers(1, 4)), d))
                local = fit(RegressorSpec(kind="kernel"), X, y).predict_mean(q)
                remote = remote_fit_predict(stub.endpoint, FitPredictRequest(X, y, q)).means
                np.testing.assert_allclose(remote, local, atol=1e-9)

            with pytest.raises(CapacityError):
                FitPredictRequest(np.zeros((10_001, 1)), np.zeros(10_001), np.zeros((1, 1)))

            import requests

            from seqdesign.bridge import FIT_PREDICT_PATH

            body = {
                "request_id": "cap",
                "x_train": [[0.0]] * 10_001,
                "y_train": [0.0] * 10_001,
                "x_query": [[0.0]],
                "want_distribution": False,
            }
            resp = requests.post(stub.endpoint + FIT_PREDICT_PATH, json=body, timeout=60)
            assert resp.status_code == 413
