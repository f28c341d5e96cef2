import numpy as np
import pytest

import adukf


def test_variant_registry():
    names = adukf.variant_names()
    assert len(names) == 16
    assert names[0] == "ukf-add"
    assert "cukf-fully-aug-nlp-grad-hess" in names


def test_simulate_shapes_and_determinism():
    a = adukf.simulate(seed=3)
    b = adukf.simulate(seed=3)
    assert a["x"].shape == (337, 6)
    assert a["y"].shape == (337, 3)
    assert np.array_equal(a["y"], b["y"])
    assert not np.array_equal(a["y"], adukf.simulate(seed=4)["y"])
    assert a["x"][0] == pytest.approx([4.09, 10.52, 11.04, 2.57, 0.96, 2.02])


def test_estimate_constrained_nonnegative():
    sim = adukf.simulate(seed=1)
    out = adukf.estimate("cukf-add", sim["t"], sim["u"], sim["y"])
    assert out["xhat"].shape == (337, 6)
    assert out["xhat"].min() >= -1e-8
    assert len(out["cost_evaluations"]) == 336 * 13


def test_estimate_matches_square_root():
    sim = adukf.simulate(seed=2)
    add = adukf.estimate("ukf-add", sim["t"], sim["u"], sim["y"])["xhat"]
    sr = adukf.estimate("ukf-sr", sim["t"], sim["u"], sim["y"])["xhat"]
    assert np.max(np.abs(add - sr)) <= 1e-6 * np.max(np.abs(add))


def test_nrmse_examples():
    assert adukf.nrmse([2.0, 2.0], [1.0, 2.0]) == pytest.approx(0.2)
    truth = np.ones((4, 6))
    assert adukf.group_nrmse(2 * truth, truth, list(adukf.UNMEASURED)) == pytest.approx(1.0)


def test_benchmark_rows():
    rows = adukf.benchmark(seeds=[1], variants=["ukf-add", "cukf-add-nlp-grad"])
    assert [r["variant"] for r in rows] == ["ukf-add", "ukf-add", "cukf-add-nlp-grad"]
    assert rows[0]["median_iters"] is None
    assert rows[2]["median_cost_evals"] > 0
    assert all(r["error"] == "" for r in rows)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        adukf.estimate("nope", [0.0], [0.0], np.zeros((1, 3)))
    with pytest.raises(ValueError):
        adukf.simulate(config='{"scenario": {"horizon": 1}}')
    with pytest.raises(ArithmeticError):
        adukf.psd_cholesky(np.diag([1.0, -1.0]))


def test_solve_qp_example():
    x, mu, _ = adukf.solve_qp(2 * np.eye(2), np.array([2.0, -2.0]), -np.eye(2), np.zeros(2), np.ones(2))
    assert x == pytest.approx([0.0, 1.0], abs=1e-12)
    assert mu == pytest.approx([2.0, 0.0], abs=1e-12)
