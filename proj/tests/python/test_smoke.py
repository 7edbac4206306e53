import json
import math

import pytest

import repcap


def test_entropy_and_divergences():
    assert repcap.entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert repcap.entropy([1.0 / 256] * 256) == pytest.approx(8.0)
    assert repcap.binary_entropy(0.2) == pytest.approx(0.7219280948873623)
    assert repcap.kl_divergence([0.2, 0.8], [0.5, 0.5]) == pytest.approx(
        1 - repcap.binary_entropy(0.2)
    )
    with pytest.raises(repcap.RepcapError):
        repcap.kl_divergence([0.5, 0.5], [1.0, 0.0])


def test_mutual_information_and_markov():
    c = 0.11
    joint = [[0.5 * (1 - c), 0.5 * c], [0.5 * c, 0.5 * (1 - c)]]
    assert repcap.mutual_information(joint) == pytest.approx(
        1 - repcap.binary_entropy(c)
    )
    assert repcap.entropy_rate_markov([[0.9, 0.1], [0.1, 0.9]]) == pytest.approx(
        repcap.binary_entropy(0.1)
    )


def test_capacity_matches_closed_form():
    p = 0.11
    t = [[1 - p, p], [p, 1 - p]]
    r = repcap.capacity(t)
    assert r["capacity_bits"] == pytest.approx(1 - repcap.binary_entropy(p), abs=1e-8)
    assert r["optimal_input"][0] == pytest.approx(0.5, abs=1e-8)


def test_rate_distortion():
    pt = repcap.rate_distortion_point(
        [0.7, 0.3], [[0.0, 1.0], [1.0, 0.0]], math.log2(0.1 / 0.9)
    )
    target = repcap.binary_entropy(0.3) - repcap.binary_entropy(0.1)
    assert pt["rate"] == pytest.approx(target, abs=1e-6)
    assert pt["distortion"] == pytest.approx(0.1, abs=1e-9)
    curve = repcap.rd_curve([0.5, 0.5], 9)
    assert curve[0]["rate"] == pytest.approx(1.0, abs=1e-6)
    assert curve[-1]["rate"] == 0.0


def test_representation_rate_and_support():
    assert repcap.representation_rate(128, 31, 1024) == 3.875
    audit = repcap.effective_support([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 0.0]])
    assert audit["distinct_nonzero_count"] == 2
    assert audit["q_tilde"] == pytest.approx(1.0)


def test_etf_residuals_exact_fixture():
    s = math.sqrt(3.0) / 2.0
    res = repcap.etf_residuals([[1.0, 0.0], [-0.5, s], [-0.5, -s]])
    assert res["gram_deviation"] < 1e-10
    assert res["mean_sum_norm"] < 1e-10


def test_run_experiment_deterministic():
    cfg = {
        "theorem": "thm3",
        "source": {"kind": "bernoulli", "p": 0.2},
        "n": 10,
        "epsilon": 0.3,
        "rates": [0.5, 1.0],
        "trials": 200,
        "seed": 3,
    }
    a = repcap.run_experiment(json.dumps(cfg), 1)
    b = repcap.run_experiment(json.dumps(cfg), 4)
    assert a == b
    rep = json.loads(a)
    assert rep["theorem"] == "thm3"
    assert len(rep["records"]) == 2


def test_theorem7_bound():
    assert repcap.theorem7_bound(0.1, 0.05, 2.0, 3.0) == pytest.approx(0.4)
