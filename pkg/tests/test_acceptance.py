"""Acceptance suite: desk-scale quantitative reproductions.

Every stochastic criterion uses the fixed seeds written below; tolerances
are sized for the stated sample counts. Each test prints one pass line
(visible with ``pytest -s``); a failure carries the measured value.

Run just this module with::

    pytest tests/test_acceptance.py -v -s
"""
import math
import statistics

import numpy as np
import pytest

from spasir.analysis import fit_power_law, loglog_regression, long_edge_prob_bound
from spasir.contagion import ContagionScenario
from spasir.generator import SpaGraph, SpaParams, expected_in_degree_closed, generate
from spasir.geometry import MetricConfig
from spasir.harness import ExperimentConfig, parse_records, run_experiment
from spasir.sir import InfectionConfig, run_sir
from spasir.verify import check_percolation_coupling

# documented acceptance seeds
MEAN_DEGREE_SEED = 1_234_567         # one shared n=1e5 graph for the degree checks
INDEGREE_SEED_BASE = 70_000          # expected in-degree check: graphs 70000..70199
JUMP_TREND_MASTER_SEED = 20_260_811  # jump-decay regression experiment
CONTRAST_MASTER_SEED = 20_260_812    # scenario-contrast experiment


def report(name: str, detail: str) -> None:
    print(f"ACCEPT pass {name}: {detail}")


@pytest.fixture(scope="session")
def graph_100k():
    return generate(SpaParams(n=100_000, a1=0.5, a2=1.0, seed=MEAN_DEGREE_SEED))


def test_closed_form_expected_in_degree():
    """Mean in-degree of v_10 (n=2000, 200 graphs) vs 2(sqrt(200)-1)."""
    runs = 200
    samples = [
        float(generate(SpaParams(n=2000, a1=0.5, a2=1.0, seed=INDEGREE_SEED_BASE + s)).in_degree[10])
        for s in range(runs)
    ]
    closed = expected_in_degree_closed(10, 2000, 0.5, 1.0)
    assert closed == pytest.approx(26.284271247461902)
    mean = statistics.fmean(samples)
    se = statistics.stdev(samples) / math.sqrt(runs)
    tolerance = 2.0 + 3.0 * se
    assert abs(mean - closed) <= tolerance, f"mean {mean:.3f} vs {closed:.3f} (tol {tolerance:.3f})"
    report("closed_form_expected_in_degree",
           f"mean {mean:.3f} vs closed form {closed:.3f}, tolerance {tolerance:.3f}")


def test_asymptotic_mean_degree(graph_100k):
    """Empirical mean in-degree at n=1e5 within [1.9, 2.1] of a2/(1-a1)=2."""
    mean = graph_100k.mean_in_degree()
    assert 1.9 <= mean <= 2.1, f"mean in-degree {mean:.4f}"
    report("asymptotic_mean_degree", f"mean in-degree {mean:.4f} in [1.9, 2.1]")


def test_power_law_exponent(graph_100k):
    """Cumulative tail exponent at n=1e5 above ceil(log^2 n) within [1.7, 2.3]."""
    k_min = math.ceil(math.log(graph_100k.n) ** 2)
    assert k_min == 133
    fit = fit_power_law(graph_100k.in_degree[1:], k_min)
    assert 1.7 <= fit.exponent <= 2.3, f"exponent {fit.exponent:.3f}"
    report("power_law_exponent",
           f"exponent {fit.exponent:.3f} in [1.7, 2.3] (k_min {k_min}, r2 {fit.r2:.3f})")


def test_oracle_equivalence():
    """Grid-indexed generator equals the brute-force oracle, 20 seeds at n=2000."""
    for seed in range(20):
        params = SpaParams(n=2000, a1=0.5, a2=1.0, seed=seed)
        fast = generate(params, method="grid")
        slow = generate(params, method="bruteforce")
        assert np.array_equal(fast.edges, slow.edges), f"seed {seed}"
    report("oracle_equivalence", "20 seeds, exact edge-set equality at n=2000")


def test_percolation_coupling():
    """SIR with coupled draws equals BFS layers of the potential graph, 100 trials."""
    detail = check_percolation_coupling()
    report("percolation_coupling", detail)


def test_two_vertex_transmission_frequency():
    """Empirical P(transmit) within 3 SE of beta over 1e5 runs, both scenarios."""
    params = SpaParams(n=2, a1=0.5, a2=1.0, seed=0)
    positions = np.array([[np.nan], [0.1], [0.9]])
    edges = np.array([[2, 1]], dtype=np.int64)
    graph = SpaGraph(params, positions, edges, np.array([0, 1, 0], dtype=np.int64))
    runs = 100_000
    cases = {
        "B": 0.3934693402873666,                       # 1 - e^(-1), gamma=1, mean deg 2
        "A": 0.7009387213244003,                       # 1 - e^(-1/(2(sqrt2 - 1)))
    }
    details = []
    for kind, beta in cases.items():
        sc = ContagionScenario.from_gamma(kind, 1.0)
        adjacency = graph.undirected_neighbors()
        hits = 0
        for seed in range(runs):
            out = run_sir(
                graph, InfectionConfig(scenario=sc, seed=seed, origin="oldest"),
                adjacency=adjacency,
            )
            hits += out.attack_size - 1
        freq = hits / runs
        se = math.sqrt(beta * (1.0 - beta) / runs)
        assert abs(freq - beta) <= 3.0 * se, f"scenario {kind}: {freq:.5f} vs {beta:.5f}"
        details.append(f"{kind}: {freq:.5f} vs {beta:.5f} (3SE {3 * se:.5f})")
    report("two_vertex_transmission_frequency", "; ".join(details))


@pytest.fixture(scope="session")
def jump_trend_records(tmp_path_factory):
    """Reference protocol: scenario A, gamma=10, n=1000..10000, 1 graph + 50 runs."""
    config = ExperimentConfig(
        scenarios=("A",), gammas=(10.0,), master_seed=JUMP_TREND_MASTER_SEED,
    )
    out = tmp_path_factory.mktemp("jump_trend") / "experiments.csv"
    run_experiment(config, out)
    return parse_records(out)


def test_jump_decay_regression_trend(jump_trend_records):
    """Log-log slope of longest jump vs n is negative and <= -0.1.

    A single execution of this protocol is one noisy draw (the fit's R^2
    is small by nature); the reproducible claim is the sign-and-threshold
    band, not a point value for the slope.
    """
    assert len(jump_trend_records) == 500
    points = [(r.n, r.longest_jump) for r in jump_trend_records]
    res = loglog_regression(points)
    assert -1.2 <= res.slope <= -0.1, f"slope {res.slope:.4f} (r2 {res.r2:.3f})"
    report(
        "jump_decay_regression_trend",
        f"slope {res.slope:.4f} in [-1.2, -0.1], intercept {res.intercept:.3f}, "
        f"r2 {res.r2:.3f}, {res.n_excluded} zero-jump rows excluded",
    )


def test_scenario_contrast():
    """Scenario B jumps at least as far as A at gamma=1; the gap shrinks at gamma=100."""
    config = ExperimentConfig(
        ns=(5000, 10000), gammas=(1.0, 100.0), master_seed=CONTRAST_MASTER_SEED,
    )
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        out = f"{tmp}/experiments.csv"
        run_experiment(config, out)
        records = parse_records(out)
    details = []
    for n in (5000, 10000):
        med = {
            (sc, g): statistics.median(
                r.longest_jump for r in records
                if r.n == n and r.scenario == sc and r.gamma == g
            )
            for sc in ("A", "B") for g in (1.0, 100.0)
        }
        gap_low = med[("B", 1.0)] - med[("A", 1.0)]
        gap_high = med[("B", 100.0)] - med[("A", 100.0)]
        assert med[("B", 1.0)] >= med[("A", 1.0)], f"n={n}: medians {med}"
        assert gap_high <= gap_low, f"n={n}: gap {gap_low:.4f} -> {gap_high:.4f}"
        details.append(f"n={n}: gap {gap_low:.4f} -> {gap_high:.4f}")
    report("scenario_contrast", "; ".join(details))


def test_bound_behavior():
    """Pure formula evaluation: decreasing over n = 1e3/1e6/1e9 and < 1e-2 at 1e9."""
    cfg = MetricConfig(1, math.inf)
    vals = [long_edge_prob_bound(n, 0.5, 1.0, 10.0, cfg, 0.05) for n in (1e3, 1e6, 1e9)]
    assert vals[0] > vals[1] > vals[2], f"not decreasing: {vals}"
    assert vals[2] < 1e-2, f"bound at n=1e9 is {vals[2]:.3e}"
    report("bound_behavior", "bound " + " > ".join(f"{v:.3e}" for v in vals) + " < 1e-2")
