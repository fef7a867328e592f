"""Executable invariant checks behind ``spasir verify``.

Each check returns a one-line detail string on success and raises
:class:`VerificationFailure` with the offending seed/edge on failure, so a
red check can be replayed in isolation. The fast level keeps graph sizes at
or below 2000; the full level adds the n = 10^5 degree checks.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import stats

from .analysis import (
    critical_time_m,
    critical_time_m_i,
    fit_power_law,
    long_edge_prob_bound,
    phi_bound,
)
from .contagion import ContagionScenario, beta_from_contacts, beta_vector
from .generator import (
    SpaGraph,
    SpaParams,
    arrival_sphere_volumes,
    generate,
    sphere_volume_modified,
)
from .geometry import MetricConfig, ball_volume, radius_for_volume, torus_distance
from .harness import ExperimentConfig, ExperimentRecord, run_experiment
from .sir import InfectionConfig, build_potential_graph, infection_graph_at, run_sir

__all__ = ["VerificationFailure", "run_checks", "sphere_containment_violations", "CHECKS"]


class VerificationFailure(AssertionError):
    """An invariant check failed; the message carries replay information."""


_METRICS = [
    MetricConfig(1, math.inf),
    MetricConfig(1, 2),
    MetricConfig(2, 1),
    MetricConfig(2, 2),
    MetricConfig(2, math.inf),
    MetricConfig(3, 2),
]


def check_metric_properties() -> str:
    """Symmetry is exact and the triangle inequality holds on random triples."""
    rng = np.random.default_rng(20_240_101)
    triples = 10_000
    for cfg in _METRICS:
        pts = rng.random((triples, 3, cfg.d))
        for x, y, z in pts:
            dxy = torus_distance(x, y, cfg)
            if dxy != torus_distance(y, x, cfg):
                raise VerificationFailure(f"symmetry broken for {cfg} at x={x}, y={y}")
            if dxy > torus_distance(x, z, cfg) + torus_distance(z, y, cfg) + 1e-12:
                raise VerificationFailure(f"triangle inequality broken for {cfg} at {x},{y},{z}")
    return f"{triples} triples x {len(_METRICS)} metrics"


def check_ball_measure() -> str:
    """In d=1 the measure of a torus ball matches ball_volume within 3 SE."""
    cfg = MetricConfig(1, math.inf)
    rng = np.random.default_rng(7_777)
    x = np.array([0.37])
    samples = 200_000
    ys = rng.random((samples, 1))
    delta = np.abs(ys - x)
    dist = np.minimum(delta, 1.0 - delta)[:, 0]
    for r in (0.1, 0.25, 0.4):
        vol = ball_volume(r, cfg)
        freq = float((dist <= r).mean())
        se = math.sqrt(vol * (1.0 - vol) / samples)
        if abs(freq - vol) > 3.0 * se:
            raise VerificationFailure(
                f"ball measure at r={r}: frequency {freq:.5f} vs volume {vol:.5f} (3SE={3*se:.5f})"
            )
    return f"{samples} points, radii 0.1/0.25/0.4"


def check_radius_roundtrip() -> str:
    """radius_for_volume inverts ball_volume to relative error < 1e-12."""
    for cfg in _METRICS:
        for r in (1e-6, 1e-3, 0.1, 0.4):
            back = radius_for_volume(ball_volume(r, cfg), cfg)
            if abs(back - r) > 1e-12 * r:
                raise VerificationFailure(f"round trip off at r={r}, {cfg}: {back!r}")
    return "r in {1e-6,1e-3,0.1,0.4} across metrics"


def sphere_containment_violations(graph: SpaGraph) -> list:
    """Edges whose head sphere did not contain the arriving vertex.

    Returns (j, i) pairs; empty means every recorded edge is geometrically
    justified at its arrival time.
    """
    if len(graph.edges) == 0:
        return []
    vols = arrival_sphere_volumes(graph)
    lengths = graph.edge_lengths()
    covered = vols >= 1.0
    radii = radius_for_volume(np.where(covered, 1.0, vols), graph.params.metric)
    bad = ~(covered | (lengths <= radii))
    return [(int(j), int(i)) for j, i in graph.edges[bad]]


def check_sphere_containment() -> str:
    """Every generated edge satisfies the containment rule, both variants."""
    for variant in ("modified", "original"):
        for metric in (MetricConfig(1, math.inf), MetricConfig(2, 2)):
            params = SpaParams(n=1000, a1=0.5, a2=1.0, metric=metric, variant=variant, seed=97)
            bad = sphere_containment_violations(generate(params))
            if bad:
                j, i = bad[0]
                raise VerificationFailure(
                    f"edge ({j} -> {i}) violates containment ({variant}, {metric}, seed 97)"
                )
    return "n=1000, modified+original, d=1 and d=2"


def check_oracle_equivalence() -> str:
    """Grid-indexed generation equals the brute-force oracle edge for edge."""
    for seed in range(20):
        for variant in ("modified", "original"):
            params = SpaParams(n=2000, a1=0.5, a2=1.0, variant=variant, seed=seed)
            fast = generate(params, method="grid")
            slow = generate(params, method="bruteforce")
            if not np.array_equal(fast.edges, slow.edges):
                raise VerificationFailure(f"edge sets differ for seed {seed} ({variant})")
    return "20 seeds x 2 variants at n=2000"


def check_poisson_binomial() -> str:
    """in_degree of vertex 5 (n=500) matches its Poisson-binomial law.

    The oracle is the direct convolution of the 495 Bernoulli success
    probabilities; agreement is a chi-squared test at significance 0.01.
    """
    n, i, runs = 500, 5, 500
    probs = sphere_volume_modified(i, np.arange(i + 1, n + 1, dtype=float), 0.5, 1.0)
    pmf = np.array([1.0])
    for p in probs:
        pmf = np.convolve(pmf, [1.0 - p, p])
    observed = np.zeros(pmf.size)
    for seed in range(runs):
        g = generate(SpaParams(n=n, a1=0.5, a2=1.0, seed=10_000 + seed))
        observed[int(g.in_degree[i])] += 1
    # pool degree values into bins with expected count >= 5
    expected = pmf * runs
    bins_obs, bins_exp, acc_o, acc_e = [], [], 0.0, 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            bins_obs.append(acc_o)
            bins_exp.append(acc_e)
            acc_o = acc_e = 0.0
    bins_obs[-1] += acc_o
    bins_exp[-1] += acc_e
    chi2, pvalue = stats.chisquare(bins_obs, bins_exp)
    if pvalue < 0.01:
        raise VerificationFailure(
            f"chi-squared p={pvalue:.4f} < 0.01 over {len(bins_obs)} bins (seeds 10000..10499)"
        )
    return f"p={pvalue:.3f}, {len(bins_obs)} bins, {runs} graphs"


def check_beta_properties() -> str:
    """Scenario betas stay in [0,1], B is constant, A grows with birth time,
    and the contact-rate composition identity holds to 1e-12."""
    g = generate(SpaParams(n=500, a1=0.5, a2=1.0, seed=3))
    for gamma in (1.0, 10.0, 100.0):
        beta_a = beta_vector(g, ContagionScenario.from_gamma("A", gamma))[1:]
        beta_b = beta_vector(g, ContagionScenario.from_gamma("B", gamma))[1:]
        for name, arr in (("A", beta_a), ("B", beta_b)):
            if not ((arr >= 0.0) & (arr <= 1.0)).all():
                raise VerificationFailure(f"beta_{name} leaves [0,1] at gamma={gamma}")
        if np.unique(beta_b).size != 1:
            raise VerificationFailure(f"beta_B not constant at gamma={gamma}")
        if not (np.diff(beta_a) >= 0.0).all():
            raise VerificationFailure(f"beta_A not nondecreasing in birth time at gamma={gamma}")
    rng = np.random.default_rng(44)
    for tau, k1, k2 in rng.random((1000, 3)) * [1.0, 50.0, 50.0]:
        combined = beta_from_contacts(tau, k1 + k2)
        split = 1.0 - (1.0 - beta_from_contacts(tau, k1)) * (1.0 - beta_from_contacts(tau, k2))
        if abs(combined - split) > 1e-12 * max(combined, 1e-300):
            raise VerificationFailure(f"composition identity off at tau={tau}, k1={k1}, k2={k2}")
    return "range/constancy/monotonicity at gamma 1,10,100; 1000 composition triples"


def check_percolation_coupling() -> str:
    """A run's infection times equal BFS depths in its potential graph."""
    ns = (500, 1000, 1500, 2000)
    gammas = (1.0, 10.0, 100.0)
    trial = 0
    for rep in range(25):
        params = SpaParams(n=ns[rep % 4], a1=0.5, a2=1.0, seed=500 + rep)
        graph = generate(params)
        for scenario in ("A", "B"):
            for k in range(2):
                seed = 9_000 + 100 * rep + 10 * k + (0 if scenario == "A" else 1)
                sc = ContagionScenario.from_gamma(scenario, gammas[(rep + k) % 3])
                cfg = InfectionConfig(scenario=sc, seed=seed, origin="random")
                outcome = run_sir(graph, cfg)
                pg = build_potential_graph(graph, sc, seed)
                sub = infection_graph_at(pg, outcome.origin, graph.n)
                times = {
                    int(v): int(t) for v, t in enumerate(outcome.infection_time) if t >= 0
                }
                if times != sub.depth:
                    raise VerificationFailure(
                        f"coupling broken: graph seed {params.seed}, sir seed {seed}, "
                        f"scenario {scenario}"
                    )
                trial += 1
    return f"{trial} (graph, seed) trials at n <= 2000"


def check_gamma_monotonicity() -> str:
    """Under shared pair draws, attack size and longest jump grow with gamma."""
    for rep in range(25):
        params = SpaParams(n=500 + 60 * rep, a1=0.5, a2=1.0, seed=2_000 + rep)
        graph = generate(params)
        adjacency = graph.undirected_neighbors()
        for scenario in ("A", "B"):
            seed = 31_337 + rep
            attacks, jumps = [], []
            for gamma in (1.0, 10.0, 100.0):
                sc = ContagionScenario.from_gamma(scenario, gamma)
                out = run_sir(
                    graph, InfectionConfig(scenario=sc, seed=seed, origin="oldest"),
                    adjacency=adjacency,
                )
                attacks.append(out.attack_size)
                jumps.append(out.longest_jump)
            if not (attacks[0] <= attacks[1] <= attacks[2]):
                raise VerificationFailure(
                    f"attack size not monotone in gamma: {attacks} "
                    f"(graph seed {params.seed}, sir seed {seed}, scenario {scenario})"
                )
            if not (jumps[0] <= jumps[1] + 1e-15 and jumps[1] <= jumps[2] + 1e-15):
                raise VerificationFailure(
                    f"longest jump not monotone in gamma: {jumps} "
                    f"(graph seed {params.seed}, sir seed {seed}, scenario {scenario})"
                )
    return "50 coupled trials (25 graphs x 2 scenarios), gamma 1 -> 10 -> 100"


def check_bfs_layers() -> str:
    """Infection times are exactly BFS layers of the transmission edge set."""
    graph = generate(SpaParams(n=1500, a1=0.5, a2=1.0, seed=77))
    sc = ContagionScenario.from_gamma("B", 10.0)
    out = run_sir(graph, InfectionConfig(scenario=sc, seed=8, origin="oldest"))
    forward: dict[int, list[int]] = {}
    for s, g, _ in out.transmission_edges:
        forward.setdefault(s, []).append(g)
    depth = {out.origin: 0}
    layer = [out.origin]
    while layer:
        nxt = []
        for u in layer:
            for v in forward.get(u, ()):
                if v not in depth:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
        layer = nxt
    times = {int(v): int(t) for v, t in enumerate(out.infection_time) if t >= 0}
    if times != depth:
        raise VerificationFailure("transmission-edge BFS disagrees with infection times (seed 8)")
    return f"attack {out.attack_size}, duration {out.duration}"


def check_critical_times() -> str:
    """m = m_1^(1-a1), m_i decreases in i, and the i=1 radius inverts to lambda."""
    rng = np.random.default_rng(13)
    for _ in range(20):
        a1 = float(rng.uniform(0.1, 0.9))
        a2 = float(rng.uniform(0.2, 3.0))
        lam = float(rng.uniform(1e-4, 0.2))
        cfg = _METRICS[int(rng.integers(len(_METRICS)))]
        m = critical_time_m(lam, a2, cfg)
        m1 = critical_time_m_i(1, lam, a1, a2, cfg)
        if abs(m1 ** (1.0 - a1) - m) > 1e-9 * m:
            raise VerificationFailure(f"m != m_1^(1-a1) at a1={a1}, a2={a2}, lam={lam}, {cfg}")
        ms = [critical_time_m_i(i, lam, a1, a2, cfg) for i in (1, 2, 5, 30)]
        if not all(x > y for x, y in zip(ms, ms[1:])):
            raise VerificationFailure(f"m_i not decreasing at a1={a1}, a2={a2}, lam={lam}")
        radius = radius_for_volume(
            sphere_volume_modified(1, m1, a1, a2), cfg
        )
        if sphere_volume_modified(1, m1, a1, a2) < 1.0 and abs(radius - lam) > 1e-9 * lam:
            raise VerificationFailure(f"sphere radius at m_1 is {radius!r}, expected {lam!r}")
    return "20 random parameter points"


def check_bound_behavior() -> str:
    """The long-edge probability bound decreases in n and vanishes below phi_bound."""
    cfg = MetricConfig(1, math.inf)
    spot = [long_edge_prob_bound(n, 0.5, 1.0, 10.0, cfg, 0.05) for n in (1e3, 1e6, 1e9)]
    if not (spot[0] > spot[1] > spot[2]):
        raise VerificationFailure(f"bound not decreasing over 1e3/1e6/1e9: {spot}")
    if spot[2] >= 1e-2:
        raise VerificationFailure(f"bound at n=1e9 is {spot[2]:.3e}, expected < 1e-2")
    pb = phi_bound(0.5, 1)
    for frac in (0.25, 0.5, 0.9):
        phi = frac * pb
        grid = np.logspace(3, 12, 19)
        vals = [long_edge_prob_bound(n, 0.5, 1.0, 10.0, cfg, phi) for n in grid]
        tail = vals[6:]
        if not all(x > y for x, y in zip(tail, tail[1:])):
            raise VerificationFailure(f"bound not eventually decreasing at phi={phi}")
        # decay is as slow as n^(2 phi d/(1-a1) - a1) near the threshold, so
        # "tends to 0" shows up on-grid only as strict shrinkage plus a far probe
        if not long_edge_prob_bound(1e30, 0.5, 1.0, 10.0, cfg, phi) < 0.5 * vals[-1]:
            raise VerificationFailure(f"bound does not keep shrinking past the grid at phi={phi}")
    return "spot values " + "/".join(f"{v:.2e}" for v in spot)


def check_harness_determinism() -> str:
    """Identical config and master seed give a byte-identical experiments CSV."""
    import tempfile

    config = ExperimentConfig(
        ns=(200, 300), scenarios=("A", "B"), gammas=(1.0, 10.0),
        runs_per_cell=2, master_seed=424_242,
    )
    with tempfile.TemporaryDirectory() as tmp:
        a, b = f"{tmp}/a.csv", f"{tmp}/b.csv"
        run_experiment(config, a)
        run_experiment(config, b)
        ta = open(a, "rb").read()
        tb = open(b, "rb").read()
    if ta != tb:
        raise VerificationFailure("two runs of the same config differ byte-wise")
    rows = ta.decode().strip().splitlines()
    want = config.total_rows()
    if len(rows) - 1 != want:
        raise VerificationFailure(f"row count {len(rows) - 1}, expected {want}")
    return f"{want} rows, byte-identical on rerun"


def check_csv_roundtrip() -> str:
    """Records survive format -> parse -> format without loss."""
    rec = ExperimentRecord(
        n=1000, variant="modified", a1=0.5, a2=1.0, d=1, p=math.inf, scenario="A",
        gamma=10.0, run=3, seed=123456789, origin=1, attack_size=57, duration=9,
        longest_jump=0.12345678901234567, max_displacement=0.4999999999999999,
    )
    row = rec.to_csv_row()
    back = ExperimentRecord.from_csv_row(row)
    if back != rec or back.to_csv_row() != row:
        raise VerificationFailure(f"round trip altered the record: {row!r}")
    return "full-precision floats preserved"


def check_mean_degree_100k() -> str:
    """Mean in-degree at n=1e5 sits in [1.9, 2.1] around a2/(1-a1)=2."""
    g = generate(SpaParams(n=100_000, a1=0.5, a2=1.0, seed=1_234_567))
    mean = g.mean_in_degree()
    if not 1.9 <= mean <= 2.1:
        raise VerificationFailure(f"mean in-degree {mean:.4f} outside [1.9, 2.1] (seed 1234567)")
    return f"mean in-degree {mean:.4f}"


def check_power_law_100k() -> str:
    """Cumulative tail exponent at n=1e5 lands in [1.7, 2.3] around 1/a1=2."""
    g = generate(SpaParams(n=100_000, a1=0.5, a2=1.0, seed=1_234_567))
    k_min = math.ceil(math.log(g.n) ** 2)
    fit = fit_power_law(g.in_degree[1:], k_min)
    if not 1.7 <= fit.exponent <= 2.3:
        raise VerificationFailure(
            f"tail exponent {fit.exponent:.3f} outside [1.7, 2.3] (k_min={k_min}, seed 1234567)"
        )
    return f"exponent {fit.exponent:.3f}, r2 {fit.r2:.3f}, k_min {k_min}"


CHECKS = [
    ("geometry.metric_properties", check_metric_properties, "fast"),
    ("geometry.ball_measure", check_ball_measure, "fast"),
    ("geometry.radius_roundtrip", check_radius_roundtrip, "fast"),
    ("generator.sphere_containment", check_sphere_containment, "fast"),
    ("generator.oracle_equivalence", check_oracle_equivalence, "fast"),
    ("generator.poisson_binomial", check_poisson_binomial, "fast"),
    ("contagion.beta_properties", check_beta_properties, "fast"),
    ("sir.percolation_coupling", check_percolation_coupling, "fast"),
    ("sir.gamma_monotonicity", check_gamma_monotonicity, "fast"),
    ("sir.bfs_layers", check_bfs_layers, "fast"),
    ("analysis.critical_times", check_critical_times, "fast"),
    ("analysis.bound_behavior", check_bound_behavior, "fast"),
    ("harness.determinism", check_harness_determinism, "fast"),
    ("harness.csv_roundtrip", check_csv_roundtrip, "fast"),
    ("generator.mean_degree_100k", check_mean_degree_100k, "full"),
    ("analysis.power_law_100k", check_power_law_100k, "full"),
]


def run_checks(level: str = "fast", out=None) -> bool:
    """Run the suite, print one line per check, return overall success."""
    import sys

    out = out or sys.stdout
    ok = True
    for name, fn, tier in CHECKS:
        if tier == "full" and level != "full":
            continue
        try:
            detail = fn()
            print(f"PASS {name}: {detail}", file=out)
        except VerificationFailure as exc:
            ok = False
            print(f"FAIL {name}: {exc}", file=out)
    return ok
