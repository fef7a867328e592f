"""Spatial preferential-attachment graphs and SIR contagion experiments.

The package builds graphs on the unit torus (original and modified sphere
of influence variants), runs discrete-time SIR processes under two contact
scenarios, couples those runs to bond percolation, and ships the analysis
and experiment harness used to study how far infections jump through the
underlying feature space.
"""

from .analysis import (
    PowerLawFit,
    RegressionResult,
    critical_time_m,
    critical_time_m_i,
    fit_power_law,
    loglog_regression,
    long_edge_prob_bound,
    phi_bound,
    theta_bound,
)
from .contagion import ContagionScenario, beta_A, beta_B, beta_from_contacts, beta_vector
from .generator import (
    SpaGraph,
    SpaParams,
    expected_in_degree_closed,
    expected_in_degree_exact,
    generate,
    sphere_volume_modified,
    sphere_volume_original,
)
from .geometry import (
    MetricConfig,
    ball_volume,
    radius_for_volume,
    sample_uniform,
    torus_distance,
    torus_distances,
)
from .sir import (
    InfectionConfig,
    InfectionOutcome,
    PotentialInfectionGraph,
    build_potential_graph,
    infection_graph_at,
    longest_edge,
    run_sir,
)
from .streams import derive_seed, pair_uniform

__version__ = "0.1.0"

__all__ = [
    "MetricConfig",
    "torus_distance",
    "torus_distances",
    "ball_volume",
    "radius_for_volume",
    "sample_uniform",
    "SpaParams",
    "SpaGraph",
    "generate",
    "sphere_volume_original",
    "sphere_volume_modified",
    "expected_in_degree_exact",
    "expected_in_degree_closed",
    "ContagionScenario",
    "beta_from_contacts",
    "beta_A",
    "beta_B",
    "beta_vector",
    "InfectionConfig",
    "InfectionOutcome",
    "PotentialInfectionGraph",
    "run_sir",
    "build_potential_graph",
    "infection_graph_at",
    "longest_edge",
    "phi_bound",
    "theta_bound",
    "critical_time_m",
    "critical_time_m_i",
    "long_edge_prob_bound",
    "fit_power_law",
    "loglog_regression",
    "PowerLawFit",
    "RegressionResult",
    "pair_uniform",
    "derive_seed",
    "__version__",
]
