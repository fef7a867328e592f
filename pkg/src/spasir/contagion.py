"""Per-step transmission probabilities for the two contact scenarios.

A network edge is only the potential for contacts; what matters per time
step is how many contacts an infected vertex makes with one neighbour
(kappa) and the transmission probability per contact (tau). Those combine
as beta = 1 - exp(-tau * kappa).

Scenario A keeps the total contacts per step fixed at T, so a vertex with
expected degree E spreads them thin: kappa_A = T / E and beta varies by
vertex (old, high-degree vertices are less contagious per neighbour).
Scenario B scales total contacts with degree, which cancels: kappa_B =
T / <mean in-degree>, one beta for the whole graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generator import SpaGraph, expected_in_degree_closed, expected_in_degree_exact

__all__ = [
    "ContagionScenario",
    "beta_from_contacts",
    "beta_A",
    "beta_B",
    "beta_vector",
    "E_FLOOR",
]

# below this expected degree, kappa_A = T/E is treated as infinite (beta -> 1)
E_FLOOR = 1e-9


@dataclass(frozen=True)
class ContagionScenario:
    """Scenario tag plus tau (per-contact transmission) and T (contacts per step)."""

    kind: str
    tau: float
    contacts: float

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ValueError(f"scenario kind must be 'A' or 'B', got {self.kind!r}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0,1], got {self.tau}")
        if self.contacts < 0.0:
            raise ValueError(f"contacts per step must be >= 0, got {self.contacts}")

    @property
    def gamma(self) -> float:
        """Contagiousness tau * T."""
        return self.tau * self.contacts

    @classmethod
    def from_gamma(cls, kind: str, gamma: float) -> "ContagionScenario":
        """Scenario with the given contagiousness, factored as tau=1, T=gamma."""
        return cls(kind=kind, tau=1.0, contacts=float(gamma))


def beta_from_contacts(tau: float, kappa: float) -> float:
    """Infection probability 1 - exp(-tau*kappa) per time step."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0,1], got {tau}")
    if kappa < 0.0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    return -math.expm1(-tau * kappa)


def beta_A(i: int, graph: SpaGraph, sc: ContagionScenario, *,
           use_exact_sum: bool = False, e_floor: float = E_FLOOR) -> float:
    """Scenario-A transmission probability of vertex i.

    kappa_A = T / E where E is the closed-form expected in-degree of i
    (the exact finite sum behind ``use_exact_sum``, for sensitivity runs).
    E at or below ``e_floor`` returns the limiting value 1.
    """
    if sc.kind != "A":
        raise ValueError(f"scenario A required, got kind {sc.kind!r}")
    p = graph.params
    if use_exact_sum:
        e_deg = expected_in_degree_exact(i, p.n, p.a1, p.a2)
    else:
        e_deg = expected_in_degree_closed(i, p.n, p.a1, p.a2)
    if e_deg <= e_floor:
        return 1.0
    return beta_from_contacts(sc.tau, sc.contacts / e_deg)


def beta_B(sc: ContagionScenario, a1: float, a2: float, *,
           empirical_mean: float | None = None) -> float:
    """Scenario-B transmission probability, identical for every vertex.

    Uses the asymptotic mean in-degree a2/(1-a1); pass ``empirical_mean``
    to substitute a measured per-graph mean instead.
    """
    if sc.kind != "B":
        raise ValueError(f"scenario B required, got kind {sc.kind!r}")
    mean_deg = empirical_mean if empirical_mean is not None else a2 / (1.0 - a1)
    if mean_deg <= 0.0:
        raise ValueError("mean in-degree must be positive (a2 = 0 leaves it undefined)")
    return beta_from_contacts(sc.tau, sc.contacts / mean_deg)


def beta_vector(graph: SpaGraph, sc: ContagionScenario, *,
                use_exact_sum: bool = False, e_floor: float = E_FLOOR,
                override: float | None = None) -> np.ndarray:
    """Transmission probability of every vertex, index 0 unused.

    ``override`` pins beta to a constant (test hook for forcing the
    deterministic-percolation limit beta = 1).
    """
    n = graph.n
    out = np.empty(n + 1)
    out[0] = np.nan
    if override is not None:
        out[1:] = override
        return out
    p = graph.params
    if sc.kind == "B":
        out[1:] = beta_B(sc, p.a1, p.a2)
        return out
    if use_exact_sum:
        e_deg = np.array([expected_in_degree_exact(i, p.n, p.a1, p.a2) for i in range(1, n + 1)])
    else:
        e_deg = expected_in_degree_closed(np.arange(1, n + 1), p.n, p.a1, p.a2)
    out[1:] = np.where(e_deg <= e_floor, 1.0, -np.expm1(-sc.tau * sc.contacts / np.maximum(e_deg, e_floor)))
    return out
