"""Closed-form thresholds, tail-probability bounds, and distribution fits.

The long-jump analysis works with a length threshold lambda = n^(-phi). A
vertex born after the critical time m starts with a containment radius
below lambda; vertex i's own radius drops below lambda after its critical
time m_i. Together with the scenario-A transmission probability of the
youngest relevant vertex these yield an explicit upper bound on the
probability that the potential infection graph contains any edge longer
than lambda, which vanishes with n whenever phi < a1(1-a1)/((a1+2)d).

Fitting utilities cover the cumulative in-degree tail (expected slope 1/a1
above log^2 n) and plain least squares on log-log axes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import MetricConfig, ball_volume

__all__ = [
    "PowerLawFit",
    "RegressionResult",
    "phi_bound",
    "theta_bound",
    "critical_time_m",
    "critical_time_m_i",
    "long_edge_prob_bound",
    "fit_power_law",
    "cumulative_tail",
    "loglog_regression",
]


@dataclass(frozen=True)
class PowerLawFit:
    """Fitted cumulative-tail exponent above k_min (exponent = -slope)."""

    exponent: float
    k_min: float
    r2: float
    n_points: int


@dataclass(frozen=True)
class RegressionResult:
    """Ordinary least squares on (log x, log y)."""

    slope: float
    intercept: float
    r2: float
    n_used: int
    n_excluded: int


def phi_bound(a1: float, d: int) -> float:
    """Largest admissible length exponent: a1(1-a1) / ((a1+2) d)."""
    if not 0.0 < a1 < 1.0:
        raise ValueError(f"a1 must lie in (0,1), got {a1}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return a1 * (1.0 - a1) / ((a1 + 2.0) * d)


def theta_bound(a1: float) -> float:
    """Exponent threshold 1 - a1/(4 a1 + 2) for long edges existing at all."""
    if not 0.0 < a1 < 1.0:
        raise ValueError(f"a1 must lie in (0,1), got {a1}")
    return 1.0 - a1 / (4.0 * a1 + 2.0)


def critical_time_m(lam: float, a2: float, metric: MetricConfig) -> float:
    """First birth time whose initial containment radius is below lam.

    m = a2 / (lam^d c_p): vertices born later start with radius < lam.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0,1), got {lam}")
    return a2 / ball_volume(lam, metric)


def critical_time_m_i(i: int, lam: float, a1: float, a2: float, metric: MetricConfig) -> float:
    """Time (a2 / (i lam^d c_p))^(1/(1-a1)) after which vertex i's sphere is small.

    For i = 1 this is exact: the sphere radius of the oldest vertex crosses
    lam precisely at m_1.
    """
    if i < 1:
        raise ValueError(f"i must be >= 1, got {i}")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0,1), got {lam}")
    return (a2 / (i * ball_volume(lam, metric))) ** (1.0 / (1.0 - a1))


def long_edge_prob_bound(n: float, a1: float, a2: float, gamma: float,
                         metric: MetricConfig, phi: float) -> float:
    """Upper bound on P(any edge longer than n^(-phi) in the scenario-A
    potential infection graph).

    2 (1 - exp(-gamma / ((a2/a1)((n/m1)^a1 - 1)))) a2 m1^2 with
    m1 the critical time of the oldest vertex at lambda = n^(-phi).
    Decreases to 0 in n for every phi below :func:`phi_bound`.
    """
    if phi <= 0.0:
        raise ValueError(f"phi must be > 0, got {phi}")
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    lam = float(n) ** (-phi)
    m1 = critical_time_m_i(1, lam, a1, a2, metric)
    lowest_expected_degree = (a2 / a1) * ((n / m1) ** a1 - 1.0)
    return 2.0 * -math.expm1(-gamma / lowest_expected_degree) * a2 * m1**2


def cumulative_tail(in_degrees) -> tuple[np.ndarray, np.ndarray]:
    """c_k = (#vertices with in-degree > k) / n for k = 0 .. max degree.

    Returns (k values, c_k); the strictly-greater-than counting matches the
    tail the power-law exponent statement is about.
    """
    degs = np.sort(np.asarray(in_degrees, dtype=np.int64))
    n = degs.size
    if n == 0:
        raise ValueError("need at least one degree")
    ks = np.arange(0, degs[-1] + 1)
    counts = n - np.searchsorted(degs, ks, side="right")
    return ks, counts / n


def fit_power_law(in_degrees, k_min: float, method: str = "ols") -> PowerLawFit:
    """Fit the cumulative in-degree tail above k_min.

    "ols": least squares of log c_k on log k over integer k > k_min with
    c_k > 0; the exponent is the negated slope. "mle": continuous Hill
    estimator on the degrees above k_min, reported on the same cumulative
    scale (density exponent minus one) with r2 = NaN.
    """
    degs = np.asarray(in_degrees, dtype=np.int64)
    if np.unique(degs[degs > k_min]).size < 10:
        raise ValueError(f"need at least 10 distinct in-degrees above k_min={k_min}")
    if method == "mle":
        tail = degs[degs > k_min].astype(float)
        alpha = 1.0 + tail.size / np.log(tail / float(k_min)).sum()
        return PowerLawFit(exponent=alpha - 1.0, k_min=k_min, r2=math.nan,
                           n_points=int(tail.size))
    if method != "ols":
        raise ValueError(f"unknown fitting method {method!r}")
    ks, ck = cumulative_tail(degs)
    keep = (ks > k_min) & (ck > 0)
    fit = loglog_regression(np.column_stack([ks[keep], ck[keep]]))
    return PowerLawFit(exponent=-fit.slope, k_min=k_min, r2=fit.r2, n_points=fit.n_used)


def loglog_regression(points) -> RegressionResult:
    """OLS of log y on log x; non-positive coordinates are excluded and counted."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (m, 2) array of (x, y) pairs")
    usable = (pts[:, 0] > 0) & (pts[:, 1] > 0)
    n_excluded = int((~usable).sum())
    pts = pts[usable]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points with positive coordinates, got {len(pts)}")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    if ss_tot == 0.0:
        r2 = 1.0 if math.isclose(ss_res, 0.0, abs_tol=1e-24) else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))  # guard float dust at the ends
    return RegressionResult(slope=float(slope), intercept=float(intercept), r2=r2,
                            n_used=int(len(pts)), n_excluded=n_excluded)
