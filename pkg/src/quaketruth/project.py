"""Loss projection: Bayesian updating of an exponential reporting curve.

Reported cumulative tolls follow N_inf * (1 - exp(-alpha * t)). A discrete
joint posterior over (N_inf, alpha) starts from a lognormal x log-uniform
prior and is reweighted by each approved toll observation under lognormal
noise in log10 space. Summaries come out as order-of-magnitude fatality
bins and N_inf quantiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Sequence

import numpy as np

from .config import PriorSpec
from .errors import ConfigurationError, InputError

GRID_LOG_N = (0.0, 5.5, 111)  # log10 span and point count for N_inf
GRID_LOG_ALPHA = (-3.0, 1.0, 81)  # log10 span and point count for alpha (1/hour)
LOG_FLOOR = 0.5  # tolls and curve values below this are floored before log10

FATALITY_BINS: tuple[tuple[float, float], ...] = (
    (0.0, 1.0),
    (1.0, 10.0),
    (10.0, 100.0),
    (100.0, 1_000.0),
    (1_000.0, 10_000.0),
    (10_000.0, 100_000.0),
    (100_000.0, float("inf")),
)


def loss_curve(n_inf: float, alpha: float, t: float) -> float:
    """Expected reported toll at t hours after origin."""
    if t < 0:
        raise InputError("t must be non-negative")
    if n_inf <= 0 or alpha <= 0:
        raise InputError("loss model parameters must be positive")
    return n_inf * (1.0 - np.exp(-alpha * t))


@dataclass(frozen=True)
class Observation:
    """One approved reported toll, timed in hours since origin."""

    t_hours: float
    count: int
    kind: str = "deaths"

    def __post_init__(self) -> None:
        if self.t_hours <= 0:
            raise InputError("observation time must be positive")
        if self.count < 0:
            raise InputError("observation count must be non-negative")


@dataclass(frozen=True)
class BinReport:
    bins: tuple[tuple[float, float], ...]
    probabilities: tuple[float, ...]
    timestamp: datetime


@dataclass(frozen=True)
class PosteriorGrid:
    """Immutable joint posterior; updates return a new grid."""

    axis_n: np.ndarray = field(repr=False)
    axis_alpha: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)  # shape (len(axis_n), len(axis_alpha))
    prior: PriorSpec = field(default_factory=PriorSpec)

    def marginal_n(self) -> np.ndarray:
        return self.weights.sum(axis=1)


def init_prior(prior: PriorSpec) -> PosteriorGrid:
    """Lognormal prior over N_inf crossed with a log-uniform alpha prior."""
    axis_n = np.logspace(*GRID_LOG_N)
    axis_alpha = np.logspace(*GRID_LOG_ALPHA)
    log_n = np.log10(axis_n)
    median = np.log10(prior.median_deaths)
    if not log_n[0] <= median <= log_n[-1]:
        raise ConfigurationError(
            f"prior median {prior.median_deaths} outside grid range"
        )
    if prior.dispersion_log10 <= 0 or prior.sigma_obs <= 0:
        raise ConfigurationError("dispersion and sigma_obs must be positive")
    density_n = np.exp(-((log_n - median) ** 2) / (2.0 * prior.dispersion_log10**2))
    weights = np.outer(density_n, np.ones_like(axis_alpha))
    weights /= weights.sum()
    return PosteriorGrid(axis_n=axis_n, axis_alpha=axis_alpha, weights=weights, prior=prior)


def update_posterior(grid: PosteriorGrid, obs: Observation) -> PosteriorGrid:
    """Reweight by a lognormal likelihood around the curve value at obs.t."""
    curve = np.outer(grid.axis_n, 1.0 - np.exp(-grid.axis_alpha * obs.t_hours))
    log_pred = np.log10(np.maximum(curve, LOG_FLOOR))
    log_obs = np.log10(max(obs.count, LOG_FLOOR))
    likelihood = np.exp(-((log_obs - log_pred) ** 2) / (2.0 * grid.prior.sigma_obs**2))
    weights = grid.weights * likelihood
    total = weights.sum()
    if total <= 0:  # numerically impossible observation; keep the prior mass
        return grid
    return replace(grid, weights=weights / total)


def update_many(grid: PosteriorGrid, observations: Sequence[Observation]) -> PosteriorGrid:
    for obs in observations:
        grid = update_posterior(grid, obs)
    return grid


def bin_probabilities(grid: PosteriorGrid, timestamp: datetime) -> BinReport:
    """Integrate the N_inf marginal over the decade fatality bins."""
    marginal = grid.marginal_n()
    probabilities = []
    for low, high in FATALITY_BINS:
        mask = (grid.axis_n >= low) & (grid.axis_n < high)
        probabilities.append(float(marginal[mask].sum()))
    return BinReport(bins=FATALITY_BINS, probabilities=tuple(probabilities), timestamp=timestamp)


def project_final(grid: PosteriorGrid) -> tuple[float, float, float]:
    """(median, 5th, 95th percentile) of N_inf by cumulative lookup."""
    marginal = grid.marginal_n()
    cumulative = np.cumsum(marginal)
    cumulative /= cumulative[-1]

    def quantile(q: float) -> float:
        idx = int(np.searchsorted(cumulative, q, side="left"))
        return float(grid.axis_n[min(idx, len(grid.axis_n) - 1)])

    return quantile(0.5), quantile(0.05), quantile(0.95)
