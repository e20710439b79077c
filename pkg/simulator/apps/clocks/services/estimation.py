"""
Maximum-likelihood estimation of delta_p from Bob's outcome counts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from numpy.typing import ArrayLike
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from core.exceptions import EstimationError, InvalidParameterError

from .clockmodel import ClockParams
from .metrology import classical_fisher, precision_bound
from .protocol import MeasurementRecord, branch_probabilities

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimateReport:
    delta_hat: float
    window: Tuple[float, float]
    log_likelihood: float
    stderr_cr: Optional[float]
    grid_step: float

    def as_dict(self) -> Dict[str, Any]:
        return {
            'delta_hat': self.delta_hat,
            'window': list(self.window),
            'log_likelihood': self.log_likelihood,
            'stderr_cr': self.stderr_cr,
            'grid_step': self.grid_step,
        }


def default_window(params: ClockParams) -> Tuple[float, float]:
    """One oscillation of clock B: [0, 2 pi / eps2]."""
    return 0.0, 2.0 * math.pi / params.eps2


def validate_window(window: Sequence[float]) -> Tuple[float, float]:
    if len(window) != 2:
        raise InvalidParameterError(f"Window must be a [lo, hi] pair, got {list(window)!r}.")
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise InvalidParameterError(f"Window must satisfy lo < hi, got [{lo!r}, {hi!r}].")
    return lo, hi


def window_is_injective(params: ClockParams, window: Sequence[float], points: Optional[int] = None) -> bool:
    """
    True when P(+) is monotone over the window on the estimation grid.

    Outside such a window two delta values explain the same counts and the
    estimates split between them.
    """
    lo, hi = validate_window(window)
    points = points or getattr(settings, 'ESTIMATE_GRID_POINTS', 4096)
    p_plus, _ = branch_probabilities(params, np.linspace(lo, hi, points))
    steps = np.diff(p_plus)
    return bool(np.all(steps <= 0.0) or np.all(steps >= 0.0))


def log_likelihood(rec: MeasurementRecord, params: ClockParams, delta_p: ArrayLike) -> np.ndarray:
    """Binomial log-likelihood k ln P+ + (n - k) ln P-, with probabilities clamped away from 0."""
    clamp = getattr(settings, 'LIKELIHOOD_CLAMP', 1e-300)
    p_plus, p_minus = branch_probabilities(params, delta_p)
    return (
        xlogy(rec.k_plus, np.clip(p_plus, clamp, 1.0))
        + xlogy(rec.k_minus, np.clip(p_minus, clamp, 1.0))
    )


def estimate_delta(
    rec: MeasurementRecord,
    params: ClockParams,
    window: Optional[Sequence[float]] = None,
    grid_points: Optional[int] = None,
    rel_tol: Optional[float] = None
) -> EstimateReport:
    """
    Grid search over the window followed by bounded refinement around the best point.

    Ties go to the smallest delta: the grid maximum is the first one found and
    the refined point only replaces it when strictly better.

    Raises:
        InvalidParameterError: empty record or malformed window.
        EstimationError: the likelihood is constant across the grid.
    """
    if rec.n <= 0:
        raise InvalidParameterError("Cannot estimate from an empty measurement record.")
    lo, hi = validate_window(window if window is not None else default_window(params))
    points = grid_points or getattr(settings, 'ESTIMATE_GRID_POINTS', 4096)
    if points < 3:
        raise InvalidParameterError(f"Estimation grid needs at least 3 points, got {points}.")
    tolerance = (rel_tol or getattr(settings, 'ESTIMATE_REL_TOL', 1e-10)) * (hi - lo)

    grid = np.linspace(lo, hi, points)
    values = log_likelihood(rec, params, grid)
    if np.ptp(values) == 0.0:
        raise EstimationError(
            f"Likelihood is flat over [{lo!r}, {hi!r}] for k_plus={rec.k_plus}, n={rec.n}."
        )
    best = int(np.argmax(values))
    left, right = grid[max(best - 1, 0)], grid[min(best + 1, points - 1)]

    refined = minimize_scalar(
        lambda d: -float(log_likelihood(rec, params, d)),
        bounds=(left, right),
        method='bounded',
        options={'xatol': tolerance},
    )
    candidates = [(-float(values[best]), float(grid[best]))]
    if refined.success:
        candidates.append((float(refined.fun), float(refined.x)))
    negative_ll, delta_hat = min(candidates)

    fisher = classical_fisher(params, delta_hat)
    stderr = precision_bound(fisher, rec.n) if fisher > 0 else None
    logger.debug(f"Estimated delta_p={delta_hat!r} from {rec.k_plus}/{rec.n} in [{lo!r}, {hi!r}]")
    return EstimateReport(
        delta_hat=delta_hat,
        window=(lo, hi),
        log_likelihood=-negative_ll,
        stderr_cr=stderr,
        grid_step=float(grid[1] - grid[0]),
    )
