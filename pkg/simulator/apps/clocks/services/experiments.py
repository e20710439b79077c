"""
Monte-Carlo estimation experiments.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import pandas as pd
from django.conf import settings

from core.exceptions import InvalidParameterError

from .clockmodel import ClockParams
from .estimation import default_window, estimate_delta, validate_window, window_is_injective
from .metrology import MetrologyReport, metrology_report
from .protocol import MAX_SEED, MeasurementRecord, mix_seed, sample_outcomes
from .sweeps import SweepTable

logger = logging.getLogger(__name__)

REPLICATE_COLUMNS = ['replicate', 'seed', 'k_plus', 'delta_hat', 'log_likelihood', 'stderr_cr']


@dataclass(frozen=True)
class ExperimentSpec:
    params: ClockParams
    delta_p: float
    n: int
    replicates: int
    base_seed: int
    window: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {self.n}.")
        if self.replicates < 1:
            raise InvalidParameterError(f"replicates must be >= 1, got {self.replicates}.")
        if not 0 <= self.base_seed <= MAX_SEED:
            raise InvalidParameterError(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed}.")
        if not math.isfinite(self.delta_p):
            raise InvalidParameterError(f"delta_p must be finite, got {self.delta_p!r}.")
        if self.window is not None:
            object.__setattr__(self, 'window', validate_window(self.window))

    @classmethod
    def from_config(
        cls,
        section: Optional[Mapping[str, Any]] = None,
        params: Optional[ClockParams] = None,
        seed: Optional[int] = None
    ) -> ExperimentSpec:
        """settings.ESTIMATION_EXPERIMENT overlaid with the config `estimate` section and --seed."""
        data = dict(settings.ESTIMATION_EXPERIMENT)
        data.update({k: v for k, v in (section or {}).items() if v is not None})
        if seed is not None:
            data['base_seed'] = seed
        return cls(
            params=params or ClockParams(**data['params']),
            delta_p=float(data['delta_p']),
            n=int(data['n']),
            replicates=int(data['replicates']),
            base_seed=int(data['base_seed']),
            window=tuple(data['window']) if data.get('window') is not None else None,
        )

    @property
    def effective_window(self) -> Tuple[float, float]:
        return self.window or default_window(self.params)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'params': self.params.as_dict(),
            'delta_p': self.delta_p,
            'n': self.n,
            'replicates': self.replicates,
            'base_seed': self.base_seed,
            'window': list(self.effective_window),
        }


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    metrology: MetrologyReport
    summary: Dict[str, Any]
    replicates: pd.DataFrame
    records: List[MeasurementRecord] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def replicate_rows(self) -> List[Dict[str, Any]]:
        """Per-replicate estimates, each with the measurement record it was computed from."""
        frame = self.replicates.astype(object).where(self.replicates.notna(), None)
        return [
            {
                'replicate': row['replicate'],
                'record': record,
                'delta_hat': row['delta_hat'],
                'log_likelihood': row['log_likelihood'],
                'stderr_cr': row['stderr_cr'],
            }
            for row, record in zip(frame.to_dict(orient='records'), self.records)
        ]

    def to_csv(self) -> str:
        return SweepTable(header=REPLICATE_COLUMNS, frame=self.replicates, meta=self.meta).to_csv()


class EstimationExperimentService:
    """
    Runs independent sample-and-estimate replicates and compares their spread
    with the Cramer-Rao bounds.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, workers or getattr(settings, 'SWEEP_WORKERS', 1))

    def run_estimation_experiment(
        self,
        spec: ExperimentSpec,
        meta: Optional[Dict[str, Any]] = None
    ) -> ExperimentReport:
        meta = meta or {}
        window = spec.effective_window
        config_hash = meta.get('config_hash', '')

        injective = window_is_injective(spec.params, window)
        if not injective:
            logger.warning(
                f"P(+) is not monotone over the window [{window[0]!r}, {window[1]!r}]: "
                f"estimates may split between several delta values"
            )

        def replicate(r: int) -> Tuple[Dict[str, Any], MeasurementRecord]:
            seed = mix_seed(spec.base_seed, r)
            record = sample_outcomes(spec.params, spec.delta_p, spec.n, seed, config_hash)
            estimate = estimate_delta(record, spec.params, window)
            row = {
                'replicate': r,
                'seed': seed,
                'k_plus': record.k_plus,
                'delta_hat': estimate.delta_hat,
                'log_likelihood': estimate.log_likelihood,
                'stderr_cr': estimate.stderr_cr,
            }
            return row, record

        if self.workers == 1:
            results = [replicate(r) for r in range(spec.replicates)]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(replicate, range(spec.replicates)))
        frame = pd.DataFrame.from_records([row for row, _ in results], columns=REPLICATE_COLUMNS)

        metrology = metrology_report(spec.params, spec.delta_p, spec.n)
        summary = self._summarize(frame, spec, metrology)
        summary['window_injective'] = injective
        logger.info(
            f"Estimation experiment: {spec.replicates} replicates of n={spec.n}, "
            f"mean {summary['mean']:.10g}, variance ratio {summary['variance_ratio']}"
        )
        return ExperimentReport(
            spec=spec,
            metrology=metrology,
            summary=summary,
            replicates=frame,
            records=[record for _, record in results],
            meta=meta,
        )

    def _summarize(self, frame: pd.DataFrame, spec: ExperimentSpec, metrology: MetrologyReport) -> Dict[str, Any]:
        """Empirical moments, bias, Cramer-Rao variances and coverage of the estimates."""
        estimates = frame['delta_hat']
        mean = float(estimates.mean())
        variance = float(estimates.var(ddof=1)) if len(frame) > 1 else None
        standard_error = math.sqrt(variance / len(frame)) if variance is not None else None

        cr_classical = 1.0 / (spec.n * metrology.classical_fisher) if metrology.classical_fisher > 0 else None
        cr_quantum = 1.0 / (spec.n * metrology.qfi_numerical) if metrology.qfi_numerical > 0 else None

        summary = {
            'mean': mean,
            'bias': mean - spec.delta_p,
            'variance': variance,
            'standard_error': standard_error,
            'cr_variance_classical': cr_classical,
            'cr_variance_quantum': cr_quantum,
            'variance_ratio': variance / cr_classical if variance is not None and cr_classical else None,
            'coverage_radius': None,
            'coverage': None,
        }
        if cr_classical:
            radius = 2.0 * math.sqrt(cr_classical)
            summary['coverage_radius'] = radius
            summary['coverage'] = float(((estimates - spec.delta_p).abs() <= radius).mean())
        return summary
