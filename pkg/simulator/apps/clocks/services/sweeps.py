"""
Parameter sweeps producing the figure tables.

A sweep walks one axis parameter and, for every axis point, each value of a
series parameter (axis-major, series-minor). Rows are evaluated on a thread
pool when SWEEP_WORKERS > 1; Executor.map keeps them in submission order, so
the table never depends on scheduling.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from django.conf import settings
from rest_framework.renderers import JSONRenderer

from apps.qubits.services.qops import Outcome, Subsystem, concurrence, purity, reduced_density
from core.exceptions import ConfigurationError, NumericalFailure

from .clockmodel import ClockParams, concurrence_closed_form, joint_state
from .metrology import classical_fisher, is_discrepant, qfi_closed_form, qfi_numerical
from .protocol import bob_probability

logger = logging.getLogger(__name__)

MODEL_PARAMETERS = ('eps1', 'eps2', 'xi')
COLUMN_NAMES = {'eps1': 'epsilon1', 'eps2': 'epsilon2', 'xi': 'xi', 'delta_p': 'delta_p', 't': 't'}


class SweepKind(str, Enum):
    PROBABILITY = 'probability'
    QFI = 'qfi'
    ENTANGLEMENT = 'entanglement'

    @property
    def settings_name(self) -> str:
        return f'{self.name}_SWEEP'

    @property
    def time_parameter(self) -> str:
        return 't' if self == SweepKind.ENTANGLEMENT else 'delta_p'


HEADERS: Dict[SweepKind, List[str]] = {
    SweepKind.PROBABILITY: ['epsilon1', 'xi', 'epsilon2', 'delta_p', 'p_plus', 'p_minus'],
    SweepKind.QFI: [
        'epsilon2', 'xi', 'epsilon1', 'delta_p',
        'qfi_numerical', 'qfi_closed_form', 'classical_fisher', 'discrepancy_flag',
    ],
    SweepKind.ENTANGLEMENT: [
        't', 'xi', 'epsilon1', 'epsilon2', 'concurrence', 'concurrence_closed_form', 'purity_b',
    ],
}


@dataclass(frozen=True)
class SweepAxis:
    name: str
    lo: float
    hi: float
    step: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.lo, self.hi, self.step)):
            raise ConfigurationError(f"Axis '{self.name}' bounds must be finite.")
        if self.step <= 0:
            raise ConfigurationError(f"Axis '{self.name}' step must be > 0, got {self.step!r}.")
        if self.lo >= self.hi:
            raise ConfigurationError(f"Axis '{self.name}' needs lo < hi, got [{self.lo!r}, {self.hi!r}].")

    def values(self) -> np.ndarray:
        """lo, lo + step, ... up to hi inclusive, rounded to 12 decimals."""
        count = int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        return np.round(self.lo + self.step * np.arange(count), 12)


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind
    fixed: Mapping[str, float]
    axis: SweepAxis
    series_name: str
    series_values: Tuple[float, ...]
    delta_p: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'kind', SweepKind(self.kind))
        object.__setattr__(self, 'fixed', dict(self.fixed))
        object.__setattr__(self, 'series_values', tuple(float(v) for v in self.series_values))
        allowed = set(MODEL_PARAMETERS) | {self.kind.time_parameter}
        for name in (self.axis.name, self.series_name, *self.fixed):
            if name not in allowed:
                raise ConfigurationError(
                    f"Unknown {self.kind.value} sweep parameter '{name}'; expected one of {sorted(allowed)}."
                )
        if self.axis.name in self.fixed:
            raise ConfigurationError(f"Axis parameter '{self.axis.name}' is also fixed.")
        if self.series_name in self.fixed or self.series_name == self.axis.name:
            raise ConfigurationError(f"Series parameter '{self.series_name}' is also fixed or swept.")
        if not self.series_values:
            raise ConfigurationError("A sweep needs at least one series value.")
        bound = {self.axis.name, self.series_name, *self.fixed}
        if self.kind != SweepKind.ENTANGLEMENT and self.delta_p is not None:
            bound.add('delta_p')
        missing = allowed - bound
        if missing:
            raise ConfigurationError(f"Sweep leaves {sorted(missing)} unset.")

    @classmethod
    def from_config(
        cls,
        kind: SweepKind,
        section: Optional[Mapping[str, Any]] = None,
        params: Optional[Mapping[str, float]] = None
    ) -> SweepSpec:
        """
        Build a spec from settings.<KIND>_SWEEP overlaid with a config file.

        Fixed values are layered: settings defaults, then the config's model
        parameters, then the sweep section's own `fixed`. Inherited values for
        the swept parameters are dropped; explicit `fixed` entries are not.
        """
        kind = SweepKind(kind)
        defaults = getattr(settings, kind.settings_name)
        section = {k: v for k, v in (section or {}).items() if v is not None}
        axis = section.get('axis', defaults['axis'])
        series = section.get('series', defaults['series'])
        swept = {axis['name'], series['name']}

        fixed = {k: v for k, v in defaults.get('fixed', {}).items() if k not in swept}
        fixed.update({k: v for k, v in (params or {}).items() if k not in swept})
        fixed.update(section.get('fixed', {}))
        return cls(
            kind=kind,
            fixed=fixed,
            axis=SweepAxis(axis['name'], float(axis['lo']), float(axis['hi']), float(axis['step'])),
            series_name=series['name'],
            series_values=tuple(series['values']),
            delta_p=section.get('delta_p', defaults.get('delta_p')),
        )

    def points(self) -> List[Dict[str, float]]:
        """Fully bound parameter sets in axis-major, series-minor order."""
        points = []
        for axis_value in self.axis.values():
            for series_value in self.series_values:
                point = dict(self.fixed)
                if self.kind != SweepKind.ENTANGLEMENT and self.delta_p is not None:
                    point.setdefault('delta_p', float(self.delta_p))
                point[self.axis.name] = float(axis_value)
                point[self.series_name] = series_value
                points.append(point)
        return points

    def as_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'fixed': dict(sorted(self.fixed.items())),
            'axis': {'name': self.axis.name, 'lo': self.axis.lo, 'hi': self.axis.hi, 'step': self.axis.step},
            'series': {'name': self.series_name, 'values': list(self.series_values)},
            'delta_p': self.delta_p,
        }


def format_value(value: Any) -> str:
    """Shortest round-trip text of a table cell; missing values are empty."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _native(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def _meta_text(value: Any) -> str:
    return '' if value is None else str(value)


@dataclass
class SweepTable:
    """Sweep result: ordered header, one row per point, and provenance metadata."""
    header: List[str]
    frame: pd.DataFrame
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def rows(self) -> List[List[Any]]:
        return [[_native(v) for v in row] for row in self.frame.itertuples(index=False, name=None)]

    def to_csv(self) -> str:
        lines = [
            f"# tool_version={_meta_text(self.meta.get('tool_version'))}",
            f"# config_hash={_meta_text(self.meta.get('config_hash'))}",
            f"# seed={_meta_text(self.meta.get('seed'))}",
        ]
        body = self.frame[self.header].astype(object).map(format_value)
        return '\n'.join(lines) + '\n' + body.to_csv(index=False, lineterminator='\n')

    def to_json(self) -> bytes:
        payload = {'meta': self.meta, 'header': self.header, 'rows': self.rows}
        return JSONRenderer().render(payload) + b'\n'


def series_nondecreasing(
    table: SweepTable,
    column: str,
    axis_column: Optional[str] = None,
    series_column: Optional[str] = None
) -> Dict[str, bool]:
    """For each series value, whether `column` never decreases along the axis."""
    axis_column = axis_column or table.header[0]
    series_column = series_column or table.header[1]
    ordered = table.frame.sort_values([series_column, axis_column], kind='stable')
    return {
        format_value(series_value): bool(group[column].is_monotonic_increasing)
        for series_value, group in ordered.groupby(series_column, sort=True)
    }


def _clock_params(point: Mapping[str, float]) -> ClockParams:
    return ClockParams(eps1=point['eps1'], eps2=point['eps2'], xi=point['xi'])


def _probability_row(point: Mapping[str, float]) -> List[Any]:
    params = _clock_params(point)
    delta_p = point['delta_p']
    return [
        params.eps1, params.xi, params.eps2, delta_p,
        bob_probability(params, delta_p, Outcome.PLUS),
        bob_probability(params, delta_p, Outcome.MINUS),
    ]


def _qfi_row(point: Mapping[str, float]) -> List[Any]:
    params = _clock_params(point)
    delta_p = point['delta_p']
    numerical = qfi_numerical(params, delta_p)
    closed_form = qfi_closed_form(params, delta_p)
    return [
        params.eps2, params.xi, params.eps1, delta_p,
        numerical, closed_form, classical_fisher(params, delta_p),
        is_discrepant(closed_form, numerical),
    ]


def _entanglement_row(point: Mapping[str, float]) -> List[Any]:
    params = _clock_params(point)
    t = point['t']
    state = joint_state(params, t)
    return [
        t, params.xi, params.eps1, params.eps2,
        concurrence(state),
        concurrence_closed_form(params, t),
        purity(reduced_density(state, Subsystem.SECOND)),
    ]


ROW_BUILDERS: Dict[SweepKind, Callable[[Mapping[str, float]], List[Any]]] = {
    SweepKind.PROBABILITY: _probability_row,
    SweepKind.QFI: _qfi_row,
    SweepKind.ENTANGLEMENT: _entanglement_row,
}


class SweepService:
    """
    Evaluates sweep specifications into tables.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, workers or getattr(settings, 'SWEEP_WORKERS', 1))

    def run(self, spec: SweepSpec, meta: Optional[Dict[str, Any]] = None) -> SweepTable:
        points = spec.points()
        builder = ROW_BUILDERS[spec.kind]
        rows = self._evaluate(builder, points)

        header = HEADERS[spec.kind]
        frame = pd.DataFrame(rows, columns=header)
        numeric = frame.select_dtypes(include='number')
        if not np.isfinite(numeric.to_numpy(dtype=float)).all():
            raise NumericalFailure(f"{spec.kind.value} sweep produced non-finite values.")

        meta = dict(meta or {})
        meta.setdefault('config', {'sweep': spec.as_dict()})
        table = SweepTable(header=header, frame=frame, meta=meta)
        logger.info(
            f"{spec.kind.value} sweep: {len(spec.series_values)} series x "
            f"{len(spec.axis.values())} axis points = {len(frame)} rows"
        )
        return table

    def _evaluate(self, builder: Callable, points: Sequence[Mapping[str, float]]) -> List[List[Any]]:
        if self.workers == 1:
            return [builder(point) for point in points]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(builder, points))

    def run_probability_sweep(self, spec: SweepSpec, meta: Optional[Dict[str, Any]] = None) -> SweepTable:
        self._require(spec, SweepKind.PROBABILITY)
        return self.run(spec, meta)

    def run_qfi_sweep(self, spec: SweepSpec, meta: Optional[Dict[str, Any]] = None) -> SweepTable:
        self._require(spec, SweepKind.QFI)
        table = self.run(spec, meta)
        flagged = int(table.frame['discrepancy_flag'].sum())
        table.meta['discrepancy_rows'] = flagged
        table.meta['qfi_nondecreasing'] = series_nondecreasing(
            table, 'qfi_numerical', COLUMN_NAMES[spec.axis.name], COLUMN_NAMES[spec.series_name]
        )
        if flagged:
            logger.warning(f"Closed-form QFI disagrees with the numerical QFI on {flagged} of {len(table.frame)} rows")
        return table

    def run_entanglement_sweep(self, spec: SweepSpec, meta: Optional[Dict[str, Any]] = None) -> SweepTable:
        self._require(spec, SweepKind.ENTANGLEMENT)
        return self.run(spec, meta)

    @staticmethod
    def _require(spec: SweepSpec, kind: SweepKind) -> None:
        if spec.kind != kind:
            raise ConfigurationError(f"Expected a {kind.value} sweep, got {spec.kind.value}.")
