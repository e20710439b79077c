"""
SI <-> Planck-unit conversion for clock descriptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional

from django.conf import settings

from core.exceptions import InvalidParameterError

from .clockmodel import ClockParams


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}.")
    return value


@dataclass(frozen=True)
class PhysicalConstants:
    G: float
    c: float
    hbar: float

    def __post_init__(self) -> None:
        for name in ('G', 'c', 'hbar'):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    @classmethod
    def natural(cls) -> PhysicalConstants:
        return cls(G=1.0, c=1.0, hbar=1.0)

    @classmethod
    def from_settings(cls, overrides: Optional[Mapping[str, Any]] = None) -> PhysicalConstants:
        """Configured constants (CODATA-2018 by default) with optional overrides."""
        values: Dict[str, Any] = dict(settings.PHYSICAL_CONSTANTS)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(G=values['G'], c=values['c'], hbar=values['hbar'])

    def as_dict(self) -> Dict[str, float]:
        return {'G': self.G, 'c': self.c, 'hbar': self.hbar}


@dataclass(frozen=True)
class SiClockParams:
    """Energy gaps in joules and clock separation in metres."""
    delta_e1: float
    delta_e2: float
    x: float

    def __post_init__(self) -> None:
        delta_e1 = float(self.delta_e1)
        if not math.isfinite(delta_e1) or delta_e1 < 0:
            raise InvalidParameterError(f"delta_e1 must be >= 0, got {delta_e1!r}.")
        object.__setattr__(self, 'delta_e1', delta_e1)
        object.__setattr__(self, 'delta_e2', _positive('delta_e2', self.delta_e2))
        object.__setattr__(self, 'x', _positive('x', self.x))


@dataclass(frozen=True)
class PlanckScales:
    l_p: float
    t_p: float
    e_p: float


def planck_scales(k: PhysicalConstants) -> PlanckScales:
    l_p = math.sqrt(k.hbar * k.G / k.c ** 3)
    t_p = l_p / k.c
    return PlanckScales(l_p=l_p, t_p=t_p, e_p=k.hbar / t_p)


def to_dimensionless(si: SiClockParams, k: PhysicalConstants) -> ClockParams:
    scales = planck_scales(k)
    return ClockParams(
        eps1=si.delta_e1 / scales.e_p,
        eps2=si.delta_e2 / scales.e_p,
        xi=si.x / scales.l_p,
    )


def from_dimensionless(p: ClockParams, k: PhysicalConstants) -> SiClockParams:
    scales = planck_scales(k)
    return SiClockParams(
        delta_e1=p.eps1 * scales.e_p,
        delta_e2=p.eps2 * scales.e_p,
        x=p.xi * scales.l_p,
    )


def gravity_factor(si: SiClockParams, k: PhysicalConstants) -> float:
    """G * dE1 / (c^4 x); equals eps1 / xi."""
    return k.G * si.delta_e1 / (k.c ** 4 * si.x)


def time_to_planck(delta: float, k: PhysicalConstants) -> float:
    return delta / planck_scales(k).t_p


def time_from_planck(delta_p: float, k: PhysicalConstants) -> float:
    return delta_p * planck_scales(k).t_p
