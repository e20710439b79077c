"""
DRF serializers for simulation config files and command results.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from rest_framework import serializers

from core.exceptions import ConfigurationError

from .services.clockmodel import ClockParams
from .services.protocol import MAX_SEED
from .services.units import PhysicalConstants, SiClockParams, to_dimensionless

SWEEP_PARAMETERS = ['eps1', 'eps2', 'xi', 'delta_p', 't']


class FiniteFloatField(serializers.FloatField):
    """FloatField that rejects NaN and infinities."""

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            raise serializers.ValidationError("A finite number is required.")
        return value


class PositiveFloatField(FiniteFloatField):

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if value <= 0:
            raise serializers.ValidationError("Must be greater than zero.")
        return value


class ConstantsSerializer(serializers.Serializer):
    """Optional SI overrides of the physical constants."""
    G = PositiveFloatField(required=False)
    c = PositiveFloatField(required=False)
    hbar = PositiveFloatField(required=False)


class ClockParamsSerializer(serializers.Serializer):
    """Dimensionless clock parameters."""
    eps1 = FiniteFloatField(min_value=0.0)
    eps2 = PositiveFloatField()
    xi = PositiveFloatField()


class SiClockParamsSerializer(serializers.Serializer):
    """Clock parameters in SI units."""
    delta_e1_J = FiniteFloatField(min_value=0.0)
    delta_e2_J = PositiveFloatField()
    x_m = PositiveFloatField()


class SweepAxisSerializer(serializers.Serializer):
    name = serializers.ChoiceField(choices=SWEEP_PARAMETERS)
    lo = FiniteFloatField()
    hi = FiniteFloatField()
    step = PositiveFloatField()

    def validate(self, data):
        if data['lo'] >= data['hi']:
            raise serializers.ValidationError("Axis requires lo < hi.")
        return data


class SweepSeriesSerializer(serializers.Serializer):
    name = serializers.ChoiceField(choices=SWEEP_PARAMETERS)
    values = serializers.ListField(child=FiniteFloatField(), allow_empty=False)


class SweepSectionSerializer(serializers.Serializer):
    fixed = serializers.DictField(child=FiniteFloatField(), required=False)
    axis = SweepAxisSerializer(required=False)
    series = SweepSeriesSerializer(required=False)
    delta_p = FiniteFloatField(required=False)

    def validate_fixed(self, value):
        unknown = sorted(set(value) - set(SWEEP_PARAMETERS))
        if unknown:
            raise serializers.ValidationError(f"Unknown fixed parameters: {', '.join(unknown)}.")
        return value


class EstimateSectionSerializer(serializers.Serializer):
    delta_p = FiniteFloatField(required=False)
    n = serializers.IntegerField(min_value=1, required=False)
    replicates = serializers.IntegerField(min_value=1, required=False)
    base_seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, required=False)
    window = serializers.ListField(
        child=FiniteFloatField(), min_length=2, max_length=2, required=False, allow_null=True
    )

    def validate_window(self, value):
        if value is not None and value[0] >= value[1]:
            raise serializers.ValidationError("Window requires lo < hi.")
        return value


@dataclass
class SimulationConfig:
    """Validated contents of a config file."""
    constants: PhysicalConstants
    params: Optional[ClockParams] = None
    sweep: Dict[str, Any] = field(default_factory=dict)
    estimate: Dict[str, Any] = field(default_factory=dict)


class SimulationConfigSerializer(serializers.Serializer):
    """
    Top-level config file: `constants`, `params` or `si_params`, `sweep`, `estimate`.
    """
    constants = ConstantsSerializer(required=False)
    params = ClockParamsSerializer(required=False)
    si_params = SiClockParamsSerializer(required=False)
    sweep = SweepSectionSerializer(required=False)
    estimate = EstimateSectionSerializer(required=False)

    def validate(self, data):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError(f"Unknown config sections: {', '.join(unknown)}.")
        if 'params' in data and 'si_params' in data:
            raise serializers.ValidationError("Give either params or si_params, not both.")
        return data

    def build(self) -> SimulationConfig:
        """Resolve validated data into domain objects."""
        data = self.validated_data
        constants = PhysicalConstants.from_settings(data.get('constants'))
        params = None
        if 'params' in data:
            params = ClockParams(**data['params'])
        elif 'si_params' in data:
            si = data['si_params']
            params = to_dimensionless(
                SiClockParams(delta_e1=si['delta_e1_J'], delta_e2=si['delta_e2_J'], x=si['x_m']),
                constants,
            )
        return SimulationConfig(
            constants=constants,
            params=params,
            sweep=dict(data.get('sweep', {})),
            estimate=dict(data.get('estimate', {})),
        )


def load_config(payload: Any) -> SimulationConfig:
    """Validate a parsed JSON payload, raising ConfigurationError on any problem."""
    if not isinstance(payload, dict):
        raise ConfigurationError("Config file must contain a JSON object.")
    serializer = SimulationConfigSerializer(data=payload)
    if not serializer.is_valid():
        raise ConfigurationError(serializer.errors)
    return serializer.build()


class MeasurementRecordSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    k_plus = serializers.IntegerField()
    seed = serializers.IntegerField()
    config_hash = serializers.CharField()


class MetrologyReportSerializer(serializers.Serializer):
    delta_p = serializers.FloatField()
    n = serializers.IntegerField()
    qfi_numerical = serializers.FloatField()
    qfi_closed_form = serializers.FloatField()
    classical_fisher = serializers.FloatField()
    delta_precision = serializers.FloatField(allow_null=True)
    classical_precision = serializers.FloatField(allow_null=True)
    discrepancy_flag = serializers.BooleanField()


class ReplicateSerializer(serializers.Serializer):
    replicate = serializers.IntegerField()
    record = MeasurementRecordSerializer()
    delta_hat = serializers.FloatField()
    log_likelihood = serializers.FloatField()
    stderr_cr = serializers.FloatField(allow_null=True)


class ExperimentReportSerializer(serializers.Serializer):
    """JSON output of the estimate command."""
    meta = serializers.DictField()
    experiment = serializers.SerializerMethodField()
    metrology = MetrologyReportSerializer()
    summary = serializers.DictField()
    replicates = serializers.SerializerMethodField()

    def get_experiment(self, report):
        return report.spec.as_dict()

    def get_replicates(self, report):
        return ReplicateSerializer(report.replicate_rows(), many=True).data


class ModeComparisonSerializer(serializers.Serializer):
    paper_plus_probability = serializers.FloatField()
    full_plus_probability = serializers.FloatField()
    paper_conditioning_probability = serializers.FloatField()
    full_conditioning_probability = serializers.FloatField()
    fidelity = serializers.FloatField()
    modes_agree = serializers.BooleanField()


class ProbabilityPointSerializer(serializers.Serializer):
    """Single-point output of the prob command."""
    params = ClockParamsSerializer()
    delta_p = serializers.FloatField()
    p_plus = serializers.FloatField()
    p_minus = serializers.FloatField()
    mode = serializers.CharField()
    alice_outcome = serializers.CharField()
    conditioning_probability = serializers.FloatField()
    bob_plus_probability = serializers.FloatField()
    mode_comparison = ModeComparisonSerializer(allow_null=True)
