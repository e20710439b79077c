import pytest
from django.apps import apps
from rest_framework.exceptions import APIException

from core.exceptions import (
    ConditioningError, ConfigurationError, EstimationError, InvalidParameterError, NumericalFailure,
    SimulatorError, StateValidationError,
)


class TestSimulatorErrors:

    @pytest.mark.parametrize('exc_class, exit_code, status_code', [
        (ConfigurationError, 1, 400),
        (InvalidParameterError, 1, 400),
        (StateValidationError, 1, 400),
        (NumericalFailure, 2, 500),
        (ConditioningError, 2, 500),
        (EstimationError, 2, 500),
    ])
    def test_exit_and_status_codes(self, exc_class, exit_code, status_code):
        exc = exc_class()
        assert isinstance(exc, SimulatorError)
        assert isinstance(exc, APIException)
        assert (exc.exit_code, exc.status_code) == (exit_code, status_code)

    def test_default_detail_and_code(self):
        exc = EstimationError()
        assert str(exc) == 'Likelihood is identically flat over the search window.'
        assert exc.get_codes() == 'flat_likelihood'

    def test_explicit_detail_and_code(self):
        exc = NumericalFailure('QFI went negative', code='negative_qfi')
        assert exc.detail == 'QFI went negative'
        assert exc.get_codes() == 'negative_qfi'

    def test_field_errors_keep_their_structure(self):
        exc = ConfigurationError({'params': ['eps2 must be positive.']})
        assert exc.get_codes() == {'params': ['configuration_error']}

    def test_parameter_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            raise InvalidParameterError('xi must be positive.')


def test_only_simulator_apps_are_installed():
    assert [config.name for config in apps.get_app_configs()] == ['rest_framework', 'apps.qubits', 'apps.clocks']
