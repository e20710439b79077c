"""
Custom exceptions for the simulator.

Each exception carries a default detail message and code, as DRF API
exceptions do, plus the process exit code that management commands
report for it.
"""

from rest_framework.exceptions import APIException


class SimulatorError(APIException):
    """Base class for all simulator failures."""
    status_code = 500
    exit_code = 1
    default_detail = 'Simulation failed.'
    default_code = 'simulator_error'


class ConfigurationError(SimulatorError):
    """Exception raised when a configuration file or CLI option is invalid."""
    status_code = 400
    exit_code = 1
    default_detail = 'Invalid configuration.'
    default_code = 'configuration_error'


class InvalidParameterError(ConfigurationError, ValueError):
    """Exception raised when a model parameter violates its domain."""
    default_detail = 'Parameter outside its allowed range.'
    default_code = 'invalid_parameter'


class StateValidationError(SimulatorError, ValueError):
    """Exception raised when a state or density matrix breaks its invariants."""
    status_code = 400
    exit_code = 1
    default_detail = 'Invalid quantum state.'
    default_code = 'invalid_state'


class NumericalFailure(SimulatorError):
    """Exception raised when a numerical procedure cannot be trusted."""
    exit_code = 2
    default_detail = 'Numerical procedure failed.'
    default_code = 'numerical_failure'


class ConditioningError(NumericalFailure):
    """Exception raised when conditioning on an outcome that cannot occur."""
    default_detail = 'Conditioning outcome has zero probability.'
    default_code = 'impossible_conditioning'


class EstimationError(NumericalFailure):
    """Exception raised when the likelihood carries no information."""
    default_detail = 'Likelihood is identically flat over the search window.'
    default_code = 'flat_likelihood'
