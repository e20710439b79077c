"""
Base Django settings for the gravclock simulator.
"""

import math
import os
from pathlib import Path

from scipy import constants as codata

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Set DJANGO_SECRET_KEY outside local runs
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'gravclock-local-only-not-a-secret'
)

# Application definition
INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',

    # Local apps
    'apps.qubits',
    'apps.clocks',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COMPACT_JSON': True,
    'STRICT_JSON': True,
    'UNICODE_JSON': True,
}

TOOL_VERSION = '0.1.0'


def _env_float(name: str, default: float) -> float:
    value = os.environ.get(name)
    return float(value) if value else default


# CODATA-2018 values (scipy.constants), overridable per environment
PHYSICAL_CONSTANTS = {
    'G': _env_float('GRAVCLOCK_G', codata.physical_constants['Newtonian constant of gravitation'][0]),
    'c': _env_float('GRAVCLOCK_C', codata.physical_constants['speed of light in vacuum'][0]),
    'hbar': _env_float('GRAVCLOCK_HBAR', codata.physical_constants['reduced Planck constant'][0]),
}

# Exact-arithmetic tolerances for dimension-2/4 states
STATE_ATOL = 1e-12
PSD_ATOL = 1e-10
CONDITIONING_MIN_PROBABILITY = 1e-15

# Maximum-likelihood estimation of the time difference
ESTIMATE_GRID_POINTS = 4096
ESTIMATE_REL_TOL = 1e-10
LIKELIHOOD_CLAMP = 1e-300

# Fisher information
QFI_BASE_STEP = 1e-2
QFI_RICHARDSON_RTOL = 1e-6
QFI_NEGATIVE_TOL = 1e-9
DISCREPANCY_RTOL = 1e-6
FISHER_REMOVABLE_VARIANCE = 1e-20

# Thread pool size for sweep points and Monte-Carlo replicates
SWEEP_WORKERS = int(os.environ.get('GRAVCLOCK_WORKERS', '1'))

# Figure and experiment defaults
PROBABILITY_SWEEP = {
    'fixed': {'eps2': 10.0},
    'axis': {'name': 'eps1', 'lo': 0.0, 'hi': 20.0, 'step': 0.01},
    'series': {'name': 'xi', 'values': [1.0, 2.0, 10.0]},
    # eps2 * delta_p = 2 pi
    'delta_p': math.pi / 5,
}

QFI_SWEEP = {
    'fixed': {'eps1': 10.0},
    'axis': {'name': 'eps2', 'lo': 1.0, 'hi': 20.0, 'step': 0.1},
    'series': {'name': 'xi', 'values': [1.0, 10.0, 100.0]},
    'delta_p': math.pi / 5,
}

ENTANGLEMENT_SWEEP = {
    'fixed': {'eps1': 10.0, 'eps2': 10.0},
    'axis': {'name': 't', 'lo': 0.0, 'hi': 2.0, 'step': 0.005},
    'series': {'name': 'xi', 'values': [10.0, 20.0, 100.0]},
}

ESTIMATION_EXPERIMENT = {
    'params': {'eps1': 10.0, 'eps2': 10.0, 'xi': 20.0},
    'delta_p': math.pi / 10,
    'n': 100000,
    'replicates': 200,
    'base_seed': 20190417,
    # P(+) falls monotonically up to cos(5 delta) = -0.354, delta ~ 0.387
    'window': [0.0, 0.35],
}
