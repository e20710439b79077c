import json
import math

import pytest

from apps.clocks.services.clockmodel import ClockParams


@pytest.fixture
def reference_params():
    """eps1 = eps2 = 10, xi = 20: zeta' = 5, the hand-checked operating point."""
    return ClockParams(eps1=10.0, eps2=10.0, xi=20.0)


@pytest.fixture
def reference_delta():
    return math.pi / 10


@pytest.fixture
def flat_params():
    return ClockParams(eps1=0.0, eps2=10.0, xi=20.0)


@pytest.fixture
def write_config(tmp_path):
    def write(payload, name='config.json'):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding='utf-8')
        return str(path)
    return write
