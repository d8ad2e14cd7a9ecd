from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fracverify.spectral_circle import analyze, stack, trig, uniform_grid

settings.register_profile("fracverify", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fracverify")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def circle_identity():
    return stack([trig(cos={1: 1.0}), trig(sin={1: 1.0})])


@pytest.fixture
def z_squared():
    return stack([trig(cos={2: 1.0}), trig(sin={2: 1.0})])


@pytest.fixture
def perturbed_map():
    th = uniform_grid(256)
    ph = th + 0.3 * np.sin(th)
    return analyze(np.column_stack([np.cos(ph), np.sin(ph)]), 32)
