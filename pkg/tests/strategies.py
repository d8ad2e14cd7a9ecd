"""Hypothesis strategies shared by the test modules."""
from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from fracverify.spectral_circle import CircleFunction, random_trig_polynomial


@st.composite
def trig_polys(draw, max_degree: int = 8, max_m: int = 3, m: int | None = None) -> CircleFunction:
    seed = draw(st.integers(0, 2**32 - 1))
    degree = draw(st.integers(1, max_degree))
    comps = m if m is not None else draw(st.integers(1, max_m))
    return random_trig_polynomial(np.random.default_rng(seed), degree, m=comps)


angles = st.floats(0.0, 2 * np.pi, allow_nan=False, exclude_max=True)
