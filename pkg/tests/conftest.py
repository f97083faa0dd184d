import numpy as np
import pytest

from spinhalf.core import Axis, SpinState, normalize


def random_state(rng) -> SpinState:
    """A Haar-ish random normalized state from four gaussian draws."""
    while True:
        parts = rng.normal(size=4)
        state = SpinState(complex(parts[0], parts[1]), complex(parts[2], parts[3]))
        if state.norm_sq > 1e-6:
            return normalize(state)


def random_axis(rng) -> Axis:
    return Axis.from_direction(
        float(rng.uniform(0.0, np.pi)), float(rng.uniform(0.0, 2.0 * np.pi))
    )


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260811))
