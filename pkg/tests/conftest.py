"""Shared fixtures."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from dynamics.ermakov import solve_ermakov  # noqa: E402
from dynamics.model import FrequencySchedule, build_model  # noqa: E402
from dynamics.state import ModeState  # noqa: E402

QUENCH = dict(kind="quench", omega1_i=1.0, omega1_f=1.3, omega2_i=1.5, omega2_f=1.8)
TOY1 = dict(kind="toy1", alpha=math.pi / 4, wtilde1_i=1.0, wtilde1_f=0.0, wtilde2_i=2.0, wtilde2_f=0.5)
TOY2 = dict(kind="toy2", alpha=math.pi / 4, wtilde1_i=1.0, wtilde1_f="0.7i", wtilde2_i=2.0, wtilde2_f=0.5)

def mode_state(schedule: dict, times, alpha=None) -> ModeState:
    modes = build_model(FrequencySchedule(**schedule))
    t = np.asarray(times, dtype=float)
    first = solve_ermakov(modes.profile(1), t, mode=1)
    second = solve_ermakov(modes.profile(2), t, mode=2)
    return ModeState.from_trajectories(first, second, modes.alpha if alpha is None else alpha)

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

@pytest.fixture
def static_state():
    """ω′ = (1, 4) at α = π/4, no rates."""
    return ModeState.static(1.0, 4.0, math.pi / 4)

@pytest.fixture(scope="session")
def quench_series():
    """Quench preset (J = 1.1) on [0, 10]."""
    return mode_state({**QUENCH, "J": 1.1}, np.linspace(0.0, 10.0, 1001))

@pytest.fixture(scope="session")
def quench_oracle_states():
    """Quench preset (J = 1.1) at the oracle times."""
    return mode_state({**QUENCH, "J": 1.1}, [0.0, 0.5, 1.0, 2.0, 5.0])

@pytest.fixture(scope="session")
def toy1_series():
    return mode_state(TOY1, np.linspace(0.0, 10.0, 1001))

@pytest.fixture(scope="session")
def toy2_series():
    return mode_state(TOY2, np.linspace(0.0, 2.0, 201))
