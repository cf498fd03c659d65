import sys
from pathlib import Path
from typing import Callable

import pytest

ROOT = Path(__file__).resolve().parents[1].parent
ROOT_STR = str(ROOT)
if ROOT_STR not in sys.path:
    sys.path.insert(0, ROOT_STR)

from hardball.config import reload_settings  # noqa: E402
from hardball.dynamics import SystemState  # noqa: E402
from hardball.engine import Trajectory, full_evolution, simulate  # noqa: E402
from hardball.scenarios import head_on, line_of_balls, random_admissible  # noqa: E402


@pytest.fixture
def head_on_state() -> SystemState:
    return head_on(2).state


@pytest.fixture
def line4_state() -> SystemState:
    return line_of_balls(4).state


@pytest.fixture
def line4_trajectory(line4_state: SystemState) -> Trajectory:
    return simulate(line4_state)


@pytest.fixture
def random_trajectory() -> Callable[..., Trajectory]:
    """Factory for the forward (or, with ``full=True``, two-sided) evolution of a random state."""

    def make(n: int = 4, d: int = 2, seed: int = 0, full: bool = False) -> Trajectory:
        state = random_admissible(n, d, seed=seed).state
        return full_evolution(state) if full else simulate(state)

    return make


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch: pytest.MonkeyPatch):
    for name in ("HARDBALL_THREADS", "HARDBALL_MAX_EVENTS", "HARDBALL_LOG_LEVEL", "HARDBALL_JSON_LOGS"):
        monkeypatch.delenv(name, raising=False)
    reload_settings()
    yield
    reload_settings()
