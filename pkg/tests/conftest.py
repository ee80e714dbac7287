import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from phaseloc import StateAnalysis, make_state  # noqa: E402
from phaseloc.battery import DEFAULT_BATTERY  # noqa: E402


class _Analyses(dict):
    """StateAnalysis per descriptor at default cutoff and grid, built on first use."""

    def __missing__(self, desc):
        value = self[desc] = StateAnalysis(make_state(desc))
        return value


@pytest.fixture(scope="session")
def analyses():
    return _Analyses()


@pytest.fixture(scope="session")
def battery():
    return DEFAULT_BATTERY
