import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes `oracles` importable

REPO = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session", autouse=True)
def _warm_numba():
    """Compile the search kernel once up front so timing tests stay honest."""
    import ttc
    from ttc import nets

    net = ttc.compile_network(nets.trace_pair(), 1)
    ttc.optimal_order_full(net)
