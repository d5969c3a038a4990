import sys
from pathlib import Path

import numpy as np
import pytest

# Add repository root to Python path
REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT))

import config
from utils.circuit import golden_circuit

GOLDEN_WORDS = [
    [0x0302, 0x0510, 0x0342, 0x3010, 0x0003, 0x0010, 0xa013, 0x0002, 0x0012, 0x0010],
    [0x0002, 0x0010, 0x0002, 0x5010, 0x0002, 0x0030, 0x0022, 0x0010, 0x0002, 0x0010],
]
GOLDEN_OUTCOMES = [
    [0, 1, 1, 0, 1, 0, 0, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1, 0, 0],
]
GOLDEN_S = [
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 0],
    [0] * 10,
]
GOLDEN_B = [
    ["00", "10", "11", "11", "10", "10", "10", "10", "01", "11"],
    ["00", "10", "10", "00", "10", "00", "00", "10", "10", "10"],
]


def golden_path(name):
    return REPO_ROOT / getattr(config, name)


@pytest.fixture
def circuit():
    return golden_circuit()


@pytest.fixture
def outcomes():
    return [list(row) for row in GOLDEN_OUTCOMES]


@pytest.fixture
def rng():
    return np.random.default_rng(config.RANDOM_SEED)


@pytest.fixture
def golden_outcomes_file():
    return golden_path("GOLDEN_OUTCOMES_FILE")

