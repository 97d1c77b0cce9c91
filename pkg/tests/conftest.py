import os
import random
from importlib import resources

import pytest

import fh.examples


def example_path(name: str) -> str:
    return str(resources.files(fh.examples) / name)


@pytest.fixture
def seed() -> int:
    return int(os.environ.get("FH_SEED", "271828"))


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)
