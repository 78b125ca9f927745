import random
from pathlib import Path

import pytest

import arrangelib.exactla as la
from arrangelib.dualpair import dualize, make_pair, random_pair
from arrangelib.periods import WeightSystem

SAMPLES = Path(__file__).resolve().parent.parent / "sample"

# the points 0, 1, 2 on the line, with the chart hyperplane as the fourth column
EXAMPLE_ONE = [["1", "1", "1", "0"], ["0", "-1", "-2", "1"]]
FOUR_LINES = [["1", "0", "0", "1", "1"], ["0", "1", "0", "1", "2"], ["0", "0", "1", "1", "3"]]


@pytest.fixture
def example_one_matrix():
    return la.ExactMatrix(EXAMPLE_ONE)


@pytest.fixture
def example_one(example_one_matrix):
    return dualize(make_pair(example_one_matrix, 1))


@pytest.fixture
def four_lines():
    return dualize(make_pair(la.ExactMatrix(FOUR_LINES), 2))


@pytest.fixture
def unit_weights():
    return WeightSystem.ones(3)


@pytest.fixture
def samples():
    return SAMPLES


@pytest.fixture
def pair_factory():
    def _make(seed: int, k: int, n: int):
        return random_pair(random.Random(seed), k, n)

    return _make
