import random

import pytest

import arrangelib.exactla as la
import arrangelib.parameters as params
from arrangelib.exceptions import InvalidArgumentsException
from arrangelib.matroid import TuttePolynomial, matroid_from_columns, tutte_brute_force, verify_duality_suite

U24 = {(2, 0): 1, (1, 0): 2, (0, 1): 2, (0, 2): 1}


def _random_matrix(rng: random.Random):
    rows = rng.randint(1, 4)
    cols = rng.randint(rows, 9)
    return la.ExactMatrix([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)])


def test_uniform_rank_two_on_four(example_one_matrix):
    m = matroid_from_columns(example_one_matrix)
    t = m.tutte()
    assert t.coefficients == U24
    assert t.b10 == 2 and t.b01 == 2 and t.b00 == 0
    assert t.evaluate(1, 1) == 6
    assert t.evaluate(2, 0) == 8
    assert t == tutte_brute_force(m)
    assert str(t) == "x^2 + y^2 + 2*x + 2*y"


def test_dual_is_uniform_again(example_one_matrix):
    m = matroid_from_columns(example_one_matrix)
    assert m.dual().tutte() == m.tutte().swap()
    assert m.dual().rank() == 2


def test_minors_and_closure(example_one_matrix):
    m = matroid_from_columns(example_one_matrix)
    assert m.closure([1]) == {1}
    assert m.closure([1, 2]) == {1, 2, 3, 4}
    assert m.contract([1]).tutte().coefficients == {(1, 0): 1, (0, 1): 1, (0, 2): 1}
    assert m.delete([4]).tutte().coefficients == {(2, 0): 1, (1, 0): 1, (0, 1): 1}
    with pytest.raises(InvalidArgumentsException):
        m.contract([])
    with pytest.raises(InvalidArgumentsException):
        m.rank([5])


def test_loops_and_isthmuses():
    m = matroid_from_columns(la.ExactMatrix([[1, 0, 0, 1], [0, 1, 0, 0]]))
    assert m.is_loop(3)
    assert m.is_isthmus(2)
    assert not m.is_isthmus(1)
    assert m.tutte() == TuttePolynomial({(2, 1): 1, (1, 2): 1})
    assert m.tutte().b10 == 0


def test_lengths_widths_volumes(example_one_matrix):
    m = matroid_from_columns(example_one_matrix)
    record = m.flat_record([1])
    assert (record.length, record.width, record.volume) == (1, 1, 1)
    assert m.length([1, 2, 3, 4]) == 0
    assert m.volume([1, 2, 3, 4]) == 0
    p = m.parallelism_record([1], 2, 4)
    assert p.volume == 1
    assert m.is_parallelism([1], 2, 4)
    assert not m.is_parallelism([1], 1, 4)
    assert len([f for f in m.flats() if f.rank == 1]) == 4


def test_parallel_class_closure():
    m = matroid_from_columns(la.ExactMatrix([[1, 2, 0, 1], [0, 0, 1, 1]]))
    assert m.closure([1]) == {1, 2}
    assert m.width([1, 2]) == 1
    assert m.length([1, 2]) == 1


def test_duality_suite_on_random_matrices():
    rng = random.Random(params.DEFAULT_SEED)
    for _ in range(200):
        m = matroid_from_columns(_random_matrix(rng))
        report = verify_duality_suite(m)
        failing = {name: check for name, check in report.items() if isinstance(check, dict)
                   and check[params.VERDICT] == params.FAIL}
        assert failing == {}
        assert m.tutte() == tutte_brute_force(m)


def test_rank_is_monotone_and_submodular():
    rng = random.Random(params.DEFAULT_SEED + 7)
    for _ in range(40):
        m = matroid_from_columns(_random_matrix(rng))
        ground = list(m.ground_set)
        assert m.rank([]) == 0
        for _ in range(25):
            x = set(rng.sample(ground, rng.randint(0, len(ground))))
            y = set(rng.sample(ground, rng.randint(0, len(ground))))
            e = rng.choice(ground)
            assert m.rank(x) <= m.rank(x | {e}) <= m.rank(x) + 1
            assert m.rank(x | y) + m.rank(x & y) <= m.rank(x) + m.rank(y)
            assert m.rank(x) <= len(x)
