import random
from fractions import Fraction

import pytest

import arrangelib.exactla as la
import arrangelib.parameters as params
from arrangelib.exceptions import DimensionException, RankDeficiencyException, InvalidArgumentsException


def test_rationals_parse_exactly():
    assert la.to_rational("-3/6") == Fraction(-1, 2)
    assert la.format_rational(Fraction(4, 2)) == "2"
    assert la.format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(InvalidArgumentsException):
        la.to_rational("1/0")
    with pytest.raises(InvalidArgumentsException):
        la.to_rational(0.5)


def test_ragged_rows_rejected():
    with pytest.raises(DimensionException):
        la.ExactMatrix([[1, 2], [3]])


def test_determinant_and_rank():
    m = la.ExactMatrix([[1, 2], [3, 4]])
    assert la.determinant(m) == -2
    assert la.rank(m) == 2
    assert la.determinant(la.ExactMatrix([["1/2", "1/3"], ["1/4", "1/6"]])) == 0
    assert la.rank(la.ExactMatrix([[1, 2, 3], [2, 4, 6]])) == 1
    assert la.determinant(la.ExactMatrix([], 0)) == 1


def test_minor_keeps_column_order(example_one_matrix):
    assert la.minor(example_one_matrix, [0, 1], [0, 1]) == -1
    assert la.minor(example_one_matrix, [0, 1], [1, 0]) == 1
    with pytest.raises(DimensionException):
        la.minor(example_one_matrix, [0, 1], [0, 0])
    with pytest.raises(DimensionException):
        la.minor(example_one_matrix, [0, 1], [0, 4])


def test_nullspace_annihilates(example_one_matrix):
    kernel = la.nullspace_basis(example_one_matrix)
    assert kernel.nrows == 2
    assert (example_one_matrix @ kernel.transpose()).is_zero()


def test_inverse():
    m = la.ExactMatrix([[2, 1], [7, 4]])
    assert m @ la.inverse(m) == la.ExactMatrix.identity(2)
    with pytest.raises(RankDeficiencyException):
        la.inverse(la.ExactMatrix([[1, 2], [2, 4]]))


def test_completion_appends_lowest_unit_vectors(example_one_matrix):
    completion = la.complete_to_square(example_one_matrix)
    assert completion.rows[2:] == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert la.determinant(completion) == 1
    with pytest.raises(RankDeficiencyException):
        la.complete_to_square(la.ExactMatrix([[1, 1], [2, 2]]))


def test_same_row_space():
    a = la.ExactMatrix([[1, 0, 1], [0, 1, 1]])
    b = la.ExactMatrix([[1, 1, 2], [1, -1, 0]])
    assert la.same_row_space(a, b)
    assert not la.same_row_space(a, la.ExactMatrix([[1, 0, 0], [0, 1, 0]]))


def test_solve_affine():
    point, directions = la.solve_affine([(1, 0)], [Fraction(-2)], 2)
    assert point == (2, 0)
    assert directions.nrows == 1
    assert la.solve_affine([(1, 0), (1, 0)], [0, 1], 2) is None
    origin, everything = la.solve_affine([], [], 3)
    assert origin == (0, 0, 0)
    assert everything == la.ExactMatrix.identity(3)


def _cofactor_determinant(rows):
    if len(rows) == 0:
        return Fraction(1)
    total = Fraction(0)
    for j, entry in enumerate(rows[0]):
        if entry != 0:
            rest = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * entry * _cofactor_determinant(rest)
    return total


def test_minors_match_cofactor_expansion():
    rng = random.Random(params.DEFAULT_SEED)
    for _ in range(300):
        nrows = rng.randint(1, 5)
        ncols = rng.randint(nrows, 6)
        m = la.ExactMatrix([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(ncols)]
                            for _ in range(nrows)])
        size = rng.randint(1, nrows)
        row_idx = rng.sample(range(nrows), size)
        col_idx = rng.sample(range(ncols), size)
        square = [[m[i, j] for j in col_idx] for i in row_idx]
        assert la.minor(m, row_idx, col_idx) == _cofactor_determinant(square)


def test_rank_plus_nullity_is_column_count():
    rng = random.Random(params.DEFAULT_SEED + 1)
    for _ in range(200):
        nrows = rng.randint(1, 5)
        ncols = rng.randint(1, 7)
        # low-rank products make rank deficiency common
        inner = rng.randint(1, min(nrows, ncols))
        left = la.ExactMatrix([[rng.randint(-2, 2) for _ in range(inner)] for _ in range(nrows)])
        right = la.ExactMatrix([[rng.randint(-2, 2) for _ in range(ncols)] for _ in range(inner)])
        m = left @ right
        kernel = la.nullspace_basis(m)
        assert la.rank(m) + kernel.nrows == ncols
        assert la.rank(kernel) == kernel.nrows
        if kernel.nrows:
            assert (m @ kernel.transpose()).is_zero()
