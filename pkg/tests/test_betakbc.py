import random
from fractions import Fraction

import pytest

import arrangelib.exactla as la
from arrangelib.betakbc import adjacent, betakbc_bases, chamber_bijection, count_bijections, expand_terms, flag, \
    form_value, log_form, orientation
from arrangelib.dualpair import Side
from arrangelib.exceptions import BijectionException, SingularEvaluationException
from arrangelib.geometry import affine_forms, arrangement_from_matrix, coordinate_matrix
from arrangelib.periods import WeightSystem


@pytest.fixture
def primal(example_one):
    return affine_forms(example_one, Side.PRIMAL)


@pytest.fixture
def plane(four_lines):
    return affine_forms(four_lines, Side.PRIMAL)


def test_bases_of_three_points(primal, example_one):
    assert [b.hyperplanes for b in betakbc_bases(primal)] == [(2,), (3,)]
    dual = affine_forms(example_one, Side.DUAL)
    assert [b.hyperplanes for b in betakbc_bases(dual)] == [(2,), (3,)]


def test_bases_of_four_lines(plane):
    bases = betakbc_bases(plane)
    assert [b.hyperplanes for b in bases] == [(2, 3), (2, 4), (3, 4)]
    assert bases[0].vertex_flat == {2, 3}


def test_flags(plane):
    f = flag(plane, betakbc_bases(plane)[0])
    assert f.hyperplane_sets == ({2, 3}, {3})
    assert [e.dim for e in f.edges] == [0, 1]


def test_bijection_of_three_points(primal):
    bases = betakbc_bases(primal)
    pairs = chamber_bijection(primal, bases, primal.chambers())
    assert [(b.hyperplanes, c.sign_vector) for b, c in pairs] == [((2,), "+--"), ((3,), "++-")]
    for b, c in pairs:
        assert adjacent(c, flag(primal, b))
        assert orientation(primal, c, flag(primal, b)) == -1
    with pytest.raises(BijectionException):
        chamber_bijection(primal, bases[:1], primal.chambers())


def test_bijection_of_four_lines(plane):
    bases = betakbc_bases(plane)
    pairs = chamber_bijection(plane, bases, plane.chambers())
    assert len({c.signs for _, c in pairs}) == 3
    shuffled = chamber_bijection(plane, bases, plane.chambers(), random.Random(3))
    for b, c in shuffled:
        assert adjacent(c, flag(plane, b))
        assert orientation(plane, c, flag(plane, b)) in (-1, 1)


def test_form_terms(primal):
    phi = log_form(primal, betakbc_bases(primal)[0])
    assert expand_terms(phi, WeightSystem.ones(3)) == [(1, (2,))]
    assert expand_terms(phi, WeightSystem(["1/4", "1/2", "3/4"])) == [(Fraction(1, 2), (2,))]


def test_form_values(primal, unit_weights):
    phi = log_form(primal, betakbc_bases(primal)[0])
    assert form_value(phi, unit_weights, (Fraction(1, 2),)) == pytest.approx(-2.0)
    with pytest.raises(SingularEvaluationException):
        form_value(phi, unit_weights, (Fraction(1),))


def test_forms_do_not_vanish_inside_chambers(plane):
    weights = WeightSystem(["5/4", "3/2", "2", "7/4"])
    for b in betakbc_bases(plane):
        phi = log_form(plane, b)
        for c in plane.bounded_chambers():
            assert form_value(phi, weights, c.interior_point) != 0


def test_bijection_counts(primal, plane):
    assert count_bijections(primal, betakbc_bases(primal), primal.chambers()) == 1
    assert count_bijections(plane, betakbc_bases(plane), plane.chambers()) >= 1
    with pytest.raises(BijectionException):
        count_bijections(primal, betakbc_bases(primal)[:1], primal.chambers())


def _translated(a, shift):
    # f(x + shift) for every form, the chart column last
    columns = coordinate_matrix(a).transpose().rows
    moved = [list(c[:-1]) + [c[-1] + sum(g * s for g, s in zip(c[:-1], shift))] for c in columns[:-1]]
    moved.append(list(columns[-1]))
    return arrangement_from_matrix(la.ExactMatrix(moved, a.dim + 1).transpose(), a.side)


@pytest.mark.parametrize("shift", [(Fraction(1, 3), Fraction(-2)), (Fraction(5), Fraction(7, 2))])
def test_form_values_follow_translation(plane, shift):
    weights = WeightSystem(["5/4", "3/2", "2", "7/4"])
    moved = _translated(plane, shift)
    bases = betakbc_bases(plane)
    assert [b.hyperplanes for b in betakbc_bases(moved)] == [b.hyperplanes for b in bases]
    for b, moved_b in zip(bases, betakbc_bases(moved)):
        phi, moved_phi = log_form(plane, b), log_form(moved, moved_b)
        for c in plane.bounded_chambers():
            x = c.interior_point
            y = tuple(p - s for p, s in zip(x, shift))
            assert form_value(moved_phi, weights, y) == pytest.approx(form_value(phi, weights, x), rel=1e-12)
