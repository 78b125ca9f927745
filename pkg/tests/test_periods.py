import cmath
import math
import random
from fractions import Fraction

import pytest

import arrangelib.parameters as params
from arrangelib.dualpair import Side
from arrangelib.exceptions import WeightDomainException, InvalidArgumentsException, InvariantViolationException
from arrangelib.geometry import affine_forms, edge_geometry
from arrangelib.periods import BranchAssignment, WeightSystem, _log_critical, associated_branches, \
    beta_function, critical_value, det_pm, gamma_side, period_matrix, prepare_side, random_orders, special_branches, \
    verify_betaprod, verify_critical_products, verify_evaluation, verify_main
from arrangelib.quadrature import QuadratureSpec

SPEC = QuadratureSpec(degree=16, max_refinements=4, tolerance=1e-11)
SINGULAR = ["1/4", "1/2", "3/4"]


def _log_gamma_ratio(alphas):
    return sum(math.lgamma(a + 1) for a in alphas) - math.lgamma(sum(alphas) + 1)


def test_weight_system():
    w = WeightSystem(["1/2", "1", "3"])
    assert w.alpha_infinity == Fraction(-9, 2)
    assert w.alpha(4) == Fraction(-9, 2)
    assert w.edge_weight({1, 4}) == -4
    with pytest.raises(WeightDomainException):
        WeightSystem(["1", "0"])
    with pytest.raises(InvalidArgumentsException):
        w.alpha(5)


def test_special_branches(example_one, unit_weights):
    a = affine_forms(example_one, Side.PRIMAL)
    ba = special_branches(a, unit_weights)
    assert ba.half_turns[(2, frozenset({1}))] == 1
    assert ba.half_turns[(1, frozenset({2}))] == 0
    assert ba.half_turns[(1, frozenset({3}))] == 0
    assert ba.theta(3, {1}) == pytest.approx(math.pi)


def test_critical_values(example_one):
    w = WeightSystem(SINGULAR)
    a = affine_forms(example_one, Side.PRIMAL)
    ba = special_branches(a, w)
    assert critical_value(2, edge_geometry(a, {1}), ba) == pytest.approx(cmath.exp(1j * math.pi * 0.5))
    assert critical_value(3, edge_geometry(a, {1}), ba) == pytest.approx(2 ** 0.75 * cmath.exp(1j * math.pi * 0.75))


def test_associated_branches_flip(example_one, unit_weights):
    primal = affine_forms(example_one, Side.PRIMAL)
    dual = affine_forms(example_one, Side.DUAL)
    ba = special_branches(primal, unit_weights)
    dual_ba = associated_branches(ba, dual)
    hyperplanes = frozenset(dual.hyperplanes)
    for (j, flat), h in dual_ba.half_turns.items():
        assert ba.half_turns[(j, hyperplanes - flat - {j})] == 1 - h


def test_beta_function(example_one, unit_weights):
    a = affine_forms(example_one, Side.PRIMAL)
    assert beta_function(a, unit_weights) == pytest.approx(math.log(1 / 6))
    assert beta_function(a, WeightSystem(SINGULAR)) == pytest.approx(_log_gamma_ratio([0.25, 0.5, 0.75]))
    assert beta_function(affine_forms(example_one, Side.DUAL), unit_weights) == pytest.approx(math.log(1 / 6))
    assert gamma_side(a, unit_weights, special_branches(a, unit_weights)).beta_function_log == \
        pytest.approx(math.log(1 / 6))


def test_period_matrix_of_three_points(example_one, unit_weights):
    a = affine_forms(example_one, Side.PRIMAL)
    side = prepare_side(a, unit_weights)
    pm = period_matrix(a, unit_weights, side.branches, side.forms, side.pairs, SPEC)
    expected = [[2 / 3, 1 / 6], [2 / 3, -5 / 6]]
    for s in range(2):
        for t in range(2):
            assert pm.entries[s, t] == pytest.approx(expected[s][t], abs=1e-12)
    assert det_pm(pm) == pytest.approx(-2 / 3, abs=1e-12)


def test_evaluation_of_three_points(example_one, unit_weights):
    report = verify_evaluation(affine_forms(example_one, Side.PRIMAL), unit_weights, SPEC)
    assert report[params.VERDICT] == params.PASS
    assert report["exact_phase_agrees"]
    assert report[params.BETA] == 2


@pytest.mark.parametrize("side", list(Side))
def test_evaluation_with_singular_weights(example_one, side):
    report = verify_evaluation(affine_forms(example_one, side), WeightSystem(SINGULAR), SPEC)
    assert report[params.VERDICT] == params.PASS


def test_main_identity_of_three_points(example_one, unit_weights):
    report = verify_main(example_one, unit_weights, SPEC)
    assert report[params.VERDICT] == params.PASS
    assert report[params.VALUE] == pytest.approx(1 / 36, abs=1e-10)
    assert report["determinants"][Side.PRIMAL.value] == pytest.approx(-2 / 3, abs=1e-10)


def test_main_identity_with_singular_weights(example_one):
    report = verify_main(example_one, WeightSystem(SINGULAR), SPEC)
    assert report["modulus_ratio"][params.VERDICT] == params.PASS
    assert report["phase_mod_pi"][params.VERDICT] == params.PASS
    expected = 2 * _log_gamma_ratio([0.25, 0.5, 0.75])
    assert math.log(abs(report[params.VALUE])) == pytest.approx(expected, abs=1e-8)


def test_products_on_three_points(example_one):
    w = WeightSystem(SINGULAR)
    assert verify_betaprod(example_one, w)[params.VERDICT] == params.PASS
    assert verify_critical_products(example_one, w)[params.VERDICT] == params.PASS


def test_four_lines(four_lines):
    w = WeightSystem(["5/4", "3/2", "2", "7/4"])
    for side in Side:
        report = verify_evaluation(affine_forms(four_lines, side), w, SPEC, rng=random.Random(11), rematchings=3)
        assert report[params.VERDICT] == params.PASS
        rematching = report["rematching"]
        assert rematching["admissible_matchings"] >= rematching["distinct_drawn"] >= 1
        assert rematching["spread"][params.VALUE] < 1e-10
    assert verify_main(four_lines, w, SPEC)[params.VERDICT] == params.PASS


@pytest.mark.parametrize("side", list(Side))
def test_relabeling_keeps_the_modulus(four_lines, side):
    w = WeightSystem(["5/4", "3/2", "2", "7/4"])
    orders = [(2, 1, 3, 4), (4, 3, 2, 1), (3, 4, 1, 2)]
    report = verify_evaluation(affine_forms(four_lines, side), w, SPEC, orders=orders)
    relabeling = report["relabeling"]
    assert relabeling["permuted"] == 3
    assert relabeling["changed_bases"] >= 1
    assert relabeling["spread"][params.VALUE] < 1e-9
    assert relabeling[params.VERDICT] == params.PASS
    assert report[params.VERDICT] == params.PASS


def test_relabeling_of_three_points(example_one):
    a = affine_forms(example_one, Side.PRIMAL)
    w = WeightSystem(SINGULAR)
    report = verify_evaluation(a, w, SPEC, orders=random_orders(random.Random(5), a.hyperplanes, 2))
    relabeling = report["relabeling"]
    assert relabeling["permuted"] == 2
    assert all(tuple(r["order"]) != (1, 2, 3) for r in relabeling["runs"])
    assert relabeling["spread"][params.VALUE] < 1e-9

    moved = verify_evaluation(a, w, SPEC, orders=[(3, 1, 2)])["relabeling"]
    assert moved["runs"][0]["bases"] == [[1], [2]]
    assert moved["changed_bases"] == 1
    assert moved["spread"][params.VALUE] < 1e-9


def test_identity_order_is_not_a_relabeling(example_one, unit_weights):
    a = affine_forms(example_one, Side.PRIMAL)
    relabeling = verify_evaluation(a, unit_weights, SPEC, orders=[(1, 2, 3)])["relabeling"]
    assert relabeling["permuted"] == 0
    assert relabeling[params.VERDICT] == params.NOT_APPLICABLE
    assert random_orders(random.Random(1), (1,), 3) == []


def _chamber_critical_log(a, ba):
    total = 0j
    for c in a.bounded_chambers():
        for j in a.hyperplanes:
            _, edge = a.external_support(c, j)
            alpha = float(ba.weights.alpha(j))
            total += alpha * math.log(abs(float(a.form(j)(edge.point)))) + 1j * alpha * ba.theta(j, edge.flat)
    return total


def test_critical_product_over_parallelisms(example_one, four_lines):
    for d, w in ((example_one, WeightSystem(SINGULAR)), (four_lines, WeightSystem(["5/4", "3/2", "2", "7/4"]))):
        for side in Side:
            a = affine_forms(d, side)
            ba = special_branches(a, w)
            assert _log_critical(a, ba) == pytest.approx(_chamber_critical_log(a, ba), abs=1e-12)
    a = affine_forms(example_one, Side.PRIMAL)
    with pytest.raises(InvariantViolationException):
        _log_critical(a, BranchAssignment(a, WeightSystem(SINGULAR)))


@pytest.mark.parametrize("k,n", [(1, 2), (2, 1)])
def test_random_pairs(pair_factory, k, n):
    rng = random.Random(params.DEFAULT_SEED + k)
    for seed in range(2):
        d = pair_factory(params.DEFAULT_SEED + 100 + seed, k, n)
        w = WeightSystem([Fraction(rng.randint(5, 12), 4) for _ in range(d.N)])
        for side in Side:
            assert verify_evaluation(affine_forms(d, side), w, SPEC)[params.VERDICT] == params.PASS
        assert verify_main(d, w, SPEC)[params.VERDICT] == params.PASS
        assert verify_betaprod(d, w)[params.VERDICT] == params.PASS
        assert verify_critical_products(d, w)[params.VERDICT] == params.PASS


def test_random_planes(pair_factory):
    rng = random.Random(params.DEFAULT_SEED + 22)
    d = pair_factory(params.DEFAULT_SEED + 122, 2, 2)
    w = WeightSystem([Fraction(rng.randint(5, 12), 4) for _ in range(d.N)])
    for side in Side:
        assert verify_evaluation(affine_forms(d, side), w, SPEC)[params.VERDICT] == params.PASS
    assert verify_main(d, w, SPEC)[params.VERDICT] == params.PASS


def test_random_points_with_singular_weights(pair_factory):
    rng = random.Random(params.DEFAULT_SEED + 11)
    for seed in range(3):
        d = pair_factory(params.DEFAULT_SEED + 111 + seed, 1, 1)
        w = WeightSystem([rng.choice(SINGULAR) for _ in range(d.N)])
        for side in Side:
            assert verify_evaluation(affine_forms(d, side), w, SPEC)[params.VERDICT] == params.PASS
        report = verify_main(d, w, SPEC)
        assert report["modulus_ratio"][params.VERDICT] == params.PASS
        assert report["phase_mod_pi"][params.VERDICT] == params.PASS
