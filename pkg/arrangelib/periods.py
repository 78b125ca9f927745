"""
Weighted period matrices of the affine arrangements of a pair, their determinants, the Gamma side of the
determinant formulas and the drivers that compare the two.
"""
import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.betakbc import betakbc_bases, chamber_bijection, count_bijections, expand_terms, flag, log_form, \
    orientation
from arrangelib.dualpair import DualPair, Side
from arrangelib.exceptions import WeightDomainException, InvariantViolationException, DualityViolationException, \
    InvalidArgumentsException
from arrangelib.geometry import AffineArrangement, EdgeGeom, affine_forms, edge_geometry, relabel
from arrangelib.quadrature import QuadratureSpec, flag_simplices, integrate_chamber

log = utils.setup_logging(f"{params.APP_NAME}.periods")


class WeightSystem:
    _alphas = None

    def __init__(self, alphas):
        self._alphas = tuple(la.to_rational(x) for x in alphas)
        if len(self._alphas) == 0:
            raise InvalidArgumentsException("At least one weight is required")
        for j, x in enumerate(self._alphas, start=1):
            if x <= 0:
                raise WeightDomainException(f"Weight alpha_{j} = {la.format_rational(x)} is not positive")

    @classmethod
    def ones(cls, n: int):
        return cls([1] * n)

    @property
    def alphas(self) -> tuple:
        return self._alphas

    @property
    def N(self) -> int:
        return len(self._alphas)

    @property
    def alpha_infinity(self) -> Fraction:
        return -sum(self._alphas, Fraction(0))

    def alpha(self, j: int) -> Fraction:
        if j == self.N + 1:
            return self.alpha_infinity
        if j < 1 or j > self.N:
            raise InvalidArgumentsException(f"No weight for hyperplane {j}")
        return self._alphas[j - 1]

    def edge_weight(self, flat) -> Fraction:
        return sum((self.alpha(j) for j in flat), Fraction(0))

    def floats(self) -> dict:
        return {j: float(x) for j, x in enumerate(self._alphas, start=1)}

    def to_json(self):
        return list(self._alphas)


@dataclass
class BranchAssignment:
    """
    Arguments of the forms f^j as half turns (0 for argument 0, 1 for argument pi), one per group of bounded
    chambers sharing the external supporting edge of H^j.
    """
    arrangement: AffineArrangement
    weights: WeightSystem
    half_turns: dict = field(default_factory=dict)

    def theta(self, j: int, flat) -> float:
        return math.pi * self.half_turns[(j, frozenset(flat))]

    def for_chamber(self, chamber) -> dict:
        return {j: self.half_turns[(j, self.arrangement.external_support(chamber, j)[1].flat)]
                for j in self.arrangement.hyperplanes}

    def relabel(self, arrangement: AffineArrangement, weights: WeightSystem, order):
        # hyperplane order[i-1] becomes i on the relabeled arrangement
        renamed = {old: new for new, old in enumerate(order, start=1)}
        renamed[self.arrangement.infinity] = arrangement.infinity
        return BranchAssignment(arrangement, weights,
                                {(renamed[j], frozenset(renamed[x] for x in flat)): h
                                 for (j, flat), h in self.half_turns.items()})

    def to_json(self):
        return [{"j": j, "flat": sorted(flat), "theta_over_pi": h} for (j, flat), h in sorted(
            self.half_turns.items(), key=lambda item: (item[0][0], sorted(item[0][1])))]


@dataclass
class PeriodMatrix:
    entries: np.ndarray
    row_chambers: list
    col_forms: list
    errors: np.ndarray
    degree: int
    orientations: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def condition(self) -> float:
        return float(np.linalg.cond(self.entries)) if self.size else 1.0

    def to_json(self):
        return {"entries": self.entries.tolist(),
                "rows": [c.sign_vector for c in self.row_chambers],
                "columns": [list(phi.basis.hyperplanes) for phi in self.col_forms],
                "orientations": list(self.orientations),
                "quadrature": {"degree": self.degree, "max_error": float(np.max(self.errors, initial=0.0))}}


@dataclass
class GammaSide:
    beta_function_log: float
    critical_values: dict

    def to_json(self):
        return {"beta_function_log": self.beta_function_log,
                "critical_values": [{"j": j, "flat": sorted(flat), "value": v}
                                    for (j, flat), v in sorted(self.critical_values.items(),
                                                               key=lambda item: (item[0][0], sorted(item[0][1])))]}


def special_branches(a: AffineArrangement, w: WeightSystem) -> BranchAssignment:
    turns = {}
    for c in a.bounded_chambers():
        for j in a.hyperplanes:
            _, edge = a.external_support(c, j)
            h = 0 if c.sign(j) > 0 else 1
            if turns.setdefault((j, edge.flat), h) != h:
                raise InvariantViolationException(f"Form {j} changes sign across the group of {sorted(edge.flat)}")
    return BranchAssignment(a, w, turns)


def associated_branches(primal: BranchAssignment, dual: AffineArrangement) -> BranchAssignment:
    turns = {}
    hyperplanes = frozenset(dual.hyperplanes)
    for c in dual.bounded_chambers():
        for j in dual.hyperplanes:
            _, edge = dual.external_support(c, j)
            partner = (j, hyperplanes - edge.flat - {j})
            if partner not in primal.half_turns:
                raise DualityViolationException(f"No primal group {sorted(partner[1])} for form {j}")
            h = 1 - primal.half_turns[partner]
            if (c.sign(j) > 0) != (h == 0):
                raise DualityViolationException(f"Argument {h} pi of form {j} disagrees with its sign on "
                                                f"{c.sign_vector}")
            if turns.setdefault((j, edge.flat), h) != h:
                raise DualityViolationException(f"Form {j} changes argument across {sorted(edge.flat)}")
    return BranchAssignment(dual, primal.weights, turns)


def critical_value(j: int, edge: EdgeGeom, ba: BranchAssignment) -> complex:
    value = ba.arrangement.form(j)(edge.point)
    if value == 0:
        raise InvalidArgumentsException(f"Edge {sorted(edge.flat)} lies in H^{j}")
    alpha = float(ba.weights.alpha(j))
    return cmath.exp(alpha * math.log(abs(float(value))) + 1j * alpha * ba.theta(j, edge.flat))


def _log_critical(a: AffineArrangement, ba: BranchAssignment) -> complex:
    """
    Logarithm of the product of the critical values c((f^j)^alpha_j, L) raised to the discrete volume, over
    the spacious parallelisms (L, H^j, H^{N+1}) of the matroid.
    """
    total = 0j
    for p in a.matroid.parallelisms():
        if p.b != a.infinity or p.volume == 0:
            continue
        if (p.a, p.flat) not in ba.half_turns:
            raise InvariantViolationException(f"Spacious parallelism {sorted(p.flat)} of form {p.a} supports no "
                                              f"bounded chamber")
        value = a.form(p.a)(edge_geometry(a, p.flat).point)
        alpha = float(ba.weights.alpha(p.a))
        total += p.volume * (alpha * math.log(abs(float(value))) + 1j * alpha * ba.theta(p.a, p.flat))
    return total


def beta_function(a: AffineArrangement, w: WeightSystem) -> float:
    """
    Logarithm of the beta function of the weighted arrangement: Gamma(alpha(L) + 1) over edges off the chart
    hyperplane divided by Gamma(1 - alpha(L)) over edges inside it, each raised to the discrete volume.
    """
    total = 0.0
    for record in a.matroid.flats():
        if record.volume == 0:
            continue
        weight = w.edge_weight(record.flat)
        if a.infinity in record.flat:
            argument, sign = 1 - weight, -1
        else:
            argument, sign = weight + 1, 1
        if argument <= 0:
            raise WeightDomainException(f"Gamma argument {la.format_rational(argument)} on edge "
                                        f"{sorted(record.flat)}")
        total += sign * record.volume * float(gammaln(float(argument)))
    return total


def gamma_side(a: AffineArrangement, w: WeightSystem, ba: BranchAssignment) -> GammaSide:
    critical = {}
    for c in a.bounded_chambers():
        for j in a.hyperplanes:
            _, edge = a.external_support(c, j)
            critical.setdefault((j, edge.flat), critical_value(j, edge, ba))
    return GammaSide(beta_function(a, w), critical)


@dataclass
class PeriodSide:
    arrangement: AffineArrangement
    weights: WeightSystem
    branches: BranchAssignment
    bases: list
    pairs: list
    forms: list

    def to_json(self):
        return {"bases": [list(b.hyperplanes) for b in self.bases],
                "bijection": [{"basis": list(b.hyperplanes), "chamber": c.sign_vector} for b, c in self.pairs]}


def prepare_side(a: AffineArrangement, w: WeightSystem, branches: BranchAssignment = None, rng=None) -> PeriodSide:
    if w.N != a.N:
        raise InvalidArgumentsException(f"{w.N} weights for {a.N} hyperplanes")
    bases = betakbc_bases(a, w)
    pairs = chamber_bijection(a, bases, a.chambers(), rng)
    forms = [log_form(a, b) for b in bases]
    log.info(f"Prepared {len(bases)} bases and forms in dimension {a.dim}")
    return PeriodSide(a, w, special_branches(a, w) if branches is None else branches, bases, pairs, forms)


@utils.traced(log)
def period_matrix(a: AffineArrangement, w: WeightSystem, ba: BranchAssignment, forms: list, bijection: list,
                  spec: QuadratureSpec = None) -> PeriodMatrix:
    spec = QuadratureSpec.from_env() if spec is None else spec
    alphas = w.floats()
    chambers = [c for _, c in bijection]
    simplices = [flag_simplices(a, c) for c in chambers]
    signs = [orientation(a, c, flag(a, b)) for b, c in bijection]
    phases = [cmath.exp(1j * sum(alphas[j] * math.pi * h for j, h in ba.for_chamber(c).items())) for c in chambers]
    columns = [([(float(coefficient), chosen) for coefficient, chosen in expand_terms(phi, w)],
                set().union(*phi.flag.hyperplane_sets)) for phi in forms]

    size = len(bijection)
    entries = np.zeros((size, size), dtype=complex)
    errors = np.zeros((size, size))
    degree = spec.degree

    def _cell(s: int, t: int):
        terms, denominators = columns[t]
        return integrate_chamber(simplices[s], alphas, terms, denominators, spec)

    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        futures = {(s, t): pool.submit(_cell, s, t) for s in range(size) for t in range(size)}
        for (s, t), future in futures.items():
            value, estimate, used = future.result()
            entries[s, t] = signs[s] * phases[s] * value
            errors[s, t] = estimate
            degree = max(degree, used)
            log.debug(f"Cell ({s}, {t}) = {entries[s, t]} +- {estimate} at order {used}")

    return PeriodMatrix(entries, chambers, list(forms), errors, degree, signs)


def det_pm(pm: PeriodMatrix) -> complex:
    if pm.size == 0:
        return 1 + 0j
    return complex(np.linalg.det(pm.entries))


def _phase_report(value: complex, log_reference: complex, tolerance: float) -> dict:
    if value == 0:
        raise InvariantViolationException("Determinant vanishes")
    log_value = complex(math.log(abs(value)), cmath.phase(value))
    ratio = math.exp(log_value.real - log_reference.real)
    difference = math.remainder(log_value.imag - log_reference.imag, 2 * math.pi)
    modulo_pi = abs(math.remainder(difference, math.pi))
    reference = cmath.exp(log_reference)
    return {
        params.VALUE: value,
        params.REFERENCE: reference,
        "modulus_ratio": utils.comparison(ratio, 1.0, tolerance, abs(ratio - 1) <= tolerance),
        "phase_mod_pi": utils.comparison(modulo_pi, 0.0, tolerance, modulo_pi <= tolerance),
        "phase_difference": difference,
        "exact_phase_agrees": abs(difference) <= tolerance,
        params.VERDICT: utils.verdict(abs(ratio - 1) <= tolerance and modulo_pi <= tolerance)
    }


def verify_evaluation(a: AffineArrangement, w: WeightSystem, spec: QuadratureSpec = None,
                      tolerance: float = params.DEFAULT_VERIFY_TOLERANCE, branches: BranchAssignment = None,
                      rng=None, rematchings: int = 0, orders=None) -> dict:
    """
    Compare the period determinant of one side with the beta function times the critical values raised to
    the discrete volumes. With a random generator the bijection is redrawn rematchings times; with orders the
    hyperplanes are renamed. Both report the spread of |det|.
    """
    side = prepare_side(a, w, branches)
    pm = period_matrix(a, w, side.branches, side.forms, side.pairs, spec)
    det = det_pm(pm)
    log_beta = beta_function(a, w)

    report = _phase_report(det, log_beta + _log_critical(a, side.branches), tolerance)
    report["beta_function_log"] = log_beta
    report["condition"] = pm.condition
    report["period_matrix"] = pm.to_json()
    report[params.BETA] = len(side.bases)

    if rng is not None and rematchings > 0:
        drawn = {_matching_key(side.pairs)}
        flips = 0
        spread = 0.0
        for _ in range(rematchings):
            pairs = chamber_bijection(a, side.bases, a.chambers(), rng)
            drawn.add(_matching_key(pairs))
            other_pm = period_matrix(a, w, side.branches, side.forms, pairs, spec)
            flips += sum(1 for x, y in zip(pm.orientations, other_pm.orientations) if x != y)
            spread = max(spread, abs(abs(det_pm(other_pm)) - abs(det)) / abs(det))
        passed = spread <= tolerance
        report["rematching"] = {
            "admissible_matchings": count_bijections(a, side.bases, a.chambers()),
            "distinct_drawn": len(drawn),
            "orientation_flips": flips,
            "spread": utils.comparison(spread, 0.0, tolerance, passed),
            params.VERDICT: utils.verdict(passed)
        }
    if orders:
        report["relabeling"] = _relabeling(a, w, side, det, orders, spec, tolerance)

    report[params.VERDICT] = utils.combine_verdicts(
        [report[params.VERDICT]] + [report[key][params.VERDICT] for key in ("rematching", "relabeling")
                                    if key in report])
    return report


def _matching_key(pairs) -> tuple:
    return tuple((b.hyperplanes, c.signs) for b, c in pairs)


def random_orders(rng, hyperplanes, count: int) -> list:
    """
    Draws count orders of the hyperplanes, none of them the identity.
    """
    hyperplanes = tuple(hyperplanes)
    if len(hyperplanes) < 2:
        return []
    orders = []
    while len(orders) < count:
        order = tuple(rng.sample(hyperplanes, len(hyperplanes)))
        if order != hyperplanes:
            orders.append(order)
    return orders


def _relabeling(a: AffineArrangement, w: WeightSystem, side: PeriodSide, det: complex, orders, spec: QuadratureSpec,
                tolerance: float) -> dict:
    """
    Recompute the period determinant after renaming hyperplane order[i-1] to i. The canonical bases, their
    chambers and orientations move with the names; |det| must not.
    """
    runs = []
    spread = 0.0
    for order in orders:
        order = tuple(order)
        moved = relabel(a, order)
        moved_w = WeightSystem([w.alpha(j) for j in order])
        moved_side = prepare_side(moved, moved_w, side.branches.relabel(moved, moved_w, order))
        moved_pm = period_matrix(moved, moved_w, moved_side.branches, moved_side.forms, moved_side.pairs, spec)
        other = det_pm(moved_pm)
        spread = max(spread, abs(abs(other) - abs(det)) / abs(det))
        runs.append({"order": list(order),
                     "bases": sorted(sorted(order[j - 1] for j in b.hyperplanes) for b in moved_side.bases),
                     "orientations": list(moved_pm.orientations),
                     "determinant": other})

    original = sorted(sorted(b.hyperplanes) for b in side.bases)
    permuted = sum(1 for r in runs if tuple(r["order"]) != a.hyperplanes)
    passed = None if permuted == 0 else spread <= tolerance
    return {
        "runs": runs,
        "permuted": permuted,
        "changed_bases": sum(1 for r in runs if r["bases"] != original),
        "spread": utils.comparison(spread, 0.0, tolerance, passed),
        params.VERDICT: utils.verdict(passed)
    }


def _gamma_ratio_log(w: WeightSystem) -> float:
    return sum(float(gammaln(float(x + 1))) for x in w.alphas) - float(gammaln(float(-w.alpha_infinity + 1)))


def verify_main(d: DualPair, w: WeightSystem, spec: QuadratureSpec = None,
                tolerance: float = params.DEFAULT_VERIFY_TOLERANCE) -> dict:
    primal = affine_forms(d, Side.PRIMAL)
    dual = affine_forms(d, Side.DUAL)
    primal_side = prepare_side(primal, w)
    dual_side = prepare_side(dual, w, associated_branches(primal_side.branches, dual))

    det = det_pm(period_matrix(primal, w, primal_side.branches, primal_side.forms, primal_side.pairs, spec))
    dual_det = det_pm(period_matrix(dual, w, dual_side.branches, dual_side.forms, dual_side.pairs, spec))

    beta = len(primal_side.bases)
    if beta != len(dual_side.bases):
        raise DualityViolationException(f"Primal beta {beta} differs from dual beta {len(dual_side.bases)}")
    total = float(-w.alpha_infinity)
    log_reference = beta * complex(_gamma_ratio_log(w), math.pi * total)

    report = _phase_report(det * dual_det, log_reference, tolerance)
    report["determinants"] = {Side.PRIMAL.value: det, Side.DUAL.value: dual_det}
    report[params.BETA] = beta
    return report


def verify_betaprod(d: DualPair, w: WeightSystem, tolerance: float = 1e-9) -> dict:
    primal = beta_function(affine_forms(d, Side.PRIMAL), w)
    dual = beta_function(affine_forms(d, Side.DUAL), w)
    beta = d.matroid(Side.PRIMAL).tutte().b10
    reference = beta * _gamma_ratio_log(w)
    passed = abs(primal + dual - reference) <= tolerance * max(1.0, abs(reference))
    return {"primal_log": primal, "dual_log": dual,
            "product_log": utils.comparison(primal + dual, reference, tolerance, passed),
            params.VERDICT: utils.verdict(passed)}


def verify_critical_products(d: DualPair, w: WeightSystem, tolerance: float = 1e-12) -> dict:
    primal = affine_forms(d, Side.PRIMAL)
    dual = affine_forms(d, Side.DUAL)
    primal_ba = special_branches(primal, w)
    dual_ba = associated_branches(primal_ba, dual)
    hyperplanes = frozenset(primal.hyperplanes)

    checked = 0
    failures = []
    for (j, flat), h in primal_ba.half_turns.items():
        partner = (j, hyperplanes - flat - {j})
        if partner not in dual_ba.half_turns:
            failures.append({"j": j, "flat": sorted(flat), "reason": "no dual group"})
            continue
        checked += 1
        exact = primal.form(j)(edge_geometry(primal, flat).point) * \
            dual.form(j)(edge_geometry(dual, partner[1]).point)
        turns = h + dual_ba.half_turns[partner]
        if exact != -1 or turns != 1:
            failures.append({"j": j, "flat": sorted(flat), "value_product": exact, "half_turns": turns})

    double = _log_critical(primal, primal_ba) + _log_critical(dual, dual_ba)
    beta = len(primal.bounded_chambers())
    expected = math.pi * beta * float(-w.alpha_infinity)
    scale = tolerance * max(1.0, abs(expected))
    phase = abs(math.remainder(double.imag - expected, 2 * math.pi))
    modulus_passed = abs(double.real) <= scale
    phase_passed = phase <= scale
    return {
        "pairs": {"checked": checked, "failures": failures[:5], params.VERDICT: utils.verdict(len(failures) == 0)},
        "double_product_log_modulus": utils.comparison(double.real, 0.0, scale, modulus_passed),
        "double_product_phase": utils.comparison(phase, 0.0, scale, phase_passed),
        params.VERDICT: utils.verdict(len(failures) == 0 and modulus_passed and phase_passed)
    }
