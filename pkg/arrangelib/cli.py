"""
Command implementations behind the command line. Every command takes a parsed pair file and returns a report
dictionary with the command name, a digest of the inputs, the results and an overall verdict.
"""
import random

import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.dualpair import DualPair, Side, check_dual_matroid, check_involution, check_minor_identity, \
    check_plucker, check_products, check_weak_duality, dualize, make_pair, random_pair
from arrangelib.exceptions import QuadratureAccuracyException, InvalidArgumentsException
from arrangelib.geometry import AffineArrangement, affine_forms, arrangement_from_matrix, verify_geometry
from arrangelib.matroid import verify_duality_suite
from arrangelib.pair_file import PairFile
from arrangelib.periods import associated_branches, beta_function, det_pm, gamma_side, period_matrix, \
    prepare_side, random_orders, special_branches, verify_betaprod, verify_critical_products, verify_evaluation, \
    verify_main
from arrangelib.quadrature import QuadratureSpec

log = utils.setup_logging(f"{params.APP_NAME}.cli")


def _report(command: str, pair: PairFile, results: dict, verdict: str = None) -> dict:
    if verdict is None:
        verdict = utils.combine_verdicts(r[params.VERDICT] for r in results.values()
                                         if isinstance(r, dict) and params.VERDICT in r)
    return {
        params.COMMAND: command,
        params.INPUTS_DIGEST: None if pair is None else utils.digest(pair.to_json()),
        params.RESULTS: results,
        params.VERDICT: verdict
    }


def _pair(pair: PairFile) -> DualPair:
    return dualize(make_pair(pair.B, pair.k))


def _arrangement(pair: PairFile, side: Side) -> AffineArrangement:
    # primal side straight from B; B need not be half of a pair
    if Side(side) is Side.PRIMAL:
        return arrangement_from_matrix(pair.B, Side.PRIMAL)
    return affine_forms(_pair(pair), Side.DUAL)


def _branches(pair: PairFile, a: AffineArrangement):
    w = pair.weights()
    if a.side is Side.DUAL:
        primal = arrangement_from_matrix(pair.B, Side.PRIMAL)
        return associated_branches(special_branches(primal, w), a)
    return special_branches(a, w)


def cmd_info(pair: PairFile) -> dict:
    d = _pair(pair)
    sides = {}
    for side in Side:
        m = d.matroid(side)
        sides[side.value] = {"dimension": d.dimension(side), "rank": m.rank(), params.BETA: m.tutte().b10}
    results = {params.K: d.k, "n": d.n, "N": d.N, "admissible": True, "sides": sides,
               "beta_agrees": {params.VERDICT: utils.verdict(
                   sides[Side.PRIMAL.value][params.BETA] == sides[Side.DUAL.value][params.BETA])}}
    return _report("info", pair, results)


def cmd_matroid(pair: PairFile, side: Side = Side.PRIMAL) -> dict:
    side = Side(side)
    if side is Side.PRIMAL:
        m = arrangement_from_matrix(pair.B, side).matroid
    else:
        m = _pair(pair).matroid(side)
    t = m.tutte()
    results = {
        "side": side,
        "tutte": t,
        "tutte_text": str(t),
        params.BETA: t.b10,
        "flats": [r for r in m.flats() if r.spacious],
        "parallelisms": [p for p in m.parallelisms() if p.volume != 0],
        "duality_suite": verify_duality_suite(m)
    }
    return _report("matroid", pair, results)


def cmd_dual(pair: PairFile) -> dict:
    d = _pair(pair)
    exported = {params.K: d.n, params.PAIR_MATRIX: d.C.to_json()}
    if pair.alpha is not None:
        exported[params.ALPHA] = pair.to_json()[params.ALPHA]
    results = {
        params.DUAL_MATRIX: d.C,
        params.DET_COMPLETION: d.det_completion,
        "dual_pair_file": exported,
        "involution": check_involution(d),
        "dual_matroid": check_dual_matroid(d)
    }
    return _report("dual", pair, results)


def cmd_chambers(pair: PairFile, side: Side = Side.PRIMAL) -> dict:
    a = _arrangement(pair, side)
    chambers = a.chambers()
    results = {
        "side": a.side,
        "count": len(chambers),
        params.BOUNDED: sum(1 for c in chambers if c.bounded),
        "chambers": chambers,
        "geometry": verify_geometry(a)
    }
    return _report("chambers", pair, results)


def cmd_betafn(pair: PairFile, side: Side = Side.PRIMAL) -> dict:
    a = _arrangement(pair, side)
    gamma = gamma_side(a, pair.weights(), _branches(pair, a))
    results = {"side": a.side, "gamma_side": gamma}
    if pair.k + 1 < pair.N:
        results["betaprod"] = verify_betaprod(_pair(pair), pair.weights())
    return _report("betafn", pair, results)


def cmd_periods(pair: PairFile, side: Side = Side.PRIMAL, spec: QuadratureSpec = None) -> dict:
    a = _arrangement(pair, side)
    w = pair.weights()
    prepared = prepare_side(a, w, _branches(pair, a))
    pm = period_matrix(a, w, prepared.branches, prepared.forms, prepared.pairs, spec)
    results = {
        "side": a.side,
        params.BETA: pm.size,
        "canonical": prepared,
        "branches": prepared.branches,
        "period_matrix": pm,
        "determinant": det_pm(pm),
        "condition": pm.condition,
        "beta_function_log": beta_function(a, w)
    }
    return _report("periods", pair, results, params.NOT_APPLICABLE)


def _guarded(check, *args, **kwargs) -> dict:
    try:
        return check(*args, **kwargs)
    except QuadratureAccuracyException as e:
        log.error(str(e))
        return {params.ERROR: str(e), "achieved": e.achieved, params.VERDICT: params.FAIL}


def cmd_verify(pair: PairFile, which: str = params.VERIFY_ALL, spec: QuadratureSpec = None,
               tolerance: float = params.DEFAULT_VERIFY_TOLERANCE, seed: int = params.DEFAULT_SEED) -> dict:
    if which not in params.VERIFY_CHOICES:
        raise InvalidArgumentsException(f"Unknown verification {which}, expected one of {params.VERIFY_CHOICES}")

    def _wants(name: str) -> bool:
        return which in (name, params.VERIFY_ALL)

    d = _pair(pair)
    w = pair.weights()
    results = {}
    if _wants("matroid"):
        for side in Side:
            results[f"matroid_{side.value}"] = verify_duality_suite(d.matroid(side))
        results["dual_matroid"] = check_dual_matroid(d)
    if _wants("minors"):
        results["involution"] = check_involution(d)
        results["minors"] = check_minor_identity(d)
        results["products"] = check_products(d)
    if _wants("plucker"):
        results["plucker"] = check_plucker(d)
    if _wants("weak"):
        results["weak"] = check_weak_duality(d)
    if _wants("geometry"):
        for side in Side:
            results[f"geometry_{side.value}"] = verify_geometry(affine_forms(d, side))
    if _wants("evaluation"):
        rng = random.Random(seed)
        primal = affine_forms(d, Side.PRIMAL)
        dual = affine_forms(d, Side.DUAL)
        count = params.DEFAULT_REMATCHINGS
        results["evaluation_primal"] = _guarded(verify_evaluation, primal, w, spec, tolerance, rng=rng,
                                                rematchings=count,
                                                orders=random_orders(rng, primal.hyperplanes, count))
        results["evaluation_dual"] = _guarded(verify_evaluation, dual, w, spec, tolerance,
                                              associated_branches(special_branches(primal, w), dual), rng=rng,
                                              rematchings=count, orders=random_orders(rng, dual.hyperplanes, count))
    if _wants("main"):
        results["main"] = _guarded(verify_main, d, w, spec, tolerance)
        results["betaprod"] = verify_betaprod(d, w)
        results["critical_products"] = verify_critical_products(d, w)

    log.info(f"Verified {which}: {sorted(results)}")
    return _report("verify", pair, results)


def cmd_sample(k: int, n: int, seed: int = params.DEFAULT_SEED,
               entry_range: int = params.DEFAULT_ENTRY_RANGE) -> dict:
    d = random_pair(random.Random(seed), k, n, entry_range)
    sample = {params.K: d.k, params.PAIR_MATRIX: d.primal.B.to_json()}
    return _report("sample", None, {"pair_file": sample, "seed": seed}, params.NOT_APPLICABLE)
