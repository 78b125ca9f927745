"""
Admissible pairs and their duals.

A pair is given by the (k+1) x (N+1) coordinate matrix B whose rows span W. The dual matrix C spans the
annihilator of W and is read off the inverse transpose of a deterministic square completion of B, so that
sign conventions of vertex values and complementary minors hold with the stored determinant.

Hyperplane labels are 1-based: J = {1, ..., N+1}, the chart hyperplane is N+1.
"""
import itertools
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.exceptions import DimensionException, NotAPairException, InadmissiblePairException, \
    VertexAtInfinityException, DegenerateParallelismException, InvalidArgumentsException, NOT_A_FLAT
from arrangelib.matroid import Matroid, ParallelismRecord, matroid_from_columns

log = utils.setup_logging(f"{params.APP_NAME}.dualpair")


class Side(str, Enum):
    PRIMAL = params.SIDE_PRIMAL
    DUAL = params.SIDE_DUAL

    @property
    def other(self):
        return Side.DUAL if self is Side.PRIMAL else Side.PRIMAL


class AdmissiblePair:
    _k = None
    _B = None
    _completion = None

    def __init__(self, k: int, B: la.ExactMatrix, completion: la.ExactMatrix):
        self._k = k
        self._B = B
        self._completion = completion

    @property
    def k(self) -> int:
        return self._k

    @property
    def N(self) -> int:
        return self._B.ncols - 1

    @property
    def n(self) -> int:
        return self.N - self._k - 1

    @property
    def B(self) -> la.ExactMatrix:
        return self._B

    @property
    def completion(self) -> la.ExactMatrix:
        return self._completion

    @property
    def hyperplanes(self) -> tuple:
        return tuple(range(1, self.N + 1))

    @property
    def ground(self) -> tuple:
        return tuple(range(1, self.N + 2))

    def to_json(self):
        return {params.K: self._k, params.PAIR_MATRIX: self._B.to_json()}


class DualPair:
    _primal = None
    _C = None
    _det = None
    _matroids = None
    _lock = None

    def __init__(self, primal: AdmissiblePair, C: la.ExactMatrix, det_completion: Fraction):
        self._primal = primal
        self._C = C
        self._det = det_completion
        self._matroids = {}
        self._lock = threading.Lock()

    @property
    def primal(self) -> AdmissiblePair:
        return self._primal

    @property
    def C(self) -> la.ExactMatrix:
        return self._C

    @property
    def det_completion(self) -> Fraction:
        return self._det

    @property
    def k(self) -> int:
        return self._primal.k

    @property
    def n(self) -> int:
        return self._primal.n

    @property
    def N(self) -> int:
        return self._primal.N

    @property
    def ground(self) -> tuple:
        return self._primal.ground

    @property
    def hyperplanes(self) -> tuple:
        return self._primal.hyperplanes

    def matrix(self, side: Side) -> la.ExactMatrix:
        return self._primal.B if Side(side) is Side.PRIMAL else self._C

    def dimension(self, side: Side) -> int:
        return self.k if Side(side) is Side.PRIMAL else self.n

    def matroid(self, side: Side) -> Matroid:
        side = Side(side)
        with self._lock:
            if side not in self._matroids:
                self._matroids[side] = matroid_from_columns(self.matrix(side))
            return self._matroids[side]

    def to_json(self):
        return {params.K: self.k, params.PAIR_MATRIX: self._primal.B.to_json(),
                params.DUAL_MATRIX: self._C.to_json(), params.DET_COMPLETION: self._det}


def _check_columns(m: la.ExactMatrix, side: Side):
    for a in range(m.ncols):
        if all(x == 0 for x in m.column(a)):
            raise InadmissiblePairException(a + 1, a + 1, side.value)
    for a, b in itertools.combinations(range(m.ncols), 2):
        if la.rank(m.columns([a, b])) < 2:
            raise InadmissiblePairException(a + 1, b + 1, side.value)


def _derive_dual(k: int, completion: la.ExactMatrix) -> la.ExactMatrix:
    inverse_transpose = la.inverse(completion.transpose())
    return la.ExactMatrix(inverse_transpose.rows[k + 1:], completion.ncols)


def make_pair(B: la.ExactMatrix, k: int) -> AdmissiblePair:
    if B.nrows != k + 1:
        raise DimensionException(f"A pair of dimension k={k} needs {k + 1} rows, got {B.nrows}")

    N = B.ncols - 1
    n = N - k - 1
    if N < 3 or k < 1 or n < 1:
        raise NotAPairException(f"Dimensions k={k}, n={n}, N={N} do not satisfy 1 <= k, n and N >= 3")
    if la.rank(B) != k + 1:
        raise NotAPairException(f"Matrix has rank {la.rank(B)}, expected {k + 1}")

    _check_columns(B, Side.PRIMAL)
    completion = la.complete_to_square(B)
    _check_columns(_derive_dual(k, completion), Side.DUAL)

    log.debug(f"Admissible pair k={k}, n={n}, N={N}")
    return AdmissiblePair(k, B, completion)


def dualize(p: AdmissiblePair) -> DualPair:
    return DualPair(p, _derive_dual(p.k, p.completion), la.determinant(p.completion))


def check_involution(d: DualPair) -> dict:
    annihilator = la.nullspace_basis(d.C)
    holds = la.same_row_space(annihilator, d.primal.B) and la.rank(d.C) == d.n + 1 \
        and (d.primal.B @ d.C.transpose()).is_zero()
    return {params.VERDICT: utils.verdict(holds)}


def check_dual_matroid(d: DualPair) -> dict:
    holds = d.matroid(Side.DUAL).same_rank_function(d.matroid(Side.PRIMAL).dual())
    return {params.VERDICT: utils.verdict(holds)}


def vertex_value(d: DualPair, side: Side, vertex_basis, j: int) -> Fraction:
    """
    Value of the affine form j at the vertex cut out by the hyperplanes of vertex_basis, read off two minors
    of the side's coordinate matrix.
    """
    side = Side(side)
    m = d.matrix(side)
    dim = d.dimension(side)
    basis = sorted(vertex_basis)

    if len(basis) != dim or len(set(basis)) != dim:
        raise InvalidArgumentsException(f"Vertex needs {dim} distinct hyperplanes, got {basis}")
    if any(i < 1 or i > d.N for i in basis) or j < 1 or j > d.N:
        raise InvalidArgumentsException(f"Hyperplanes must lie in 1..{d.N}")
    if j in basis:
        raise InvalidArgumentsException(f"Hyperplane {j} passes through the vertex {basis}")

    rows = range(m.nrows)
    denominator = la.minor(m, rows, [i - 1 for i in basis] + [d.N])
    if denominator == 0:
        raise VertexAtInfinityException()

    before = sum(1 for i in basis if i < j)
    numerator = la.minor(m, rows, [i - 1 for i in sorted(basis + [j])])
    return (-1) ** (dim + before) * numerator / denominator


def _complement_sign(subset) -> int:
    s = len(subset)
    return (-1) ** (s * (s + 1) // 2 + sum(subset))


def check_minor_identity(d: DualPair) -> dict:
    B = d.primal.B
    rows_b = range(B.nrows)
    rows_c = range(d.C.nrows)
    ground = set(d.ground)
    checked = 0
    failure = None
    for subset in itertools.combinations(d.ground, d.k + 1):
        complement = sorted(ground - set(subset))
        lhs = la.minor(B, rows_b, [i - 1 for i in subset])
        rhs = _complement_sign(subset) * d.det_completion * la.minor(d.C, rows_c, [i - 1 for i in complement])
        checked += 1
        if lhs != rhs:
            failure = {"subset": list(subset), "lhs": lhs, "rhs": rhs}
            break
    return {"checked": checked, "first_failure": failure, params.VERDICT: utils.verdict(failure is None)}


def find_vertex_on_edge(d: DualPair, side: Side, flat, j: int) -> tuple:
    """
    Lexicographically first set of hyperplanes cutting out a vertex of the given edge that lies off the
    hyperplane j and off the chart hyperplane.
    """
    side = Side(side)
    m = d.matroid(side)
    dim = d.dimension(side)
    flat = frozenset(flat)
    infinity = d.N + 1
    for basis in itertools.combinations([i for i in d.hyperplanes if i != j], dim):
        if m.rank(basis) == dim and m.rank(flat | set(basis)) == dim and m.rank(basis + (infinity,)) == dim + 1 \
                and m.rank(basis + (j,)) == dim + 1:
            return basis
    raise DegenerateParallelismException(f"No vertex on the edge {sorted(flat)} off H^{infinity}")


def product_minus_one(d: DualPair, parallelism: ParallelismRecord, side: Side = Side.PRIMAL) -> dict:
    side = Side(side)
    infinity = d.N + 1
    if parallelism.b != infinity:
        raise InvalidArgumentsException(f"Parallelism must be taken relative to H^{infinity}")
    if not d.matroid(side).is_parallelism(parallelism.flat, parallelism.a, parallelism.b):
        raise InvalidArgumentsException(f"{parallelism} is not a parallelism on the {side.value} side")

    j = parallelism.a
    vertex = find_vertex_on_edge(d, side, parallelism.flat, j)
    complementary = tuple(sorted(set(d.ground) - set(vertex) - {j, infinity}))
    value = vertex_value(d, side, vertex, j)
    dual_value = vertex_value(d, side.other, complementary, j)
    product = value * dual_value
    return {"vertex": list(vertex), "dual_vertex": list(complementary), "value": value, "dual_value": dual_value,
            "product": product, params.VERDICT: utils.verdict(product == -1)}


def check_products(d: DualPair) -> dict:
    checked = 0
    skipped = 0
    failures = []
    infinity = d.N + 1
    for side in Side:
        for p in d.matroid(side).parallelisms():
            if p.b != infinity:
                continue
            try:
                result = product_minus_one(d, p, side)
            except DegenerateParallelismException:
                skipped += 1
                continue
            checked += 1
            if result[params.VERDICT] != params.PASS:
                failures.append({"side": side.value, "flat": sorted(p.flat), "a": p.a, "product": result["product"]})
    return {"checked": checked, "skipped": skipped, "failures": failures[:5],
            params.VERDICT: utils.verdict(len(failures) == 0 if checked else None)}


@dataclass(frozen=True)
class PluckerVector:
    side: Side
    ground_size: int
    coords: dict = field(hash=False)

    def to_json(self):
        return {"side": self.side.value,
                "coords": [{"subset": list(s), "value": v} for s, v in sorted(self.coords.items())]}


def plucker(d: DualPair, side: Side) -> PluckerVector:
    side = Side(side)
    m = d.matrix(side)
    rows = range(m.nrows)
    coords = {subset: la.minor(m, rows, [i - 1 for i in subset])
              for subset in itertools.combinations(d.ground, m.nrows)}
    return PluckerVector(side, len(d.ground), coords)


def delta(v: PluckerVector) -> PluckerVector:
    ground = set(range(1, v.ground_size + 1))
    coords = {}
    for subset, value in v.coords.items():
        complement = tuple(sorted(ground - set(subset)))
        coords[complement] = _complement_sign(subset) * value
    return PluckerVector(v.side.other, v.ground_size, coords)


def projectively_equal(u: PluckerVector, v: PluckerVector) -> bool:
    if set(u.coords) != set(v.coords):
        return False
    anchor = next((s for s, x in u.coords.items() if x != 0), None)
    if anchor is None or v.coords[anchor] == 0:
        return False
    ratio = v.coords[anchor] / u.coords[anchor]
    return all(v.coords[s] == ratio * x for s, x in u.coords.items())


def check_plucker(d: DualPair) -> dict:
    primal = plucker(d, Side.PRIMAL)
    dual = plucker(d, Side.DUAL)
    mapped = delta(primal)
    return {"delta_matches_dual": utils.verdict(mapped.side is dual.side and projectively_equal(mapped, dual)),
            "delta_involution": utils.verdict(projectively_equal(delta(mapped), primal)),
            params.VERDICT: utils.verdict(projectively_equal(mapped, dual) and projectively_equal(delta(mapped), primal))}


@dataclass(frozen=True)
class WeakPair:
    ground: tuple
    matrix: la.ExactMatrix

    def matroid(self) -> Matroid:
        return matroid_from_columns(self.matrix, labels=self.ground)

    def nonzero_columns(self) -> bool:
        return all(any(x != 0 for x in self.matrix.column(i)) for i in range(self.matrix.ncols))

    def to_json(self):
        return {"ground": list(self.ground), "matrix": self.matrix.to_json()}


def weak_localize(d: DualPair, flat) -> tuple:
    """
    Builds the weak pair induced on the intersection of the hyperplanes of a flat, and the weak pair induced
    by the annihilator on the quotient, and checks that they are weakly dual.

    :param d: the dual pair
    :param flat: a flat X of the primal matroid with |X| < |J|
    :return: (sigma, sigma_prime, report)
    """
    m = d.matroid(Side.PRIMAL)
    md = d.matroid(Side.DUAL)
    x = frozenset(flat)
    if len(x) == 0 or len(x) >= len(d.ground) or not x <= set(d.ground) or not m.is_flat(x):
        raise InvalidArgumentsException(NOT_A_FLAT % sorted(x))

    x_hat = tuple(sorted(set(d.ground) - x))
    B = d.primal.B
    restricted = B.columns([i - 1 for i in sorted(x)])
    # rows y with y . B_X = 0 give the vectors of W on which every e^j, j in X, vanishes
    y = la.nullspace_basis(restricted.transpose())
    sigma = WeakPair(x_hat, (y @ B).columns([j - 1 for j in x_hat]))

    projected = d.C.columns([j - 1 for j in x_hat])
    reduced, _ = la.row_reduce(projected)
    sigma_prime = WeakPair(x_hat, la.ExactMatrix(reduced, len(x_hat)))

    annihilates = (sigma.matrix @ sigma_prime.matrix.transpose()).is_zero() \
        and sigma.matrix.nrows + sigma_prime.matrix.nrows == len(x_hat)
    checks = {
        "weakly_admissible": utils.verdict(sigma.nonzero_columns() and sigma_prime.nonzero_columns()),
        "annihilator": utils.verdict(annihilates),
        "sigma_dimension": utils.verdict(sigma.matrix.nrows == m.corank(x)),
        "sigma_matroid_is_contraction": utils.verdict(sigma.matroid().same_rank_function(m.contract(x))),
        "sigma_prime_matroid_is_deletion": utils.verdict(sigma_prime.matroid().same_rank_function(md.delete(x))),
    }
    report = {"flat": sorted(x), "localized": md.rank(x_hat) < md.rank(), params.CHECKS: checks,
              params.VERDICT: utils.combine_verdicts(checks.values())}
    return sigma, sigma_prime, report


def check_weak_duality(d: DualPair) -> dict:
    results = []
    for record in d.matroid(Side.PRIMAL).flats():
        if not record.flat or len(record.flat) >= len(d.ground):
            continue
        _, _, report = weak_localize(d, record.flat)
        results.append(report)
    failures = [r["flat"] for r in results if r[params.VERDICT] == params.FAIL]
    return {"checked": len(results), "failures": failures[:5],
            params.VERDICT: utils.combine_verdicts(r[params.VERDICT] for r in results)}


def random_pair(rng, k: int, n: int, entry_range: int = params.DEFAULT_ENTRY_RANGE,
                max_attempts: int = 10000) -> DualPair:
    """
    Draws an admissible pair with integer entries in [-entry_range, entry_range].

    :param rng: a random.Random instance
    """
    N = k + n + 1
    for _ in range(max_attempts):
        B = la.ExactMatrix([[rng.randint(-entry_range, entry_range) for _ in range(N + 1)] for _ in range(k + 1)])
        try:
            return dualize(make_pair(B, k))
        except (NotAPairException, InadmissiblePairException):
            continue
    raise NotAPairException(f"No admissible pair found for k={k}, n={n} in {max_attempts} attempts")
