"""
Vector matroids with an exact rank oracle, the Tutte polynomial, duality, flats, parallelisms and the
discrete length / width / volume calculus.

Subsets are handled internally as bitmasks over the universe of labels. The public API speaks in labels
(hyperplane indices, 1-based for matroids built from a coordinate matrix).
"""
import itertools
import threading
from collections import Counter
from dataclasses import dataclass
from math import comb

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.exceptions import InvalidArgumentsException

log = utils.setup_logging(f"{params.APP_NAME}.matroid")

BRUTE_FORCE_LIMIT = 12


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _submasks(mask: int):
    # every submask of mask, including 0 and mask itself
    sub = mask
    while True:
        yield sub
        if sub == 0:
            break
        sub = (sub - 1) & mask


class TuttePolynomial:
    _coefficients = None

    def __init__(self, coefficients: dict = None):
        self._coefficients = {k: v for k, v in (coefficients or {}).items() if v != 0}

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    def coefficient(self, i: int, j: int) -> int:
        return self._coefficients.get((i, j), 0)

    @property
    def coefficients(self) -> dict:
        return dict(self._coefficients)

    @property
    def b10(self) -> int:
        return self.coefficient(1, 0)

    @property
    def b01(self) -> int:
        return self.coefficient(0, 1)

    @property
    def b00(self) -> int:
        return self.coefficient(0, 0)

    def evaluate(self, x, y):
        return sum(c * x ** i * y ** j for (i, j), c in self._coefficients.items())

    def swap(self):
        return TuttePolynomial({(j, i): c for (i, j), c in self._coefficients.items()})

    def times_x(self):
        return TuttePolynomial({(i + 1, j): c for (i, j), c in self._coefficients.items()})

    def times_y(self):
        return TuttePolynomial({(i, j + 1): c for (i, j), c in self._coefficients.items()})

    def __add__(self, other):
        total = Counter(self._coefficients)
        total.update(other.coefficients)
        return TuttePolynomial(dict(total))

    def __eq__(self, other):
        return isinstance(other, TuttePolynomial) and self._coefficients == other.coefficients

    def __hash__(self):
        return hash(frozenset(self._coefficients.items()))

    def __str__(self):
        if not self._coefficients:
            return "0"

        def _monomial(i, j, c):
            parts = []
            if i:
                parts.append("x" if i == 1 else f"x^{i}")
            if j:
                parts.append("y" if j == 1 else f"y^{j}")
            body = "*".join(parts)
            if not body:
                return str(c)
            return body if c == 1 else f"{c}*{body}"

        terms = sorted(self._coefficients.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))
        return " + ".join(_monomial(i, j, c) for (i, j), c in terms)

    def __repr__(self):
        return f"TuttePolynomial({self})"

    def to_json(self):
        return [{"i": i, "j": j, "coeff": c} for (i, j), c in sorted(self._coefficients.items())]


class _MatrixRankOracle:
    _matrix = None
    _memo = None
    _lock = None

    def __init__(self, matrix: la.ExactMatrix):
        self._matrix = matrix
        self._memo = {0: 0}
        self._lock = threading.Lock()

    def __call__(self, mask: int) -> int:
        with self._lock:
            cached = self._memo.get(mask)
        if cached is not None:
            return cached

        value = la.rank(self._matrix.columns(list(_bits(mask))))

        with self._lock:
            self._memo[mask] = value
        return value


class _DualRankOracle:
    _primal = None
    _memo = None
    _lock = None

    def __init__(self, primal):
        self._primal = primal
        self._memo = {}
        self._lock = threading.Lock()

    def __call__(self, mask: int) -> int:
        with self._lock:
            cached = self._memo.get(mask)
        if cached is not None:
            return cached

        ground = self._primal.ground_mask
        value = _popcount(mask) + self._primal.rank_mask(ground & ~mask) - self._primal.rank_mask(ground)

        with self._lock:
            self._memo[mask] = value
        return value


@dataclass(frozen=True)
class FlatRecord:
    flat: frozenset
    rank: int
    length: int
    width: int
    volume: int

    @property
    def spacious(self) -> bool:
        return self.volume != 0

    def to_json(self):
        return {"flat": sorted(self.flat), "rank": self.rank, "length": self.length, "width": self.width,
                "volume": self.volume, "spacious": self.spacious}


@dataclass(frozen=True)
class ParallelismRecord:
    flat: frozenset
    a: int
    b: int
    length: int
    width: int
    volume: int

    def to_json(self):
        return {"flat": sorted(self.flat), "a": self.a, "b": self.b, "length": self.length, "width": self.width,
                "volume": self.volume}


class Matroid:
    _universe = None
    _positions = None
    _oracle = None
    _ground = None
    _contracted = None
    _tutte_memo = None
    _tutte_lock = None

    def __init__(self, universe, oracle, ground_mask: int = None, contracted_mask: int = 0):
        self._universe = tuple(universe)
        self._positions = {label: i for i, label in enumerate(self._universe)}
        self._oracle = oracle
        self._ground = (1 << len(self._universe)) - 1 if ground_mask is None else ground_mask
        self._contracted = contracted_mask
        self._tutte_memo = {}
        self._tutte_lock = threading.RLock()

    # ---- subsets and labels ----
    @property
    def ground_mask(self) -> int:
        return self._ground

    @property
    def ground_set(self) -> tuple:
        return tuple(self._universe[i] for i in _bits(self._ground))

    def __len__(self):
        return _popcount(self._ground)

    def mask(self, subset) -> int:
        m = 0
        for label in subset:
            if label not in self._positions or not (self._ground >> self._positions[label]) & 1:
                raise InvalidArgumentsException(f"{label} is not in the ground set {self.ground_set}")
            m |= 1 << self._positions[label]
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self._universe[i] for i in _bits(mask))

    def complement(self, subset) -> frozenset:
        return self.labels(self._ground & ~self.mask(subset))

    # ---- rank function ----
    def rank_mask(self, mask: int) -> int:
        return self._oracle(mask | self._contracted) - self._oracle(self._contracted)

    def rank(self, subset=None) -> int:
        return self.rank_mask(self._ground if subset is None else self.mask(subset))

    def corank(self, subset) -> int:
        return self.rank_mask(self._ground) - self.rank(subset)

    def nullity(self, subset) -> int:
        subset = list(subset)
        return len(subset) - self.rank(subset)

    def is_loop(self, e) -> bool:
        return self.rank([e]) == 0

    def is_isthmus(self, e) -> bool:
        m = self.mask([e])
        return self.rank_mask(self._ground & ~m) < self.rank_mask(self._ground)

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        closed = mask
        for i in _bits(self._ground & ~mask):
            if self.rank_mask(mask | (1 << i)) == r:
                closed |= 1 << i
        return closed

    def closure(self, subset) -> frozenset:
        return self.labels(self.closure_mask(self.mask(subset)))

    def is_flat(self, subset) -> bool:
        m = self.mask(subset)
        return self.closure_mask(m) == m

    def bases(self) -> list:
        r = self.rank_mask(self._ground)
        return [frozenset(b) for b in itertools.combinations(self.ground_set, r) if self.rank(b) == r]

    def same_rank_function(self, other) -> bool:
        if set(self.ground_set) != set(other.ground_set):
            return False
        ground = self.ground_set
        for size in range(len(ground) + 1):
            for subset in itertools.combinations(ground, size):
                if self.rank(subset) != other.rank(subset):
                    return False
        return True

    # ---- minors and duality ----
    def _check_proper(self, subset):
        m = self.mask(subset)
        if m == 0 or m == self._ground:
            raise InvalidArgumentsException(f"Minor requires a nonempty proper subset, got {sorted(subset)}")
        return m

    def contract(self, subset):
        m = self._check_proper(subset)
        return Matroid(self._universe, self._oracle, self._ground & ~m, self._contracted | m)

    def delete(self, subset):
        m = self._check_proper(subset)
        return Matroid(self._universe, self._oracle, self._ground & ~m, self._contracted)

    def restrict(self, subset):
        return Matroid(self._universe, self._oracle, self.mask(subset), self._contracted)

    def dual(self):
        return Matroid(self._universe, _DualRankOracle(self), self._ground, 0)

    # ---- Tutte polynomial ----
    def _absolute_rank(self, mask: int) -> int:
        return self._oracle(mask | self._contracted)

    def _absolute_closure(self, mask: int) -> int:
        r = self._absolute_rank(mask)
        closed = mask
        for i in _bits(self._ground & ~mask):
            if self._absolute_rank(mask | (1 << i)) == r:
                closed |= 1 << i
        return closed

    def _tutte_minor(self, ground: int, contracted: int) -> TuttePolynomial:
        if ground == 0:
            return TuttePolynomial.one()

        # minors depend on the contracted set only through its closure
        key = (ground, self._absolute_closure(contracted))
        with self._tutte_lock:
            cached = self._tutte_memo.get(key)
        if cached is not None:
            return cached

        e = ground & -ground
        rest = ground & ~e
        base = self._absolute_rank(contracted)
        if self._absolute_rank(contracted | e) == base:
            result = self._tutte_minor(rest, contracted).times_y()
        elif self._absolute_rank(rest | contracted) < self._absolute_rank(ground | contracted):
            result = self._tutte_minor(rest, contracted | e).times_x()
        else:
            result = self._tutte_minor(rest, contracted) + self._tutte_minor(rest, contracted | e)

        with self._tutte_lock:
            self._tutte_memo[key] = result
        return result

    def tutte(self) -> TuttePolynomial:
        return self._tutte_minor(self._ground, 0)

    def minor_tutte(self, ground_mask: int, contracted_mask: int = 0) -> TuttePolynomial:
        return self._tutte_minor(ground_mask, contracted_mask)

    # ---- discrete length, width, volume ----
    def length(self, subset) -> int:
        # b10 of M/X; the contraction by the whole ground set is the empty matroid, whose b10 is 0
        m = self.mask(subset)
        if m == self._ground:
            return 0
        return self._tutte_minor(self._ground & ~m, m).b10

    def width(self, subset) -> int:
        return self._tutte_minor(self.mask(subset), 0).b10

    def volume(self, subset) -> int:
        return self.length(subset) * self.width(subset)

    def flat_record(self, subset) -> FlatRecord:
        flat = frozenset(subset)
        length = self.length(flat)
        width = self.width(flat)
        return FlatRecord(flat, self.rank(flat), length, width, length * width)

    def flats(self) -> list:
        records = []
        for m in range(1, self._ground + 1):
            if m & ~self._ground:
                continue
            if self.closure_mask(m) == m:
                records.append(self.flat_record(self.labels(m)))
        records.sort(key=lambda f: (len(f.flat), sorted(f.flat)))
        return records

    def is_parallelism(self, subset, a, b) -> bool:
        flat = frozenset(subset)
        if a in flat or b in flat or a == b or not self.is_flat(flat):
            return False
        return self.rank([a, b]) == 2 and self.rank(flat | {a, b}) == self.rank(flat) + 1

    def parallelism_record(self, subset, a, b) -> ParallelismRecord:
        flat = frozenset(subset)
        length = self.length(flat)
        width = self.width(flat | {a, b})
        return ParallelismRecord(flat, a, b, length, width, length * width)

    def parallelisms(self) -> list:
        records = []
        ground = self.ground_set
        for record in self.flats():
            if len(record.flat) == len(ground):
                continue
            outside = [e for e in ground if e not in record.flat]
            for a, b in itertools.permutations(outside, 2):
                if self.rank([a, b]) == 2 and self.rank(record.flat | {a, b}) == record.rank + 1:
                    width = self.width(record.flat | {a, b})
                    records.append(ParallelismRecord(record.flat, a, b, record.length, width,
                                                     record.length * width))
        return records

    def to_json(self):
        return {"ground": list(self.ground_set), "rank": self.rank()}


def matroid_from_columns(m: la.ExactMatrix, labels=None) -> Matroid:
    labels = list(range(1, m.ncols + 1)) if labels is None else list(labels)
    if len(labels) != m.ncols:
        raise InvalidArgumentsException(f"{len(labels)} labels for {m.ncols} columns")
    return Matroid(labels, _MatrixRankOracle(m))


def tutte(m: Matroid) -> TuttePolynomial:
    return m.tutte()


def tutte_brute_force(m: Matroid) -> TuttePolynomial:
    # corank-nullity expansion over every subset
    total = Counter()
    full_rank = m.rank_mask(m.ground_mask)
    for sub in _submasks(m.ground_mask):
        r = m.rank_mask(sub)
        a = full_rank - r
        b = _popcount(sub) - r
        for i in range(a + 1):
            for j in range(b + 1):
                total[(i, j)] += comb(a, i) * (-1) ** (a - i) * comb(b, j) * (-1) ** (b - j)
    return TuttePolynomial(dict(total))


def dual(m: Matroid) -> Matroid:
    return m.dual()


def contract(m: Matroid, x) -> Matroid:
    return m.contract(x)


def delete(m: Matroid, x) -> Matroid:
    return m.delete(x)


def flats(m: Matroid) -> list:
    return m.flats()


def parallelisms(m: Matroid) -> list:
    return m.parallelisms()


def _check(failures: list, checked: int, applicable: bool = True) -> dict:
    if not applicable or checked == 0:
        passed = None
    else:
        passed = len(failures) == 0
    return {"checked": checked, "failures": failures[:5], params.VERDICT: utils.verdict(passed)}


def verify_duality_suite(m: Matroid) -> dict:
    """
    Runs the duality identities between a matroid and its dual.

    :param m: the matroid
    :return: a report keyed by check name, each with the number of instances checked, the first failures and
        a verdict
    """
    md = m.dual()
    ground = frozenset(m.ground_set)
    size = len(ground)
    t = m.tutte()
    td = md.tutte()
    report = {}

    if size <= BRUTE_FORCE_LIMIT:
        brute = tutte_brute_force(m)
        report["tutte_brute_force"] = _check([] if brute == t else [str(brute)], 1)
    else:
        report["tutte_brute_force"] = _check([], 0, applicable=False)

    report["b10_equals_b01"] = _check([] if t.b10 == t.b01 else [(t.b10, t.b01)], 1,
                                      applicable=size >= 2)
    report["b00_zero"] = _check([] if t.b00 == 0 else [t.b00], 1, applicable=size >= 1)
    report["tutte_swap"] = _check([] if t == td.swap() else [str(td)], 1)
    report["dual_of_dual"] = _check([] if md.dual().same_rank_function(m) else ["rank"], 1)

    failures = []
    checked = 0
    for sub in _submasks(m.ground_mask):
        x = m.labels(sub)
        checked += 1
        if m.corank(x) != md.nullity(ground - x):
            failures.append(sorted(x))
    report["corank_nullity"] = _check(failures, checked)

    failures = []
    checked = 0
    for sub in _submasks(m.ground_mask):
        if sub == 0 or sub == m.ground_mask:
            continue
        x = m.labels(sub)
        checked += 1
        if not m.contract(x).same_rank_function(md.delete(x).dual()):
            failures.append(sorted(x))
    report["contraction_deletion_duality"] = _check(failures, checked)

    failures = []
    checked = 0
    for record in m.flats():
        x = record.flat
        if not (1 < len(x) < size - 1) or not record.spacious:
            continue
        checked += 1
        x_hat = ground - x
        if not md.is_flat(x_hat) or record.length != md.width(x_hat) or record.width != md.length(x_hat):
            failures.append(sorted(x))
    report["volume_duality"] = _check(failures, checked)

    failures = []
    checked = 0
    for p in m.parallelisms():
        if len(p.flat) >= size - 2 or p.volume == 0 or m.corank(ground - {p.a, p.b}) != 0:
            continue
        checked += 1
        x_hat = ground - p.flat - {p.a, p.b}
        if not md.is_parallelism(x_hat, p.a, p.b):
            failures.append((sorted(p.flat), p.a, p.b))
            continue
        dual_record = md.parallelism_record(x_hat, p.a, p.b)
        if p.length != dual_record.width or p.width != dual_record.length or p.volume != dual_record.volume:
            failures.append((sorted(p.flat), p.a, p.b))
    report["parallelism_volume_duality"] = _check(failures, checked)

    failures = []
    checked = 0
    if size >= 3:
        for e in sorted(ground):
            if m.is_loop(e) or m.is_isthmus(e) or not m.is_flat([e]):
                continue
            checked += 1
            if md.is_flat([e]):
                holds = m.length([e]) + md.length([e]) == t.b10
            else:
                holds = m.length([e]) == t.b10
            if not holds:
                failures.append(e)
    report["length_sum_is_beta"] = _check(failures, checked)

    report[params.VERDICT] = utils.combine_verdicts(v[params.VERDICT] for v in report.values())
    log.debug(f"Duality suite on {size} elements: {report[params.VERDICT]}")
    return report
