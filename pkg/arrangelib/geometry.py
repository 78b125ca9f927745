"""
Affine arrangements of a pair in the chart where the chart hyperplane N+1 is at infinity: affine forms,
vertices, chambers, boundedness, external supporting faces and edges.

Everything here is exact. Chamber enumeration walks across walls breadth first from a seed chamber and
decides feasibility of each strict sign system by Fourier-Motzkin elimination, which also produces an
exact interior point by back substitution.
"""
import itertools
import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.dualpair import DualPair, Side
from arrangelib.exceptions import ChartException, UnsupportedArrangementException, InvalidArgumentsException, \
    InvariantViolationException
from arrangelib.matroid import Matroid, ParallelismRecord, matroid_from_columns

log = utils.setup_logging(f"{params.APP_NAME}.geometry")


@dataclass(frozen=True)
class AffineForm:
    constant: Fraction
    gradient: tuple

    def __call__(self, point) -> Fraction:
        return self.constant + sum((g * x for g, x in zip(self.gradient, point)), Fraction(0))

    def to_json(self):
        return {"constant": self.constant, "gradient": list(self.gradient)}


@dataclass(frozen=True)
class Vertex:
    point: tuple
    flat: frozenset

    def to_json(self):
        return {"point": list(self.point), "flat": sorted(self.flat)}


@dataclass(frozen=True)
class Chamber:
    signs: tuple
    interior_point: tuple
    vertices: tuple
    bounded: bool

    @property
    def sign_vector(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def sign(self, j: int) -> int:
        return self.signs[j - 1]

    def to_json(self):
        return {"signs": self.sign_vector, "bounded": self.bounded, "interior_point": list(self.interior_point),
                "vertices": [sorted(v.flat) for v in self.vertices]}


@dataclass(frozen=True)
class EdgeGeom:
    flat: frozenset
    point: tuple
    directions: la.ExactMatrix
    dim: int

    def to_json(self):
        return {"flat": sorted(self.flat), "dim": self.dim, "point": list(self.point),
                "directions": self.directions.to_json()}


@dataclass(frozen=True)
class Face:
    vertices: tuple
    dim: int

    def to_json(self):
        return {"dim": self.dim, "vertices": [sorted(v.flat) for v in self.vertices]}


def affine_dimension(points) -> int:
    points = list(points)
    if len(points) == 0:
        return -1
    base = points[0]
    differences = [[x - b for x, b in zip(p, base)] for p in points[1:]]
    if not differences:
        return 0
    return la.rank(la.ExactMatrix(differences, len(base)))


class AffineArrangement:
    _dim = None
    _forms = None
    _matroid = None
    _side = None
    _vertices = None
    _chambers = None
    _supports = None
    _lock = None

    def __init__(self, dim: int, forms, matroid: Matroid, side: Side = None):
        self._dim = dim
        self._forms = tuple(forms)
        self._matroid = matroid
        self._side = side
        self._supports = {}
        self._lock = threading.RLock()

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def forms(self) -> tuple:
        return self._forms

    @property
    def N(self) -> int:
        return len(self._forms)

    @property
    def hyperplanes(self) -> tuple:
        return tuple(range(1, self.N + 1))

    @property
    def infinity(self) -> int:
        return self.N + 1

    @property
    def matroid(self) -> Matroid:
        return self._matroid

    @property
    def side(self) -> Side:
        return self._side

    def form(self, j: int) -> AffineForm:
        return self._forms[j - 1]

    def vertices(self) -> list:
        with self._lock:
            if self._vertices is None:
                self._vertices = _enumerate_vertices(self)
            return self._vertices

    def chambers(self) -> list:
        with self._lock:
            if self._chambers is None:
                self._chambers = _enumerate_chambers(self)
            return self._chambers

    def bounded_chambers(self) -> list:
        return [c for c in self.chambers() if c.bounded]

    def external_support(self, chamber: Chamber, j: int):
        key = (chamber.signs, j)
        with self._lock:
            if key not in self._supports:
                self._supports[key] = _external_support(self, chamber, j)
            return self._supports[key]

    def to_json(self):
        return {"dim": self._dim, "side": None if self._side is None else self._side.value,
                "forms": [f.to_json() for f in self._forms]}


def chart_forms(m: la.ExactMatrix) -> list:
    """
    Affine forms of the columns 1..N of a coordinate matrix in the chart where column N+1 evaluates to 1.

    The last row p with a nonzero entry in column N+1 is solved for, the other rows stay free coordinates.
    """
    chart = m.column(m.ncols - 1)
    p = max((i for i, c in enumerate(chart) if c != 0), default=None)
    if p is None:
        raise ChartException()

    free = [i for i in range(m.nrows) if i != p]
    forms = []
    for j in range(m.ncols - 1):
        top = m[p, j] / chart[p]
        gradient = tuple(m[i, j] - top * chart[i] for i in free)
        forms.append(AffineForm(top, gradient))
    return forms


def arrangement_from_matrix(m: la.ExactMatrix, side: Side = None) -> AffineArrangement:
    if la.rank(m) != m.nrows:
        raise UnsupportedArrangementException(f"Arrangement of rank {la.rank(m)} in a {m.nrows}-row chart is "
                                              f"not essential")
    forms = chart_forms(m)
    for j, f in enumerate(forms, start=1):
        if f.constant == 0 and all(g == 0 for g in f.gradient):
            raise UnsupportedArrangementException(f"Form {j} vanishes identically")
    return AffineArrangement(m.nrows - 1, forms, matroid_from_columns(m), side)


def coordinate_matrix(a: AffineArrangement, order=None) -> la.ExactMatrix:
    """
    Homogeneous coordinate matrix of the arrangement in its chart. Column i holds the gradient and constant of
    form order[i-1]; the last column is the chart hyperplane.
    """
    order = a.hyperplanes if order is None else tuple(order)
    if sorted(order) != list(a.hyperplanes):
        raise InvalidArgumentsException(f"{list(order)} does not reorder the hyperplanes {list(a.hyperplanes)}")
    columns = [list(a.form(j).gradient) + [a.form(j).constant] for j in order]
    columns.append([0] * a.dim + [1])
    return la.ExactMatrix(columns, a.dim + 1).transpose()


def relabel(a: AffineArrangement, order) -> AffineArrangement:
    """
    The same arrangement with hyperplane order[i-1] renamed to i. The chart hyperplane keeps its label.
    """
    return arrangement_from_matrix(coordinate_matrix(a, order), a.side)


def affine_forms(d: DualPair, side: Side) -> AffineArrangement:
    side = Side(side)
    arrangement = arrangement_from_matrix(d.matrix(side), side)
    log.debug(f"{side.value} arrangement: {arrangement.N} forms in dimension {arrangement.dim}")
    return arrangement


def _enumerate_vertices(a: AffineArrangement) -> list:
    seen = {}
    for basis in itertools.combinations(a.hyperplanes, a.dim):
        gradients = [a.form(j).gradient for j in basis]
        if la.rank(la.ExactMatrix(gradients, a.dim)) < a.dim:
            continue
        point, _ = la.solve_affine(gradients, [a.form(j).constant for j in basis], a.dim)
        if point not in seen:
            seen[point] = Vertex(point, frozenset(j for j in a.hyperplanes if a.form(j)(point) == 0))
    return sorted(seen.values(), key=lambda v: (sorted(v.flat), v.point))


def _normalize(inequalities):
    # scale to a canonical representative and drop duplicates; None signals a violated constant inequality
    out = set()
    for coeffs, const in inequalities:
        coeffs = tuple(la.to_rational(c) for c in coeffs)
        const = la.to_rational(const)
        scale = max((abs(c) for c in coeffs), default=Fraction(0))
        if scale == 0:
            if const <= 0:
                return None
            continue
        out.add((tuple(c / scale for c in coeffs), const / scale))
    return sorted(out)


def fourier_motzkin_point(inequalities, dim: int):
    """
    A point strictly satisfying every coeffs . x + const > 0, or None when the system is infeasible.
    """
    current = _normalize(inequalities)
    if current is None:
        return None
    systems = [current]
    for var in reversed(range(dim)):
        positive = [q for q in current if q[0][var] > 0]
        negative = [q for q in current if q[0][var] < 0]
        eliminated = [(coeffs[:var], const) for coeffs, const in current if coeffs[var] == 0]
        for (p, pc), (q, qc) in itertools.product(positive, negative):
            lam = -q[var]
            mu = p[var]
            eliminated.append((tuple(lam * p[i] + mu * q[i] for i in range(var)), lam * pc + mu * qc))
        current = _normalize(eliminated)
        if current is None:
            return None
        systems.append(current)

    point = []
    for level in range(dim):
        lower = None
        upper = None
        for coeffs, const in systems[dim - 1 - level]:
            rest = const + sum((coeffs[i] * point[i] for i in range(level)), Fraction(0))
            if coeffs[level] > 0:
                bound = -rest / coeffs[level]
                lower = bound if lower is None else max(lower, bound)
            elif coeffs[level] < 0:
                bound = -rest / coeffs[level]
                upper = bound if upper is None else min(upper, bound)
        if lower is not None and upper is not None:
            if lower >= upper:
                raise InvariantViolationException("Fourier-Motzkin back substitution found an empty interval")
            value = (lower + upper) / 2
        elif lower is not None:
            value = lower + 1
        elif upper is not None:
            value = upper - 1
        else:
            value = Fraction(0)
        point.append(value)
    return tuple(point)


def _sign_system(a: AffineArrangement, signs):
    return [(tuple(s * g for g in f.gradient), s * f.constant) for s, f in zip(signs, a.forms)]


def _is_bounded(a: AffineArrangement, signs) -> bool:
    # bounded iff the recession cone {v : s_j grad f^j . v >= 0} is {0}; a nonzero pointed cone has an
    # extreme ray cut out by dim - 1 independent constraints
    rows = [tuple(s * g for g in f.gradient) for s, f in zip(signs, a.forms)]

    def _in_cone(v):
        return all(sum((r * x for r, x in zip(row, v)), Fraction(0)) >= 0 for row in rows)

    if a.dim == 1:
        candidates = [(Fraction(1),)]
    else:
        candidates = []
        for subset in itertools.combinations(rows, a.dim - 1):
            sub = la.ExactMatrix(subset, a.dim)
            if la.rank(sub) == a.dim - 1:
                candidates.append(la.nullspace_basis(sub).row(0))
    for d in candidates:
        if _in_cone(d) or _in_cone(tuple(-x for x in d)):
            return False
    return True


def _seed_point(a: AffineArrangement) -> tuple:
    # a moment curve meets each hyperplane at most dim times
    for t in range(1, a.N * a.dim + 2):
        point = tuple(Fraction(t) ** (i + 1) for i in range(a.dim))
        if all(f(point) != 0 for f in a.forms):
            return point
    raise InvariantViolationException("No point off the arrangement on the moment curve")


def _make_chamber(a: AffineArrangement, signs, point) -> Chamber:
    closure = tuple(v for v in a.vertices() if all(s * a.form(j)(v.point) >= 0
                                                   for j, s in zip(a.hyperplanes, signs)))
    bounded = _is_bounded(a, signs)
    if bounded and closure:
        average = tuple(sum((v.point[i] for v in closure), Fraction(0)) / len(closure) for i in range(a.dim))
        if all(s * f(average) > 0 for s, f in zip(signs, a.forms)):
            point = average
    return Chamber(tuple(signs), point, closure, bounded)


def _enumerate_chambers(a: AffineArrangement) -> list:
    seed = _seed_point(a)
    seed_signs = tuple(1 if f(seed) > 0 else -1 for f in a.forms)
    found = {seed_signs: seed}
    rejected = set()
    queue = deque([seed_signs])
    while queue:
        signs = queue.popleft()
        for i in range(a.N):
            flipped = signs[:i] + (-signs[i],) + signs[i + 1:]
            if flipped in found or flipped in rejected:
                continue
            point = fourier_motzkin_point(_sign_system(a, flipped), a.dim)
            if point is None:
                rejected.add(flipped)
            else:
                found[flipped] = point
                queue.append(flipped)

    chambers = [_make_chamber(a, signs, point) for signs, point in found.items()]
    chambers.sort(key=lambda c: c.sign_vector)
    log.info(f"Found {len(chambers)} chambers, {sum(1 for c in chambers if c.bounded)} bounded")
    return chambers


def chambers(a: AffineArrangement) -> list:
    return a.chambers()


def edge_geometry(a: AffineArrangement, flat) -> EdgeGeom:
    flat = frozenset(flat)
    solved = la.solve_affine([a.form(j).gradient for j in sorted(flat)], [a.form(j).constant for j in sorted(flat)],
                             a.dim)
    if solved is None:
        raise InvalidArgumentsException(f"Hyperplanes {sorted(flat)} do not meet in the affine chart")
    point, directions = solved
    return EdgeGeom(flat, point, directions, directions.nrows)


def _external_support(a: AffineArrangement, c: Chamber, j: int):
    if not c.bounded:
        raise InvalidArgumentsException(f"Chamber {c.sign_vector} is unbounded")
    form = a.form(j)
    values = [abs(form(v.point)) for v in c.vertices]
    top = max(values)
    remote = tuple(v for v, value in zip(c.vertices, values) if value == top)
    flat = frozenset(i for i in a.hyperplanes if all(a.form(i)(v.point) == 0 for v in remote))
    return Face(remote, affine_dimension(v.point for v in remote)), edge_geometry(a, flat)


def external_support(a: AffineArrangement, c: Chamber, j: int):
    """
    The face of the closure of a bounded chamber farthest from the hyperplane j and the edge it spans.

    :return: (Face, EdgeGeom)
    """
    return a.external_support(c, j)


def parallelism_chamber_count(a: AffineArrangement, p: ParallelismRecord) -> int:
    if p.b != a.infinity:
        raise InvalidArgumentsException(f"Parallelism must be taken relative to H^{a.infinity}")
    return sum(1 for c in a.bounded_chambers() if a.external_support(c, p.a)[1].flat == p.flat)


def verify_geometry(a: AffineArrangement) -> dict:
    m = a.matroid
    t = m.tutte()
    bounded = a.bounded_chambers()
    checks = {
        "bounded_count": utils.comparison(len(bounded), t.b10, 0, len(bounded) == t.b10),
        "chamber_count": utils.comparison(len(a.chambers()), t.evaluate(2, 0) // 2, 0,
                                          2 * len(a.chambers()) == t.evaluate(2, 0)),
    }

    failures = []
    per_a = {j: 0 for j in a.hyperplanes}
    checked = 0
    for p in m.parallelisms():
        if p.b != a.infinity:
            continue
        count = parallelism_chamber_count(a, p)
        per_a[p.a] += count
        checked += 1
        if count != p.volume:
            failures.append({"flat": sorted(p.flat), "a": p.a, "count": count, "volume": p.volume})
    checks["parallelism_counts"] = {"checked": checked, "failures": failures[:5],
                                    params.VERDICT: utils.verdict(len(failures) == 0)}
    checks["support_sums"] = {"sums": per_a,
                              params.VERDICT: utils.verdict(all(v == t.b10 for v in per_a.values()))}

    failures = []
    checked = 0
    for record in m.flats():
        if a.infinity in record.flat:
            continue
        checked += 1
        edge = edge_geometry(a, record.flat)
        if edge.dim != a.dim - record.rank:
            failures.append(sorted(record.flat))
    checks["edge_dimensions"] = {"checked": checked, "failures": failures[:5],
                                 params.VERDICT: utils.verdict(len(failures) == 0)}

    return {"beta": t.b10, params.CHECKS: checks,
            params.VERDICT: utils.combine_verdicts(c[params.VERDICT] for c in checks.values())}
