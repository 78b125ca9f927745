"""
Ordered bases in bijection with bounded chambers, their flags, the adjacency matching, intrinsic
orientations and the logarithmic top forms built from the flags.

Bases are drawn from the no-broken-circuit bases of the matroid on J in the order N+1 < 1 < 2 < ... < N,
keeping those whose every element other than N+1 can be exchanged for a smaller one (internal activity
one). Each kept basis contains N+1; removing it leaves the k-tuple of hyperplanes, listed increasingly.
"""
import itertools
from dataclasses import dataclass

import networkx as nx
import numpy as np

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.exceptions import ConstructionFailureException, BijectionException, InvalidArgumentsException, \
    SingularEvaluationException
from arrangelib.geometry import AffineArrangement, Chamber, EdgeGeom, Vertex, affine_dimension, edge_geometry

log = utils.setup_logging(f"{params.APP_NAME}.betakbc")


@dataclass(frozen=True)
class OrderedBasis:
    hyperplanes: tuple
    vertex: Vertex

    @property
    def vertex_flat(self) -> frozenset:
        return self.vertex.flat

    def to_json(self):
        return list(self.hyperplanes)


@dataclass(frozen=True)
class Flag:
    basis: OrderedBasis
    edges: tuple
    hyperplane_sets: tuple

    def to_json(self):
        return [sorted(s) for s in self.hyperplane_sets]


@dataclass(frozen=True)
class LogForm:
    basis: OrderedBasis
    flag: Flag
    forms: tuple

    @property
    def factor_edges(self) -> tuple:
        return self.flag.edges

    def to_json(self):
        return {"basis": list(self.basis.hyperplanes), "factors": self.flag.to_json()}


def _is_nbc(m, ordered_basis, position) -> bool:
    # each element must be the least element of the closure of itself and the later elements
    for i, b in enumerate(ordered_basis):
        if min(m.closure(ordered_basis[i:]), key=position.get) != b:
            return False
    return True


def _internally_active_only_first(m, basis, position, rank) -> bool:
    for p in basis:
        if position[p] == 0:
            continue
        if not any(position[q] < position[p] and q not in basis and m.rank((basis - {p}) | {q}) == rank
                   for q in position):
            return False
    return True


def betakbc_bases(a: AffineArrangement, weights=None) -> list:
    m = a.matroid
    rank = a.dim + 1
    order = (a.infinity,) + a.hyperplanes
    position = {label: i for i, label in enumerate(order)}

    bases = []
    for tail in itertools.combinations(a.hyperplanes, a.dim):
        basis = frozenset(tail) | {a.infinity}
        if m.rank(basis) != rank:
            continue
        ordered = sorted(basis, key=position.get)
        if _is_nbc(m, ordered, position) and _internally_active_only_first(m, basis, position, rank):
            point, _ = la.solve_affine([a.form(j).gradient for j in tail], [a.form(j).constant for j in tail], a.dim)
            flat = frozenset(j for j in a.hyperplanes if a.form(j)(point) == 0)
            bases.append(OrderedBasis(tuple(tail), Vertex(point, flat)))

    beta = m.tutte().b10
    if len(bases) != beta:
        raise ConstructionFailureException(f"Found {len(bases)} ordered bases, expected {beta}")
    log.debug(f"Ordered bases: {[b.hyperplanes for b in bases]}")
    return bases


def flag(a: AffineArrangement, basis: OrderedBasis) -> Flag:
    edges = []
    sets = []
    for i in range(a.dim):
        hyperplanes = a.matroid.closure(basis.hyperplanes[i:]) - {a.infinity}
        sets.append(frozenset(hyperplanes))
        edges.append(edge_geometry(a, hyperplanes))
    return Flag(basis, tuple(edges), tuple(sets))


def _vertices_on(chamber: Chamber, hyperplanes) -> list:
    return [v for v in chamber.vertices if hyperplanes <= v.flat]


def adjacent(chamber: Chamber, f: Flag) -> bool:
    if not chamber.bounded:
        return False
    return all(affine_dimension(v.point for v in _vertices_on(chamber, s)) == i
               for i, s in enumerate(f.hyperplane_sets))


def _extendable(adjacency: dict, bases_left: list, chambers_left: set) -> bool:
    if not bases_left:
        return True
    graph = nx.Graph()
    top = [("basis", i) for i in bases_left]
    graph.add_nodes_from(top)
    graph.add_nodes_from(("chamber", s) for s in chambers_left)
    graph.add_edges_from((("basis", i), ("chamber", s)) for i in bases_left for s in adjacency[i] if s in chambers_left)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    return len(matching) // 2 == len(bases_left)


def chamber_bijection(a: AffineArrangement, bases: list, chambers: list, rng=None) -> list:
    """
    Matches every ordered basis with a bounded chamber adjacent to its flag.

    Bases are taken in order and each gets the first admissible chamber that still leaves a perfect matching
    for the remaining ones; chambers are tried in their listed order, or shuffled when a random generator is
    given.

    :return: list of (OrderedBasis, Chamber) pairs in basis order
    """
    bounded = [c for c in chambers if c.bounded]
    if len(bounded) != len(bases):
        raise BijectionException(f"{len(bases)} bases for {len(bounded)} bounded chambers")

    flags = [flag(a, b) for b in bases]
    adjacency = {}
    for i, f in enumerate(flags):
        candidates = [s for s, c in enumerate(bounded) if adjacent(c, f)]
        if rng is not None:
            rng.shuffle(candidates)
        adjacency[i] = candidates

    chambers_left = set(range(len(bounded)))
    pairs = []
    for i, b in enumerate(bases):
        chosen = None
        for s in adjacency[i]:
            if s not in chambers_left:
                continue
            if _extendable(adjacency, list(range(i + 1, len(bases))), chambers_left - {s}):
                chosen = s
                break
        if chosen is None:
            raise BijectionException(f"No adjacency-respecting chamber left for basis {b.hyperplanes}")
        chambers_left.discard(chosen)
        pairs.append((b, bounded[chosen]))
    return pairs


def count_bijections(a: AffineArrangement, bases: list, chambers: list) -> int:
    """
    Number of adjacency-respecting matchings of the bases with the bounded chambers.
    """
    bounded = [c for c in chambers if c.bounded]
    if len(bounded) != len(bases):
        raise BijectionException(f"{len(bases)} bases for {len(bounded)} bounded chambers")
    adjacency = [[s for s, c in enumerate(bounded) if adjacent(c, flag(a, b))] for b in bases]

    def _count(i: int, used: frozenset) -> int:
        if i == len(bases):
            return 1
        return sum(_count(i + 1, used | {s}) for s in adjacency[i] if s not in used)

    return _count(0, frozenset())


def orientation(a: AffineArrangement, chamber: Chamber, f: Flag) -> int:
    """
    Sign of the frame pointing from the flag's vertex into the successive flag faces of the chamber closure.
    Gram-Schmidt leaves the sign of the frame determinant unchanged, so the raw frame is used.
    """
    origin = f.edges[0].point
    frame = []
    for i in range(1, a.dim + 1):
        points = [v.point for v in (chamber.vertices if i == a.dim else _vertices_on(chamber, f.hyperplane_sets[i]))]
        if not points:
            raise InvalidArgumentsException(f"Flag of {f.basis.hyperplanes} is not adjacent to {chamber.sign_vector}")
        centroid = [sum(p[l] for p in points) / len(points) for l in range(a.dim)]
        frame.append([x - o for x, o in zip(centroid, origin)])
    det = la.determinant(la.ExactMatrix(frame, a.dim))
    if det == 0:
        raise InvalidArgumentsException(f"Degenerate frame for {f.basis.hyperplanes} on {chamber.sign_vector}")
    return 1 if det > 0 else -1


def log_form(a: AffineArrangement, basis: OrderedBasis) -> LogForm:
    return LogForm(basis, flag(a, basis), a.forms)


def form_value(phi: LogForm, weights, x) -> float:
    needed = set().union(*phi.flag.hyperplane_sets)
    values = {j: float(phi.forms[j - 1](x)) for j in needed}
    if any(v == 0 for v in values.values()):
        raise SingularEvaluationException(f"Point {list(x)} lies on one of the hyperplanes {sorted(needed)}")

    rows = []
    for s in phi.flag.hyperplane_sets:
        row = np.zeros(len(x))
        for j in s:
            row += float(weights.alpha(j)) * np.array([float(g) for g in phi.forms[j - 1].gradient]) / values[j]
        rows.append(row)
    return float(np.linalg.det(np.array(rows)))


def expand_terms(phi: LogForm, weights) -> list:
    """
    The determinant of the form expanded into terms c / (f^{j_1} ... f^{j_k}), one hyperplane per factor.

    :return: list of (exact coefficient, tuple of hyperplanes)
    """
    terms = []
    for choice in itertools.product(*(sorted(s) for s in phi.flag.hyperplane_sets)):
        if len(set(choice)) < len(choice):
            continue
        gradients = la.ExactMatrix([phi.forms[j - 1].gradient for j in choice], len(choice))
        coefficient = la.determinant(gradients)
        for j in choice:
            coefficient *= weights.alpha(j)
        if coefficient != 0:
            terms.append((coefficient, choice))
    return terms
