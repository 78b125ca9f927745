"""
Tensor Gauss-Jacobi integration over bounded chambers.

A chamber closure is cut into simplices, one per full flag of its faces, with corners at the face
centroids. On a simplex with corners c_0 (a vertex), c_1, ..., c_k (the chamber centroid) the collapsed
coordinates s_1, ..., s_k in [0, 1] give tail sums t_i = s_1 ... s_i of the barycentric coordinates. A
hyperplane through c_0, ..., c_m and through no later corner then factors as t_{m+1} times a form with no
zero on the closed cube, so every boundary singularity becomes a pure power of one cube coordinate and is
absorbed into that coordinate's Jacobi weight.
"""
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

import arrangelib.exactla as la
import arrangelib.parameters as params
import arrangelib.utils as utils
from arrangelib.exceptions import QuadratureAccuracyException, WeightDomainException, InvalidArgumentsException
from arrangelib.geometry import AffineArrangement, Chamber, affine_dimension

log = utils.setup_logging(f"{params.APP_NAME}.quadrature")


@dataclass(frozen=True)
class QuadratureSpec:
    degree: int = params.DEFAULT_QUAD_DEGREE
    max_refinements: int = params.DEFAULT_QUAD_MAX_REFINEMENTS
    tolerance: float = params.DEFAULT_QUAD_TOLERANCE
    workers: int = params.DEFAULT_WORKERS

    @classmethod
    def from_env(cls, degree: int = None, max_refinements: int = None, tolerance: float = None,
                 workers: int = None):
        # explicit arguments win over the environment, which wins over the defaults
        def _pick(value, env_name, default, cast):
            if value is not None:
                return cast(value)
            env = os.getenv(env_name)
            return default if env is None else cast(env)

        spec = cls(_pick(degree, params.QUAD_DEGREE_PARAM, params.DEFAULT_QUAD_DEGREE, int),
                   _pick(max_refinements, params.QUAD_REFINEMENTS_PARAM, params.DEFAULT_QUAD_MAX_REFINEMENTS, int),
                   _pick(tolerance, params.QUAD_TOLERANCE_PARAM, params.DEFAULT_QUAD_TOLERANCE, float),
                   _pick(workers, params.WORKERS_PARAM, params.DEFAULT_WORKERS, int))
        if spec.degree < 1 or spec.max_refinements < 0 or spec.tolerance <= 0 or spec.workers < 1:
            raise InvalidArgumentsException(f"Invalid quadrature settings {spec}")
        return spec

    def to_json(self):
        return {"degree": self.degree, "max_refinements": self.max_refinements, "tolerance": self.tolerance,
                "workers": self.workers}


@dataclass(frozen=True)
class FlagSimplex:
    corners: np.ndarray
    volume_factor: float
    vanishing: dict
    corner_values: dict


@lru_cache(maxsize=512)
def jacobi_rule(n: int, exponent: float):
    """
    Nodes and weights on [0, 1] for the weight s^exponent.
    """
    if exponent <= -1:
        raise WeightDomainException(f"Jacobi exponent {exponent} is not integrable")
    x, w = roots_jacobi(n, 0.0, exponent)
    return (1 + x) / 2, w * 2.0 ** (-exponent - 1)


def _faces(a: AffineArrangement, chamber: Chamber) -> dict:
    # faces of the closure keyed by dimension, each a frozenset of indices into chamber.vertices
    vertices = chamber.vertices
    faces = {a.dim: {frozenset(range(len(vertices)))}}
    for d in range(a.dim):
        faces[d] = set()
    for record in a.matroid.flats():
        if a.infinity in record.flat or record.rank == 0:
            continue
        d = a.dim - record.rank
        members = frozenset(i for i, v in enumerate(vertices) if record.flat <= v.flat)
        if members and affine_dimension(vertices[i].point for i in members) == d:
            faces[d].add(members)
    return faces


def _centroid(points) -> tuple:
    points = list(points)
    return tuple(sum((p[l] for p in points), Fraction(0)) / len(points) for l in range(len(points[0])))


def _full_flags(faces: dict, top: int) -> list:
    flags = [[f] for f in faces[top]]
    for d in range(top - 1, -1, -1):
        flags = [chain + [f] for chain in flags for f in sorted(faces[d], key=sorted) if f < chain[-1]]
    return [list(reversed(chain)) for chain in flags]


def flag_simplices(a: AffineArrangement, chamber: Chamber) -> list:
    if not chamber.bounded:
        raise InvalidArgumentsException(f"Chamber {chamber.sign_vector} is unbounded")

    simplices = []
    for chain in _full_flags(_faces(a, chamber), a.dim):
        corners = [_centroid(chamber.vertices[i].point for i in sorted(face)) for face in chain]
        edges = la.ExactMatrix([[x - y for x, y in zip(corners[i], corners[i - 1])] for i in range(1, a.dim + 1)],
                               a.dim)
        vanishing = {}
        values = {}
        for j in a.hyperplanes:
            exact = [a.form(j)(c) for c in corners]
            vanishing[j] = max((i for i in range(len(exact)) if all(v == 0 for v in exact[:i + 1])), default=-1)
            values[j] = np.array([float(v) for v in exact])
        simplices.append(FlagSimplex(np.array([[float(x) for x in c] for c in corners]),
                                     abs(float(la.determinant(edges))), vanishing, values))
    log.debug(f"Chamber {chamber.sign_vector}: {len(simplices)} flag simplices")
    return simplices


def _tail_product(s: np.ndarray, first: int, last: int) -> np.ndarray:
    # product of s_first ... s_last with 1-based indices; empty product is one
    out = np.ones(s.shape[0])
    for l in range(first, last + 1):
        out = out * s[:, l - 1]
    return out


def integrate_simplex(simplex: FlagSimplex, alphas: dict, terms: list, denominators, degree: int) -> float:
    """
    Integral over one flag simplex of prod |f^j|^alpha_j times the sum of c / prod_{j in S} f^j.

    :param alphas: weight of each hyperplane as float
    :param terms: (coefficient, hyperplanes S) pairs
    :param denominators: every hyperplane that appears in some S
    :param degree: Gauss-Jacobi order per coordinate
    """
    k = simplex.corners.shape[0] - 1
    m = simplex.vanishing
    base = {j: alphas[j] - (1 if j in denominators else 0) for j in alphas}
    exponents = [(k - l) + sum(base[j] for j in alphas if m[j] + 1 >= l) for l in range(1, k + 1)]

    rules = [jacobi_rule(degree, e) for e in exponents]
    s = np.stack([g.ravel() for g in np.meshgrid(*[r[0] for r in rules], indexing="ij")], axis=1)
    weights = np.ones(s.shape[0])
    for g in np.meshgrid(*[r[1] for r in rules], indexing="ij"):
        weights = weights * g.ravel()

    reduced = {}
    for j in alphas:
        h = np.zeros(s.shape[0])
        for i in range(m[j] + 1, k + 1):
            if i < k:
                share = _tail_product(s, m[j] + 2, i) * (1 - s[:, i])
            else:
                share = _tail_product(s, m[j] + 2, k)
            h = h + simplex.corner_values[j][i] * share
        reduced[j] = h

    integrand = np.zeros(s.shape[0])
    for coefficient, chosen in terms:
        part = np.full(s.shape[0], float(coefficient))
        for j in alphas:
            power = alphas[j] - (1 if j in chosen else 0)
            part = part * np.abs(reduced[j]) ** power
            if j in chosen:
                part = part * np.sign(reduced[j])
            if power != base[j]:
                part = part * _tail_product(s, 1, m[j] + 1)
        integrand = integrand + part

    return simplex.volume_factor * float(np.sum(weights * integrand))


def integrate_chamber(simplices: list, alphas: dict, terms: list, denominators, spec: QuadratureSpec):
    """
    Raise the order by a fixed step until two successive orders agree to the target.

    :return: (value, error estimate, final order)
    """
    degree = spec.degree
    previous = None
    estimate = float("inf")
    for _ in range(max(spec.max_refinements, 1) + 1):
        value = sum(integrate_simplex(t, alphas, terms, denominators, degree) for t in simplices)
        if previous is not None:
            estimate = abs(value - previous)
            if estimate <= spec.tolerance * max(abs(value), 1.0):
                return value, estimate, degree
        previous = value
        degree += params.QUAD_REFINEMENT_STEP
    raise QuadratureAccuracyException(estimate)
