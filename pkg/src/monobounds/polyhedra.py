"""Polyhedral routines: double description, dual vertices, image membership.

The double description method here works on integer cones
``{x : Hx >= 0}`` and handles a lineality space, so it serves both vertex
enumeration of the dual feasible set and facet enumeration of a convex hull.
Adjacency is decided combinatorially from zero sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping, Sequence

from .constraints import NVARS, LinearFunctional, LinearProgramSpec, build_lp, event_functional
from .lp import Direction, InfeasibilityCertificate, Solver
from .model import (
    DEFIERS,
    OBS_CELLS,
    RESPONSE_TYPES,
    SINGLETONS,
    AssumptionSet,
    DataDistribution,
    Event,
    MassFunction,
)


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def _scale_to_int(row: Sequence[Fraction]) -> list[int]:
    s = 1
    for v in row:
        s = lcm(s, Fraction(v).denominator)
    return [int(Fraction(v) * s) for v in row]


def double_description(H: Sequence[Sequence[int]], dim: int | None = None):
    """Minimal generators of the cone ``{x in R^d : H x >= 0}``.

    Returns ``(rays, lineality)``: extreme rays of the pointed part as
    primitive integer tuples, and a basis of the lineality space.
    """
    H = [tuple(int(v) for v in h) for h in H]
    d = dim if dim is not None else len(H[0])
    lin = [tuple(int(i == k) for i in range(d)) for k in range(d)]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []  # bitmask of processed constraints vanishing on each ray

    for k, h in enumerate(H):
        bit = 1 << k
        hl = [_dot(h, l) for l in lin]
        piv = next((i for i, v in enumerate(hl) if v), None)
        if piv is not None:
            l0, a = lin[piv], hl[piv]
            if a < 0:
                l0, a = tuple(-x for x in l0), -a
            new_lin = []
            for i, l in enumerate(lin):
                if i != piv:
                    new_lin.append(_primitive([a * x - hl[i] * y for x, y in zip(l, l0)]) if hl[i] else l)
            new_rays = []
            for r in rays:
                hr = _dot(h, r)
                new_rays.append(_primitive([a * x - hr * y for x, y in zip(r, l0)]) if hr else r)
            rays = new_rays + [l0]
            zeros = [z | bit for z in zeros] + [bit - 1]
            lin = new_lin
            continue

        vals = [_dot(h, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos + zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        need = d - len(lin) - 2  # common active constraints for an edge
        for p in pos:
            zp = zeros[p]
            for n in neg:
                common = zp & zeros[n]
                if bin(common).count("1") < need:
                    continue
                if any(
                    (common & zeros[r]) == common for r in range(len(rays)) if r != p and r != n
                ):
                    continue
                vp, vn = vals[p], -vals[n]
                new_rays.append(_primitive([vp * x + vn * y for x, y in zip(rays[n], rays[p])]))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return rays, lin


# --- dual vertices ------------------------------------------------------------


@dataclass(frozen=True)
class DualVertex:
    """A vertex ``u >= 0`` of ``{u : A'u >= c}`` for the split inequality form.

    ``objective_value`` is the bound this vertex certifies on the primal
    optimum: an upper bound for max problems, a lower bound for min problems.
    """

    u: tuple[Fraction, ...]
    objective_value: Fraction


class SpecInfeasible(ValueError):
    pass


def inequality_form(spec: LinearProgramSpec) -> tuple[list[tuple[Fraction, ...]], list[Fraction]]:
    """``A q <= b`` with each equality ``a q = b`` split into ``a q <= b`` and ``-a q <= -b``."""
    A, b = [], []
    for r in spec.rows:
        A.append(r.coefficients)
        b.append(r.rhs)
        A.append(tuple(-v for v in r.coefficients))
        b.append(-r.rhs)
    return A, b


@lru_cache(maxsize=256)
def _dual_vertex_points(A: tuple[tuple[Fraction, ...], ...], c: tuple[Fraction, ...]):
    """Vertices and extreme rays of ``{u >= 0 : A'u >= c}``; depends only on the model, not on the data."""
    K = len(A)
    # homogenise: x = (u, lam), constraints u >= 0, lam >= 0, A'u - c lam >= 0
    H = [[int(i == k) for i in range(K + 1)] for k in range(K + 1)]
    for j in range(len(c)):
        H.append(_scale_to_int([A[k][j] for k in range(K)] + [-c[j]]))
    rays, lin = double_description(H, K + 1)
    if lin:
        raise RuntimeError("dual feasible set is not pointed")
    points, directions = [], []
    for r in rays:
        lam = r[K]
        if lam > 0:
            points.append((tuple(Fraction(x, lam) for x in r[:K]), r[:K], lam))
        else:
            directions.append(r[:K])
    return tuple(sorted(points)), tuple(directions)


def enumerate_dual_vertices(
    spec: LinearProgramSpec,
    f: LinearFunctional,
    direction: Direction | str = Direction.MAX,
) -> list[DualVertex]:
    """All vertices of the dual feasible set, with the bound each one certifies.

    For ``max c'q`` the dual is ``min b'u`` over ``A'u >= c, u >= 0``; for
    ``min c'q`` it is ``-min b'u`` over ``A'u >= -c, u >= 0``. By strong
    duality the best certified bound equals the primal optimum.
    """
    direction = Direction.parse(direction)
    A, b = inequality_form(spec)
    sign = 1 if direction is Direction.MAX else -1
    c = tuple(sign * v for v in f.coefficients)
    points, rays = _dual_vertex_points(tuple(A), c)
    scale = lcm(*(v.denominator for v in b))
    bi = [int(v * scale) for v in b]
    # an extreme ray along which b'u decreases makes the dual unbounded, i.e. the primal empty
    if any(sum(r_k * b_k for r_k, b_k in zip(r, bi)) < 0 for r in rays):
        raise SpecInfeasible("dual vertices requested for an infeasible program")
    return [
        DualVertex(u, Fraction(sign * sum(r_k * b_k for r_k, b_k in zip(r, bi)), lam * scale))
        for u, r, lam in points
    ]


def dual_optimum(vertices: Sequence[DualVertex], direction: Direction | str) -> Fraction:
    vals = [v.objective_value for v in vertices]
    return min(vals) if Direction.parse(direction) is Direction.MAX else max(vals)


def is_dual_feasible(spec: LinearProgramSpec, f: LinearFunctional, direction, u: Sequence[Fraction]) -> bool:
    A, _ = inequality_form(spec)
    sign = 1 if Direction.parse(direction) is Direction.MAX else -1
    if any(x < 0 for x in u):
        return False
    return all(
        sum(u[k] * A[k][j] for k in range(len(A))) >= sign * f.coefficients[j] for j in range(NVARS)
    )


# --- image membership ----------------------------------------------------------


class NotInImage(Exception):
    """No admissible mass function matches both the data and the targets."""

    def __init__(self, certificate: InfeasibilityCertificate):
        super().__init__("targets are not attainable for this data distribution")
        self.certificate = certificate


class MalformedTargets(ValueError):
    pass


def admissible_types(assumptions: AssumptionSet) -> list[int]:
    """Indices of response types whose unit masses are extreme points of the restricted simplex."""
    if AssumptionSet.parse(assumptions) is AssumptionSet.EM:
        return [w.index for w in RESPONSE_TYPES if w not in DEFIERS]
    return list(range(NVARS))


def image_point(w_index: int) -> tuple[int, ...]:
    """Data cells then singleton event probabilities produced by a unit mass on one type."""
    w = RESPONSE_TYPES[w_index]
    data = tuple(int(w.observed(z) == (y, d)) for y, d, z in OBS_CELLS)
    cells = tuple(int(w.cell in e) for e in SINGLETONS)
    return data + cells


def _normalise_targets(targets: Mapping[Event, Fraction]) -> tuple[Fraction, ...]:
    keys = set(targets)
    if keys != set(SINGLETONS):
        raise MalformedTargets("targets must give exactly the four singleton events")
    vals = tuple(Fraction(targets[e]) for e in SINGLETONS)
    if any(v < 0 for v in vals):
        raise MalformedTargets("targets must be nonnegative")
    if sum(vals) != 1:
        raise MalformedTargets(f"targets sum to {sum(vals)}, not 1")
    return vals


def image_membership(
    P: DataDistribution,
    assumptions: AssumptionSet,
    targets: Mapping[Event, Fraction],
) -> MassFunction:
    """Find convex weights on the admissible unit masses whose image is ``(P, targets)``.

    The weights are returned as a mass function; :class:`NotInImage` carries
    the Farkas certificate separating the point from the hull.
    """
    assumptions = AssumptionSet.parse(assumptions)
    vals = _normalise_targets(targets)
    spec = build_lp(P, assumptions)
    for e, t in zip(SINGLETONS, vals):
        spec = spec.with_row(event_functional(e).coefficients, t, f"mu{e}")
    solver = Solver(spec)
    if not solver.feasible:
        raise NotInImage(solver.certificate)
    return solver.witness()


@dataclass(frozen=True)
class HRepresentation:
    """``{x : E x = e, G x >= g}`` in the coordinates of :func:`image_point`."""

    equalities: tuple[tuple[tuple[int, ...], int], ...]
    inequalities: tuple[tuple[tuple[int, ...], int], ...]

    def contains(self, x: Sequence[Fraction]) -> bool:
        if any(sum(a * v for a, v in zip(row, x)) != rhs for row, rhs in self.equalities):
            return False
        return all(sum(a * v for a, v in zip(row, x)) >= rhs for row, rhs in self.inequalities)


@lru_cache(maxsize=4)
def image_hrep(assumptions: AssumptionSet) -> HRepresentation:
    """Facets and affine hull of the convex hull of the image points.

    Valid inequalities ``a.x >= beta`` form the cone
    ``{(a, -beta) : a.s - beta >= 0 for every image point s}``; its extreme rays
    are the facets and its lineality space gives the affine-hull equations.
    """
    pts = [image_point(k) for k in admissible_types(assumptions)]
    dim = len(pts[0])
    H = [list(p) + [1] for p in pts]
    rays, lin = double_description(H, dim + 1)
    eqs = tuple((tuple(v[:dim]), -v[dim]) for v in lin)
    ineqs = tuple(sorted((tuple(v[:dim]), -v[dim]) for v in rays))
    return HRepresentation(eqs, ineqs)


def image_coordinates(P: DataDistribution, targets: Mapping[Event, Fraction]) -> tuple[Fraction, ...]:
    vals = _normalise_targets(targets)
    return tuple(P[c] for c in OBS_CELLS) + vals
