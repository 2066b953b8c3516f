import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import P_BAD, P_DIAMOND, P_STAR, mass_functions
from monobounds.constraints import (
    LinearFunctional,
    LinearProgramSpec,
    build_lp,
    event_functional,
    simplex_spec,
)
from monobounds.lp import Direction, Infeasible, InfeasibilityCertificate, Solver, feasibility, solve
from monobounds.model import ALL_EVENTS, AssumptionSet, Event, MassFunction, push_forward
from oracles import primal_vertices

E, EM = AssumptionSet.E, AssumptionSet.EM

# Frozen from the brute-force vertex oracle in oracles.py (116 vertices under
# E, 32 under EM); the two assumption sets differ only at masks 2 and 13.
P_STAR_E = {
    0: ("0", "0"), 1: ("0", "1/2"), 2: ("0", "7/10"), 3: ("1/2", "4/5"),
    4: ("0", "3/10"), 5: ("1/5", "3/5"), 6: ("1/10", "1"), 7: ("3/5", "1"),
    8: ("0", "2/5"), 9: ("0", "9/10"), 10: ("2/5", "4/5"), 11: ("7/10", "1"),
    12: ("1/5", "1/2"), 13: ("3/10", "1"), 14: ("1/2", "1"), 15: ("1", "1"),
}
P_STAR_EM = {**P_STAR_E, 2: ("1/10", "7/10"), 13: ("3/10", "9/10")}


@pytest.mark.parametrize("assumptions,table", [(E, P_STAR_E), (EM, P_STAR_EM)])
def test_p_star_all_endpoints(assumptions, table):
    spec = build_lp(P_STAR, assumptions)
    for mask, (lo, hi) in table.items():
        f = event_functional(Event(mask))
        assert solve(spec, f, "min").value == F(lo)
        assert solve(spec, f, "max").value == F(hi)


@pytest.mark.parametrize("assumptions", [E, EM])
def test_matches_live_vertex_oracle(assumptions):
    spec = build_lp(P_DIAMOND, assumptions)
    verts = primal_vertices(spec)
    for e in ALL_EVENTS:
        f = event_functional(e)
        assert solve(spec, f, "max").value == max(f(v) for v in verts)
        assert solve(spec, f, "min").value == min(f(v) for v in verts)


def test_simplex_only():
    rep = solve(simplex_spec(), event_functional(Event.of([(0, 1)])), "max")
    assert rep.value == 1
    nonzero = [k for k, v in enumerate(rep.witness.q) if v]
    assert len(nonzero) == 1
    assert rep.witness.q[nonzero[0]] == 1


def test_p_star_upper_00():
    rep = solve(build_lp(P_STAR, E), event_functional(Event.of([(0, 0)])), "max")
    assert rep.value == F(1, 2)
    assert rep.verify(build_lp(P_STAR, E), event_functional(Event.of([(0, 0)])))


def test_random_feasible_points_respect_optimum():
    # random convex combinations of vertices never beat the reported optimum
    spec = build_lp(P_STAR, E)
    verts = primal_vertices(spec)
    f = event_functional(Event.of([(0, 0)]))
    best = solve(spec, f, "max").value
    rng = random.Random(0)
    for _ in range(200):
        w = [rng.randint(0, 5) for _ in verts]
        if not any(w):
            continue
        q = [sum(wi * v[j] for wi, v in zip(w, verts)) / sum(w) for j in range(16)]
        assert spec.is_satisfied_by(q)
        assert f(q) <= best


class TestInfeasible:
    def test_p_bad(self):
        spec = build_lp(P_BAD, E)
        assert primal_vertices(spec) == []
        with pytest.raises(Infeasible) as exc:
            solve(spec, event_functional(Event(1)), "max")
        cert = exc.value.certificate
        assert cert.verify(spec)
        assert cert.residual > 0

    def test_feasibility_returns_certificate(self):
        out = feasibility(build_lp(P_BAD, E))
        assert isinstance(out, InfeasibilityCertificate)

    def test_inconsistent_row(self):
        spec = simplex_spec().with_row((F(1),) * 16, F(1, 2))
        cert = feasibility(spec)
        assert isinstance(cert, InfeasibilityCertificate) and cert.verify(spec)


class TestFeasible:
    def test_uniform(self):
        spec = build_lp(push_forward(MassFunction.uniform()), E)
        Q = feasibility(spec)
        assert isinstance(Q, MassFunction) and spec.is_satisfied_by(Q)

    def test_p_star_em(self):
        spec = build_lp(P_STAR, EM)
        Q = feasibility(spec)
        assert isinstance(Q, MassFunction)
        assert spec.is_satisfied_by(Q) and Q.defier_mass == 0


def _functional(seed):
    rng = random.Random(seed)
    return LinearFunctional(tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(16)))


@settings(max_examples=40, deadline=None)
@given(mass_functions())
def test_reports_are_certified(Q):
    spec = build_lp(push_forward(Q), E)
    for seed in range(3):
        f = _functional(seed)
        for d in ("min", "max"):
            rep = solve(spec, f, d)
            assert rep.verify(spec, f)
            if d == "max":
                assert rep.value >= f(Q)
            else:
                assert rep.value <= f(Q)


@settings(max_examples=30, deadline=None)
@given(mass_functions(em=True))
def test_invariant_to_row_order_and_duplication(Q):
    spec = build_lp(push_forward(Q), EM)
    rows = list(spec.rows)
    random.Random(1).shuffle(rows)
    shuffled = LinearProgramSpec(tuple(rows) + tuple(rows[:3]), spec.assumptions)
    f = _functional(7)
    for d in ("min", "max"):
        assert solve(shuffled, f, d).value == solve(spec, f, d).value


def test_solver_reuses_phase_one():
    s = Solver(build_lp(P_STAR, EM))
    first = s.solve(event_functional(Event(2)), Direction.MIN).value
    s.solve(event_functional(Event(13)), Direction.MAX)
    assert s.solve(event_functional(Event(2)), Direction.MIN).value == first == F(1, 10)


def test_negative_rhs_rows():
    # a row with a negative right-hand side exercises the sign flip in phase 1
    spec = build_lp(P_STAR, E).with_row(tuple(-c for c in event_functional(Event(1)).coefficients), F(-1, 4))
    rep = solve(spec, event_functional(Event(2)), "max")
    assert rep.verify(spec, event_functional(Event(2)))
    assert rep.witness.event_probability(Event(1)) == F(1, 4)
