"""Acceptance criteria, all checked with exact rational arithmetic (zero tolerance).

Each test records a one-line verdict in ``RESULTS``; ``conftest.py`` prints
them at the end of the pytest run, and running this file directly prints
them as well.
"""

import json
import time
from fractions import Fraction as F
from functools import cache

import pytest

from monobounds.analysis import (
    TargetOutsideInterval,
    consistency_report,
    identifying_content,
    sample_stream,
    sharpness_witness,
)
from monobounds.cli import main
from monobounds.closed_form import bounds_table
from monobounds.constraints import ate_functional, build_lp, event_functional, marginal_functional
from monobounds.lp import Direction, Solver
from monobounds.model import (
    ALL_EVENTS,
    SINGLETONS,
    AssumptionSet,
    DataDistribution,
    Event,
    Interval,
    MassFunction,
    complement,
    parse_data_distribution,
    push_forward,
)
from monobounds.polyhedra import NotInImage, dual_optimum, enumerate_dual_vertices, image_membership

pytestmark = pytest.mark.acceptance

E, EM = AssumptionSet.E, AssumptionSet.EM
SEED = 20261017
N_SAMPLES = 1000
N_HEAVY = 100  # sharpness and duality sweeps
MAX_DENOMINATOR = 1000

P_STAR = DataDistribution(tuple(map(F, ("1/2", "1/5", "1/10", "1/5", "3/10", "1/10", "1/5", "2/5"))))
P_PC = DataDistribution(tuple(map(F, ("1/2", "1/2", 0, 0, 0, 0, "1/2", "1/2"))))
P_DIAMOND = DataDistribution(tuple(map(F, ("2/5", "3/10", "1/10", "1/5", "1/5", "1/10", "3/10", "2/5"))))
P_BAD = DataDistribution(tuple(map(F, ("3/5", 0, 0, "2/5", 0, "3/5", "2/5", 0))))

SCALARS = {
    "Prob{Y0=1}": marginal_functional(0),
    "Prob{Y1=1}": marginal_functional(1),
    "ATE": ate_functional(),
}

RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(n, name, ok, detail):
    RESULTS[n] = (name, ok, detail)
    assert ok, f"criterion {n} ({name}) failed: {detail}"


class LpPass:
    """Every LP optimum needed for one distribution, by the simplex engine alone."""

    def __init__(self, P):
        self.intervals = {}
        self.scalars = {}
        for a in AssumptionSet:
            solver = Solver(build_lp(P, a))
            for e in ALL_EVENTS:
                f = event_functional(e)
                self.intervals[e, a] = Interval(
                    solver.solve(f, Direction.MIN).value, solver.solve(f, Direction.MAX).value
                )
            for name, f in SCALARS.items():
                self.scalars[name, a] = (solver.solve(f, Direction.MIN).value, solver.solve(f, Direction.MAX).value)

    def strict(self):
        return any(self.intervals[e, EM] != self.intervals[e, E] for e in ALL_EVENTS)


@cache
def pool():
    samples = list(sample_stream(SEED, N_SAMPLES, MAX_DENOMINATOR, EM))
    return [(P, Q, LpPass(P)) for P, Q in samples]


# --- 1 ---------------------------------------------------------------------------


def test_1_closed_form_equals_lp():
    mismatches = 0
    dens = set()
    for P, Q, lp in pool():
        dens.add(max(v.denominator for v in Q.q))
        cf = bounds_table(P)
        for e in ALL_EVENTS:
            for a in AssumptionSet:
                mismatches += cf[e, a] != lp.intervals[e, a]
    checked = len(pool()) * 64
    ok = mismatches == 0 and len(pool()) >= 1000 and max(dens) <= MAX_DENOMINATOR
    record(1, "closed form == LP", ok, f"{len(pool())} samples, {checked} endpoints, {mismatches} mismatches")


# --- 2 ---------------------------------------------------------------------------


def test_2_content_verdict_iff_lp_strictness():
    disagreements = 0
    positives = 0
    for P, _, lp in pool():
        verdict = identifying_content(P).verdict
        positives += verdict
        disagreements += verdict != lp.strict()
    anchors = {}
    for name, P in (("P_star", P_STAR), ("P_pc", P_PC), ("P_diamond", P_DIAMOND)):
        rep = identifying_content(P)
        anchors[name] = (rep.verdict, LpPass(P).strict(), [(w.i, w.j) for w in rep.witnesses])
    ok = (
        disagreements == 0
        and anchors["P_star"] == (True, True, [(1, 0)])
        and anchors["P_pc"][:2] == (False, False)
        and anchors["P_diamond"][:2] == (False, False)
        and identifying_content(P_DIAMOND).two_sided_noncompliance
    )
    record(
        2,
        "content verdict <=> LP strictness",
        ok,
        f"{len(pool())} samples ({positives} with content), {disagreements} disagreements; anchors {anchors}",
    )


# --- 3 ---------------------------------------------------------------------------


def test_3_p_star_contrast():
    lp = LpPass(P_STAR)
    benefit = Event.of([(0, 1)])
    lo_em, lo_e = lp.intervals[benefit, EM].lo, lp.intervals[benefit, E].lo
    upper = [e for e in ALL_EVENTS if lp.intervals[e, EM].hi != lp.intervals[e, E].hi]
    lower = [e for e in ALL_EVENTS if lp.intervals[e, EM].lo != lp.intervals[e, E].lo]
    table = bounds_table(P_STAR)
    ok = (
        lo_em == F(1, 10)
        and lo_e == 0
        and len(upper) == 1
        and len(upper[0].members) == 3
        and lower == [benefit]
        and set(table.strict_upper) == set(upper)
        and set(table.strict_lower) == set(lower)
    )
    record(3, "P_star benefit bound 1/10 vs 0", ok, f"L_EM={lo_em}, L_E={lo_e}, strict upper {[str(e) for e in upper]}, strict lower {[str(e) for e in lower]}")


# --- 4 ---------------------------------------------------------------------------


def test_4_marginals_have_no_content():
    diffs = []
    for k, (_, _, lp) in enumerate(pool()):
        for name in SCALARS:
            if lp.scalars[name, E] != lp.scalars[name, EM]:
                diffs.append((k, name))
    record(4, "marginal and ATE bounds equal under E and EM", not diffs, f"{len(pool())} samples x 3 parameters, {len(diffs)} differences")


# --- 5 ---------------------------------------------------------------------------


def _inside_all(lp, a, targets):
    return all(sum(targets[s] for s in SINGLETONS if s.issubset(e)) in lp.intervals[e, a] for e in ALL_EVENTS)


def _member(P, a, targets):
    try:
        image_membership(P, a, targets)
        return True
    except NotInImage:
        return False


def test_5_sharpness_and_image_membership():
    bad = []
    witnesses = 0
    membership_checks = 0
    for k, (P, _, lp) in enumerate(pool()[:N_HEAVY]):
        for a in AssumptionSet:
            spec = build_lp(P, a)
            for e in ALL_EVENTS:
                iv = lp.intervals[e, a]
                for t in (iv.lo, iv.midpoint, iv.hi):
                    W = sharpness_witness(P, e, a, t)
                    witnesses += 1
                    if not (push_forward(W) == P and spec.is_satisfied_by(W) and W.event_probability(e) == t):
                        bad.append((k, a.value, str(e), str(t), "witness"))
                    targets = {s: W.event_probability(s) for s in SINGLETONS}
                    membership_checks += 1
                    if not (_member(P, a, targets) and _inside_all(lp, a, targets)):
                        bad.append((k, a.value, str(e), str(t), "membership of witness"))
                if iv.lo > 0:
                    try:
                        sharpness_witness(P, e, a, iv.lo / 2)
                        bad.append((k, a.value, str(e), "below lo accepted"))
                    except TargetOutsideInterval:
                        pass
            # negative instances: push one singleton below its lower bound
            for s in SINGLETONS:
                lo = lp.intervals[s, a].lo
                if lo == 0:
                    continue
                W = sharpness_witness(P, s, a, lo)
                targets = {c: W.event_probability(c) for c in SINGLETONS}
                other = next(c for c in SINGLETONS if c != s)
                targets[s] -= lo / 2
                targets[other] += lo / 2
                membership_checks += 1
                if _member(P, a, targets) or _inside_all(lp, a, targets):
                    bad.append((k, a.value, str(s), "membership of perturbed targets"))
    record(
        5,
        "sharpness witnesses and image membership",
        not bad,
        f"{witnesses} witnesses, {membership_checks} membership checks, {len(bad)} failures {bad[:3]}",
    )


# --- 6 ---------------------------------------------------------------------------


def test_6_strong_duality():
    gaps = []
    for k, (P, _, lp) in enumerate(pool()[:N_HEAVY]):
        for a in AssumptionSet:
            spec = build_lp(P, a)
            for e in ALL_EVENTS:
                f = event_functional(e)
                for d, primal in ((Direction.MIN, lp.intervals[e, a].lo), (Direction.MAX, lp.intervals[e, a].hi)):
                    if dual_optimum(enumerate_dual_vertices(spec, f, d), d) != primal:
                        gaps.append((k, a.value, str(e), d.value))
    checked = N_HEAVY * 2 * 16 * 2
    record(6, "dual vertex optimum == primal optimum", not gaps, f"{checked} programs, {len(gaps)} gaps")


# --- 7 ---------------------------------------------------------------------------


def _direct_margins(P):
    return (
        P[0, 1, 1] - P[0, 1, 0],
        P[0, 0, 0] - P[0, 0, 1],
        P[1, 1, 1] - P[1, 1, 0],
        P[1, 0, 0] - P[1, 0, 1],
    )


def test_7_misspecification_triage(tmp_path, capsys):
    defier = push_forward(MassFunction.point_mass((0, 1, 1, 0)))
    codes = {}
    for name, P in (("P_bad", P_BAD), ("defier", defier)):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(P.to_json()))
        codes[name] = main(["check", str(path)])
    capsys.readouterr()
    reports = [consistency_report(P) for P in (P_BAD, defier)]
    margins_ok = all(consistency_report(P).margins == _direct_margins(P) for P in (P_BAD, defier, P_STAR))
    margins_ok &= all(consistency_report(P).margins == _direct_margins(P) for P, _, _ in pool())
    ok = (
        codes == {"P_bad": 3, "defier": 2}
        and not reports[0].e_feasible
        and reports[1].e_feasible
        and not reports[1].em_consistent
        and margins_ok
    )
    record(7, "misspecification triage", ok, f"exit codes {codes}, margins match direct subtraction: {margins_ok}")


# --- 8 ---------------------------------------------------------------------------


def test_8_structural_invariants():
    violations = []
    for k, (P, Q, lp) in enumerate(pool()):
        iv = lp.intervals
        for a in AssumptionSet:
            for e in ALL_EVENTS:
                if iv[e, a].lo != 1 - iv[complement(e), a].hi:
                    violations.append((k, "complement", str(e)))
                for b in ALL_EVENTS:
                    if e.issubset(b) and not (iv[e, a].hi <= iv[b, a].hi and iv[e, a].lo <= iv[b, a].lo):
                        violations.append((k, "monotone", str(e), str(b)))
                    if e.mask & b.mask == 0:
                        u = iv[e | b, a]
                        if not (u.hi <= iv[e, a].hi + iv[b, a].hi and u.lo >= iv[e, a].lo + iv[b, a].lo):
                            violations.append((k, "subadditive", str(e), str(b)))
        for e in ALL_EVENTS:
            if not (iv[e, E].lo <= iv[e, EM].lo and iv[e, EM].hi <= iv[e, E].hi):
                violations.append((k, "nesting", str(e)))
        if push_forward(Q) != P:
            violations.append((k, "push-forward"))
        if parse_data_distribution(P.to_json()) != P or MassFunction.from_json(Q.to_json()) != Q:
            violations.append((k, "serialisation round trip"))
    record(8, "structural invariants", not violations, f"{len(pool())} samples, {len(violations)} violations {violations[:3]}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    class _NoCapture:
        def readouterr(self):
            return None

    start = time.time()
    with tempfile.TemporaryDirectory() as tmp:
        checks = [
            test_1_closed_form_equals_lp,
            test_2_content_verdict_iff_lp_strictness,
            test_3_p_star_contrast,
            test_4_marginals_have_no_content,
            test_5_sharpness_and_image_membership,
            test_6_strong_duality,
            lambda: test_7_misspecification_triage(Path(tmp), _NoCapture()),
            test_8_structural_invariants,
        ]
        for check in checks:
            try:
                check()
            except AssertionError:
                pass
    for n in sorted(RESULTS):
        name, ok, detail = RESULTS[n]
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}  ({detail})")
    print(f"total {time.time() - start:.1f}s")
