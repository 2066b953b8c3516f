"""Reports built on the bounds: consistency, identifying content, witnesses, sampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .closed_form import (
    BoundsTable,
    ConsistencyViolated,
    consistency_margins,
    triple_base_sum,
    triple_extra_term,
)
from .constraints import build_lp, event_functional
from .lp import Direction, InfeasibilityCertificate, Solver
from .model import (
    ALL_EVENTS,
    DEFIERS,
    RESPONSE_TYPES,
    AssumptionSet,
    DataDistribution,
    Event,
    Interval,
    MassFunction,
    push_forward,
)


@dataclass(frozen=True)
class ConsistencyReport:
    margins: tuple[Fraction, ...]
    em_consistent: bool
    e_feasible: bool
    two_sided_noncompliance: bool
    e_certificate: InfeasibilityCertificate | None = None

    @property
    def exit_code(self) -> int:
        if self.em_consistent:
            return 0
        return 2 if self.e_feasible else 3

    def to_json(self) -> dict:
        labels = ("P01|1-P01|0", "P00|0-P00|1", "P11|1-P11|0", "P10|0-P10|1")
        out = {
            "margins": {k: str(v) for k, v in zip(labels, self.margins)},
            "em_consistent": self.em_consistent,
            "e_feasible": self.e_feasible,
            "two_sided_noncompliance": self.two_sided_noncompliance,
        }
        if self.e_certificate is not None:
            out["e_infeasibility_certificate"] = {
                "multipliers": [str(v) for v in self.e_certificate.multipliers],
                "residual": str(self.e_certificate.residual),
            }
        return out


def two_sided_noncompliance(P: DataDistribution) -> bool:
    """``Prob{D=1|Z=0} > 0`` and ``Prob{D=0|Z=1} > 0``."""
    return P.treatment_rate(0) > 0 and 1 - P.treatment_rate(1) > 0


def consistency_report(P: DataDistribution) -> ConsistencyReport:
    margins = consistency_margins(P)
    solver = Solver(build_lp(P, AssumptionSet.E))
    return ConsistencyReport(
        margins=margins,
        em_consistent=all(m >= 0 for m in margins),
        e_feasible=solver.feasible,
        two_sided_noncompliance=two_sided_noncompliance(P),
        e_certificate=solver.certificate,
    )


@dataclass(frozen=True)
class PairCheck:
    """Both sides of the content condition for one ``(i, j)``."""

    i: int
    j: int
    min_term: Fraction  # min{P_{i,0|1}, P_{j,1|0}}, must be > 0
    base_sum: Fraction  # P_{i,0|0}+P_{1-i,0|1}+P_{1-j,1|0}+P_{j,1|1}, must be < 1

    @property
    def holds(self) -> bool:
        return self.min_term > 0 and self.base_sum < 1

    @property
    def triple(self) -> Event:
        i, j = self.i, self.j
        return Event.of([(i, j), (i, 1 - j), (1 - i, j)])

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "min_term": str(self.min_term),
            "base_sum": str(self.base_sum),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class ContentReport:
    verdict: bool
    pairs: tuple[PairCheck, ...]
    two_sided_noncompliance: bool

    @property
    def witnesses(self) -> list[PairCheck]:
        return [p for p in self.pairs if p.holds]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "two_sided_noncompliance": self.two_sided_noncompliance,
            "witnesses": [p.to_json() for p in self.witnesses],
            "pairs": [p.to_json() for p in self.pairs],
        }


def identifying_content(P: DataDistribution) -> ContentReport:
    """Decide exactly whether monotonicity shrinks the identified set.

    Refuses data that violate the consistency inequalities; report those with
    :func:`consistency_report` instead.
    """
    if any(m < 0 for m in consistency_margins(P)):
        raise ConsistencyViolated("identifying content is only defined for EM-consistent data")
    pairs = tuple(
        PairCheck(i, j, triple_extra_term(P, i, j), triple_base_sum(P, i, j))
        for i in (0, 1)
        for j in (0, 1)
    )
    return ContentReport(
        verdict=any(p.holds for p in pairs),
        pairs=pairs,
        two_sided_noncompliance=two_sided_noncompliance(P),
    )


def lp_intervals(P: DataDistribution, assumptions: AssumptionSet) -> dict[Event, Interval]:
    """Sharp intervals for all 16 events by linear programming alone."""
    solver = Solver(build_lp(P, assumptions))
    out = {}
    for e in ALL_EVENTS:
        f = event_functional(e)
        lo = solver.solve(f, Direction.MIN).value
        hi = solver.solve(f, Direction.MAX).value
        out[e] = Interval(lo, hi)
    return out


def lp_bounds_table(P: DataDistribution) -> BoundsTable:
    intervals = {}
    for a in AssumptionSet:
        for e, iv in lp_intervals(P, a).items():
            intervals[e, a] = iv
    return BoundsTable.from_intervals(intervals)


def compare_assumption_sets(P: DataDistribution) -> BoundsTable:
    """Full comparison table computed by LP, independently of the closed forms."""
    if any(m < 0 for m in consistency_margins(P)):
        raise ConsistencyViolated("the EM model is empty for these data")
    return lp_bounds_table(P)


class TargetOutsideInterval(ValueError):
    pass


def sharpness_witness(
    P: DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
    t: Fraction,
) -> MassFunction:
    """A feasible mass function reproducing ``P`` whose mass on ``event`` is exactly ``t``."""
    assumptions = AssumptionSet.parse(assumptions)
    spec = build_lp(P, assumptions)
    base = Solver(spec)
    if not base.feasible:
        raise ConsistencyViolated(f"no mass function reproduces the data under {assumptions.value}")
    f = event_functional(event)
    low = base.solve(f, Direction.MIN)
    high = base.solve(f, Direction.MAX)
    t = Fraction(t)
    if not low.value <= t <= high.value:
        raise TargetOutsideInterval(f"{t} is outside the identified interval [{low.value}, {high.value}] for {event}")
    # the feasible set is convex, so mixing the two extreme witnesses hits any interior value
    if high.value == low.value:
        Q = low.witness
    else:
        lam = (t - low.value) / (high.value - low.value)
        Q = MassFunction(tuple((1 - lam) * a + lam * b for a, b in zip(low.witness.q, high.witness.q)))
    assert push_forward(Q) == P and f(Q) == t
    return Q


# --- sampling ------------------------------------------------------------------


def _composition(rng: np.random.Generator, total: int, parts: int) -> list[int]:
    """Uniform weak composition of ``total`` into ``parts`` (stars and bars)."""
    bars = np.sort(rng.choice(total + parts - 1, size=parts - 1, replace=False))
    edges = [-1, *(int(b) for b in bars), total + parts - 1]
    return [edges[k + 1] - edges[k] - 1 for k in range(parts)]


def sample_consistent_P(
    seed: int,
    denominator: int,
    cls: AssumptionSet = AssumptionSet.EM,
) -> tuple[DataDistribution, MassFunction]:
    """Deterministic random ``(P, Q)`` with every mass a multiple of ``1/denominator``.

    Under EM the defier types get no mass, so ``P`` satisfies the
    consistency inequalities by construction. Compositions are uniform on
    the lattice simplex, which is adequate for property testing; small
    denominators are what produce zero cells and ties.
    """
    if denominator < 1:
        raise ValueError("denominator must be positive")
    cls = AssumptionSet.parse(cls)
    types = [w for w in RESPONSE_TYPES if not (cls is AssumptionSet.EM and w in DEFIERS)]
    rng = np.random.default_rng(np.random.SeedSequence([seed, denominator, cls is AssumptionSet.EM]))
    counts = _composition(rng, denominator, len(types))
    Q = MassFunction.from_mapping({w: Fraction(c, denominator) for w, c in zip(types, counts)})
    return push_forward(Q), Q


def sample_stream(
    seed: int,
    count: int,
    max_denominator: int = 1000,
    cls: AssumptionSet = AssumptionSet.EM,
):
    """``count`` independent samples; denominators mix small values (ties, zero cells) with large ones."""
    root = np.random.SeedSequence(seed)
    for child in root.spawn(count):
        rng = np.random.default_rng(child)
        if rng.random() < 0.5:
            den = int(rng.integers(1, min(12, max_denominator) + 1))
        else:
            den = int(rng.integers(1, max_denominator + 1))
        sub_seed = int(child.generate_state(1)[0])
        yield sample_consistent_P(sub_seed, den, cls)
