"""Closed-form sharp bounds on ``Prob{(Y0, Y1) in A}`` for all 16 events.

Upper bounds are given per event shape; lower bounds follow from
``L(A) = 1 - U(complement of A)``. The two assumption sets share every
formula except the one for three-cell events, where exogeneity alone adds
``min{P_{i,0|1}, P_{j,1|0}}`` inside the outer minimum.

The formulas are sharp only when the data satisfy the monotonicity
consistency inequalities (see :func:`consistency_margins`); outside that
region they are refused unless ``permissive=True``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .model import (
    ALL_EVENTS,
    AssumptionSet,
    DataDistribution,
    Event,
    Interval,
    complement,
)


class ConsistencyViolated(ValueError):
    """The data refute exogeneity plus monotonicity."""


def consistency_margins(P: DataDistribution) -> tuple[Fraction, ...]:
    """``(P_{0,1|1}-P_{0,1|0}, P_{0,0|0}-P_{0,0|1}, P_{1,1|1}-P_{1,1|0}, P_{1,0|0}-P_{1,0|1})``.

    All four are nonnegative exactly when some mass function with zero
    defier mass reproduces ``P``. Zero margins count as consistent.
    """
    out = []
    for y in (0, 1):
        out.append(P[y, 1, 1] - P[y, 1, 0])
        out.append(P[y, 0, 0] - P[y, 0, 1])
    return tuple(out)


def is_em_consistent(P: DataDistribution) -> bool:
    return all(m >= 0 for m in consistency_margins(P))


def _check(P: DataDistribution, permissive: bool):
    if is_em_consistent(P):
        return
    if not permissive:
        raise ConsistencyViolated(
            f"data violate the monotonicity consistency inequalities "
            f"(margins {', '.join(map(str, consistency_margins(P)))}); use LP bounds instead"
        )
    warnings.warn("closed-form bounds evaluated on inconsistent data carry no sharpness guarantee")


# --- event shapes -----------------------------------------------------------
# Each entry maps an event mask to (shape, parameters). Triples are keyed by
# their missing cell (1-i, 1-j).


def _mask(*cells: tuple[int, int]) -> int:
    return Event.of(cells).mask


SHAPES: dict[int, tuple[str, tuple[int, ...]]] = {0: ("empty", ()), 15: ("full", ())}
for _i in (0, 1):
    for _j in (0, 1):
        SHAPES[_mask((_i, _j))] = ("singleton", (_i, _j))
        SHAPES[_mask((_i, _j), (_i, 1 - _j), (1 - _i, _j))] = ("triple", (_i, _j))
    SHAPES[_mask((_i, 0), (_i, 1))] = ("row", (_i,))
    SHAPES[_mask((0, _i), (1, _i))] = ("column", (_i,))
    SHAPES[_mask((0, _i), (1, 1 - _i))] = ("diagonal", (_i,))
assert sorted(SHAPES) == list(range(16))


def event_shape(event: Event) -> tuple[str, tuple[int, ...]]:
    return SHAPES[event.mask]


def triple_base_sum(P: DataDistribution, i: int, j: int) -> Fraction:
    """``P_{i,0|0} + P_{1-i,0|1} + P_{1-j,1|0} + P_{j,1|1}``."""
    return P[i, 0, 0] + P[1 - i, 0, 1] + P[1 - j, 1, 0] + P[j, 1, 1]


def triple_extra_term(P: DataDistribution, i: int, j: int) -> Fraction:
    """``min{P_{i,0|1}, P_{j,1|0}}``, the slack monotonicity removes."""
    return min(P[i, 0, 1], P[j, 1, 0])


def _upper(P: DataDistribution, event: Event, assumptions: AssumptionSet) -> Fraction:
    shape, par = SHAPES[event.mask]
    if shape == "empty":
        return Fraction(0)
    if shape == "full":
        return Fraction(1)
    if shape == "singleton":
        i, j = par
        return min(P[i, 0, 0] + P[j, 1, 0], P[i, 0, 1] + P[j, 1, 1])
    if shape == "row":
        (i,) = par
        return P[i, 0, 0] + P[0, 1, 0] + P[1, 1, 0]
    if shape == "column":
        (i,) = par
        return P[i, 1, 1] + P[0, 0, 1] + P[1, 0, 1]
    if shape == "diagonal":
        (i,) = par
        return min(
            Fraction(1),
            P[0, 0, 0] + P[1, 0, 1] + P[i, 1, 0] + P[1 - i, 1, 1],
            P[0, 0, 1] + P[1, 0, 0] + P[i, 1, 1] + P[1 - i, 1, 0],
        )
    i, j = par
    total = triple_base_sum(P, i, j)
    if assumptions is AssumptionSet.E:
        total += triple_extra_term(P, i, j)
    return min(Fraction(1), total)


def upper_bound(
    P: DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
    *,
    permissive: bool = False,
) -> Fraction:
    _check(P, permissive)
    return _upper(P, event, AssumptionSet.parse(assumptions))


def lower_bound(
    P: DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
    *,
    permissive: bool = False,
) -> Fraction:
    _check(P, permissive)
    return 1 - _upper(P, complement(event), AssumptionSet.parse(assumptions))


@dataclass(frozen=True)
class BoundsTable:
    """Identified intervals for every event under both assumption sets.

    ``strict[event]`` is true when the EM interval is a proper subset of
    the E interval; ``strict_upper``/``strict_lower`` say which endpoint moved.
    """

    intervals: dict[tuple[Event, AssumptionSet], Interval]
    strict_upper: frozenset[Event] = field(default_factory=frozenset)
    strict_lower: frozenset[Event] = field(default_factory=frozenset)

    def __getitem__(self, key: tuple[Event, AssumptionSet]) -> Interval:
        event, a = key
        return self.intervals[event, AssumptionSet.parse(a)]

    def strict(self, event: Event) -> bool:
        return event in self.strict_upper or event in self.strict_lower

    @property
    def strict_events(self) -> list[Event]:
        return [e for e in ALL_EVENTS if self.strict(e)]

    @property
    def content(self) -> bool:
        """Whether the EM identified set is strictly smaller than the E one."""
        return bool(self.strict_upper or self.strict_lower)

    def to_json(self) -> list[dict]:
        return [
            {
                "event": e.to_json(),
                "E": self[e, AssumptionSet.E].to_json(),
                "EM": self[e, AssumptionSet.EM].to_json(),
                "strict": self.strict(e),
            }
            for e in ALL_EVENTS
        ]

    @classmethod
    def from_json(cls, rows: list[dict]) -> BoundsTable:
        intervals = {}
        for row in rows:
            e = Event.from_json(row["event"])
            for a in AssumptionSet:
                intervals[e, a] = Interval.from_json(row[a.value])
        return cls.from_intervals(intervals)

    @classmethod
    def from_intervals(cls, intervals: dict[tuple[Event, AssumptionSet], Interval]) -> BoundsTable:
        up, lo = set(), set()
        for e in ALL_EVENTS:
            ie, iem = intervals[e, AssumptionSet.E], intervals[e, AssumptionSet.EM]
            if iem.hi < ie.hi:
                up.add(e)
            if iem.lo > ie.lo:
                lo.add(e)
        return cls(dict(intervals), frozenset(up), frozenset(lo))

    @classmethod
    def build(cls, endpoint: Callable[[Event, AssumptionSet, str], Fraction]) -> BoundsTable:
        intervals = {
            (e, a): Interval(endpoint(e, a, "min"), endpoint(e, a, "max"))
            for e in ALL_EVENTS
            for a in AssumptionSet
        }
        return cls.from_intervals(intervals)


def bounds_table(P: DataDistribution, *, permissive: bool = False) -> BoundsTable:
    _check(P, permissive)

    def endpoint(e, a, which):
        return 1 - _upper(P, complement(e), a) if which == "min" else _upper(P, e, a)

    return BoundsTable.build(endpoint)
