"""Linear descriptions of the feasible mass functions and of the target functionals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .model import (
    DEFIERS,
    OBS_CELLS,
    RESPONSE_TYPES,
    AssumptionSet,
    DataDistribution,
    Event,
    MassFunction,
    response_types_for_cell,
    response_types_for_event,
)

NVARS = 16


@dataclass(frozen=True)
class LinearFunctional:
    """``Q -> sum_w c[w] Q(w)`` with ``c`` in canonical response-type order."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) != NVARS:
            raise ValueError("a functional has one coefficient per response type")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def __call__(self, Q: MassFunction | Sequence[Fraction]) -> Fraction:
        q = Q.q if isinstance(Q, MassFunction) else Q
        return sum((c * v for c, v in zip(self.coefficients, q) if c), Fraction(0))

    def __add__(self, other: LinearFunctional) -> LinearFunctional:
        return LinearFunctional(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: LinearFunctional) -> LinearFunctional:
        return LinearFunctional(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> LinearFunctional:
        return LinearFunctional(tuple(-a for a in self.coefficients))

    @classmethod
    def zero(cls) -> LinearFunctional:
        return cls((Fraction(0),) * NVARS)


def _indicator(types) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(w in types)) for w in RESPONSE_TYPES)


@lru_cache(maxsize=None)
def _cell_row(y: int, d: int, z: int) -> tuple[Fraction, ...]:
    return _indicator(response_types_for_cell(y, d, z))


@dataclass(frozen=True)
class EqualityRow:
    coefficients: tuple[Fraction, ...]
    rhs: Fraction
    label: str = ""


@dataclass(frozen=True)
class LinearProgramSpec:
    """Equality rows over the 16 masses; nonnegativity is implicit.

    The sum-to-one row bounds every mass by 1, so no explicit upper-bound
    rows are carried.
    """

    rows: tuple[EqualityRow, ...]
    assumptions: AssumptionSet | None = None

    @property
    def equality_rows(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        return [(r.coefficients, r.rhs) for r in self.rows]

    @property
    def nvars(self) -> int:
        return NVARS

    def with_row(self, coefficients: Sequence[Fraction], rhs: Fraction, label: str = "") -> LinearProgramSpec:
        row = EqualityRow(tuple(Fraction(c) for c in coefficients), Fraction(rhs), label)
        return LinearProgramSpec(self.rows + (row,), self.assumptions)

    def is_satisfied_by(self, Q: MassFunction | Sequence[Fraction]) -> bool:
        q = Q.q if isinstance(Q, MassFunction) else tuple(Q)
        if any(v < 0 for v in q):
            return False
        return all(sum(a * v for a, v in zip(r.coefficients, q)) == r.rhs for r in self.rows)


def simplex_spec() -> LinearProgramSpec:
    """Only the probability-simplex restrictions, no data."""
    return LinearProgramSpec((EqualityRow((Fraction(1),) * NVARS, Fraction(1), "sum"),))


def build_lp(P: DataDistribution, assumptions: AssumptionSet) -> LinearProgramSpec:
    """Rows for the data restrictions, the simplex and (for EM) zero defier mass.

    The eight data rows are kept as stated even though two of them are
    implied by the others together with the sum-to-one row.
    """
    assumptions = AssumptionSet.parse(assumptions)
    rows = []
    for y, d, z in OBS_CELLS:
        rows.append(EqualityRow(_cell_row(y, d, z), P[y, d, z], f"P{y}{d}|{z}"))
    rows.append(EqualityRow((Fraction(1),) * NVARS, Fraction(1), "sum"))
    if assumptions is AssumptionSet.EM:
        rows.append(EqualityRow(_indicator(DEFIERS), Fraction(0), "defiers"))
    return LinearProgramSpec(tuple(rows), assumptions)


@lru_cache(maxsize=None)
def event_functional(event: Event) -> LinearFunctional:
    return LinearFunctional(_indicator(response_types_for_event(event)))


def marginal_functional(d: int) -> LinearFunctional:
    """``Prob{Y_d = 1}``."""
    if d not in (0, 1):
        raise ValueError("d must be 0 or 1")
    return LinearFunctional(_indicator({w for w in RESPONSE_TYPES if w.outcome(d) == 1}))


def ate_functional() -> LinearFunctional:
    """``E[Y1 - Y0]``."""
    return marginal_functional(1) - marginal_functional(0)
