"""Exact two-phase simplex over the rationals.

Rows are stored as integer vectors with an implicit positive scale, so
pivoting is fraction-free: each update is ``a*row - row[j]*pivot_row``
followed by division by the row gcd. Bland's rule picks the entering and
leaving variables, which guarantees termination on the degenerate programs
that zero cells produce.

Every optimum carries a dual vector that is checked against the primal by
exact inner products before it is returned; every infeasibility verdict
carries a Farkas vector ``y`` with ``A'y <= 0`` and ``b'y > 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .constraints import LinearFunctional, LinearProgramSpec
from .model import MassFunction


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"

    @classmethod
    def parse(cls, d: str | Direction) -> Direction:
        return d if isinstance(d, cls) else cls(d.lower())


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Row multipliers ``y`` with ``A'y <= 0`` and ``b'y > 0``.

    For any ``q >= 0`` the combination ``y'Aq`` is nonpositive, so it can
    never equal the positive ``residual = b'y``.
    """

    multipliers: tuple[Fraction, ...]
    residual: Fraction

    def verify(self, spec: LinearProgramSpec) -> bool:
        y = self.multipliers
        if len(y) != len(spec.rows):
            return False
        for j in range(spec.nvars):
            if sum(yi * r.coefficients[j] for yi, r in zip(y, spec.rows)) > 0:
                return False
        resid = sum(yi * r.rhs for yi, r in zip(y, spec.rows))
        return resid == self.residual and resid > 0


class Infeasible(Exception):
    def __init__(self, certificate: InfeasibilityCertificate):
        super().__init__(f"infeasible (certificate residual {certificate.residual})")
        self.certificate = certificate


@dataclass(frozen=True)
class OptimumReport:
    value: Fraction
    witness: MassFunction
    dual_certificate: tuple[Fraction, ...]
    direction: Direction

    def verify(self, spec: LinearProgramSpec, f: LinearFunctional) -> bool:
        """Exact optimality check via weak duality."""
        if not spec.is_satisfied_by(self.witness) or f(self.witness) != self.value:
            return False
        y = self.dual_certificate
        if sum(yi * r.rhs for yi, r in zip(y, spec.rows)) != self.value:
            return False
        for j, cj in enumerate(f.coefficients):
            aty = sum(yi * r.coefficients[j] for yi, r in zip(y, spec.rows))
            # max: A'y >= c bounds c'q above by b'y; min: A'y <= c bounds it below
            if self.direction is Direction.MAX and aty < cj:
                return False
            if self.direction is Direction.MIN and aty > cj:
                return False
        return True


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    """Scale a rational row to integers; returns ``(row, scale)``."""
    vals = [v if isinstance(v, Fraction) else Fraction(v) for v in (*coeffs, rhs)]
    scale = 1
    for v in vals:
        if v.denominator != 1:
            scale = lcm(scale, v.denominator)
    return [v.numerator * (scale // v.denominator) for v in vals], scale


class Solver:
    """Phase 1 runs once at construction; :meth:`solve` reuses the feasible basis.

    Reusing the basis is what makes sweeping all 32 bounds of one data
    distribution cheap.
    """

    def __init__(self, spec: LinearProgramSpec):
        self.spec = spec
        self.n = spec.nvars
        self.m = len(spec.rows)
        n, m = self.n, self.m
        self.rhs_col = n + m
        self.signs = []
        rows = []
        for i, r in enumerate(spec.rows):
            sign = -1 if r.rhs < 0 else 1
            self.signs.append(sign)
            ints, scale = _integer_row(r.coefficients, r.rhs)
            if sign < 0:
                ints = [-v for v in ints]
            art = [0] * m
            art[i] = scale  # coefficient 1 once the row is normalised
            rows.append(_reduce(ints[:n] + art + ints[n:]))
        self.rows = rows
        self.basis = [n + i for i in range(m)]
        self.certificate: InfeasibilityCertificate | None = None
        self._phase_one()

    @property
    def feasible(self) -> bool:
        return self.certificate is None

    def _pivot(self, rows, obj, basis, r, j):
        prow = rows[r]
        a = prow[j]
        for i, row in enumerate(rows):
            if i != r and row[j]:
                f = row[j]
                rows[i] = _reduce([a * x - f * p for x, p in zip(row, prow)])
        f = obj[0][j]
        if f:
            new = [a * x - f * p for x, p in zip(obj[0], prow)]
            den = obj[1] * a
            g = gcd(den, *new)
            obj[0] = [x // g for x in new]
            obj[1] = den // g
        basis[r] = j

    def _iterate(self, rows, obj, basis, allowed: int):
        """Run Bland-rule pivots on columns ``< allowed`` until optimal."""
        rc = self.rhs_col
        while True:
            o = obj[0]
            j = next((k for k in range(allowed) if o[k] < 0), None)
            if j is None:
                return
            best = None
            for i, row in enumerate(rows):
                a = row[j]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    b = rows[best]
                    lhs, rhs = row[rc] * b[j], b[rc] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                        best = i
            if best is None:
                # cannot happen: every mass is bounded by the sum-to-one row
                raise RuntimeError("unbounded program")
            self._pivot(rows, obj, basis, best, j)

    def _phase_one(self):
        n, m, rc = self.n, self.m, self.rhs_col
        rows, basis = self.rows, self.basis
        obj = [[0] * n + [1] * m + [0], 1]
        for i, row in enumerate(rows):
            a = row[n + i]
            new = [a * x - obj[1] * y for x, y in zip(obj[0], row)]
            obj[0], obj[1] = new, obj[1] * a
            g = gcd(obj[1], *obj[0])
            obj[0] = [x // g for x in obj[0]]
            obj[1] //= g
        self._iterate(rows, obj, basis, n + m)
        if obj[0][rc] != 0:
            # artificial costs are 1, so y_i = 1 - d_art_i in the sign-adjusted system
            y = tuple(
                self.signs[i] * (1 - Fraction(obj[0][n + i], obj[1])) for i in range(m)
            )
            resid = sum(yi * r.rhs for yi, r in zip(y, self.spec.rows))
            cert = InfeasibilityCertificate(y, resid)
            assert cert.verify(self.spec), "phase-1 certificate failed verification"
            self.certificate = cert
            return
        # drive zero-level artificials out of the basis where a real column allows it
        for r in range(m):
            if basis[r] >= n:
                row = rows[r]
                j = next((k for k in range(n) if row[k]), None)
                if j is None:
                    continue  # redundant row
                if row[j] < 0:
                    rows[r] = [-x for x in row]
                self._pivot(rows, [[0] * (n + m + 1), 1], basis, r, j)

    def _run(self, costs: Sequence[Fraction]):
        """Minimise ``costs . q`` from the phase-1 basis."""
        n, m, rc = self.n, self.m, self.rhs_col
        rows = [list(r) for r in self.rows]
        basis = list(self.basis)
        ints, den = _integer_row(costs, Fraction(0))
        obj = [ints[:n] + [0] * m + [0], den]
        for i, row in enumerate(rows):
            b = basis[i]
            f = obj[0][b]
            if f:
                a = row[b]
                new = [a * x - f * p for x, p in zip(obj[0], row)]
                d = obj[1] * a
                g = gcd(d, *new)
                obj[0], obj[1] = [x // g for x in new], d // g
        self._iterate(rows, obj, basis, n)
        x = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                x[b] = Fraction(rows[i][rc], rows[i][b])
        value = -Fraction(obj[0][rc], obj[1])
        y = tuple(self.signs[i] * -Fraction(obj[0][n + i], obj[1]) for i in range(m))
        return value, x, y

    def solve(self, f: LinearFunctional, direction: Direction | str = Direction.MAX) -> OptimumReport:
        if self.certificate is not None:
            raise Infeasible(self.certificate)
        direction = Direction.parse(direction)
        c = f.coefficients
        if direction is Direction.MAX:
            value, x, y = self._run([-v for v in c])
            value, y = -value, tuple(-v for v in y)
        else:
            value, x, y = self._run(c)
        return OptimumReport(value, MassFunction(tuple(x)), y, direction)

    def witness(self) -> MassFunction:
        if self.certificate is not None:
            raise Infeasible(self.certificate)
        n, rc = self.n, self.rhs_col
        x = [Fraction(0)] * n
        for i, b in enumerate(self.basis):
            if b < n:
                x[b] = Fraction(self.rows[i][rc], self.rows[i][b])
        return MassFunction(tuple(x))


def solve(
    spec: LinearProgramSpec,
    f: LinearFunctional,
    direction: Direction | str = Direction.MAX,
    *,
    check: bool = True,
) -> OptimumReport:
    """Exact optimum of ``f`` over the program's feasible polytope.

    Raises :class:`Infeasible` with a Farkas certificate when the polytope is
    empty. With ``check`` on, the returned witness and dual vector are
    re-verified by exact arithmetic.
    """
    report = Solver(spec).solve(f, direction)
    if check and not report.verify(spec, f):
        raise AssertionError("simplex produced an unverifiable optimum")
    return report


def feasibility(spec: LinearProgramSpec) -> MassFunction | InfeasibilityCertificate:
    """A feasible mass function, or the certificate proving there is none."""
    s = Solver(spec)
    if s.certificate is not None:
        return s.certificate
    return s.witness()


def is_feasible(spec: LinearProgramSpec) -> bool:
    return Solver(spec).feasible
