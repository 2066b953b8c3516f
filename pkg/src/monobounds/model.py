"""Exact value types for the binary outcome / treatment / instrument model.

A response type ``w = (y0, y1, d0, d1)`` fixes both potential outcomes and
both potential treatment receipts of a unit. There are 16 of them, ordered
lexicographically, so ``ResponseType.index`` is ``8*y0 + 4*y1 + 2*d0 + d1``.
Observed cells are ``(y, d, z)``; an event is a subset of the four
potential-outcome pairs ``(y0, y1)`` and is stored as a 4-bit mask.

All probabilities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Rational = Fraction

BITS = (0, 1)


class ModelError(ValueError):
    """Base class for invalid model inputs."""


class MalformedNumber(ModelError):
    pass


class NegativeEntry(ModelError):
    pass


class EntryAboveOne(ModelError):
    pass


class ConditionalSumNotOne(ModelError):
    def __init__(self, z: int, total: Fraction):
        super().__init__(f"P(. | z={z}) sums to {total}, not 1")
        self.z = z
        self.total = total


class InvalidMassFunction(ModelError):
    pass


class AssumptionSet(enum.Enum):
    """Which restrictions are maintained on the response-type distribution."""

    E = "E"  # instrument exogeneity only
    EM = "EM"  # exogeneity plus instrument monotonicity

    @classmethod
    def parse(cls, text: str | AssumptionSet) -> AssumptionSet:
        if isinstance(text, cls):
            return text
        key = text.strip().upper()
        aliases = {
            "E": cls.E,
            "EXOGENEITY": cls.E,
            "EXOGENEITYONLY": cls.E,
            "EM": cls.EM,
            "EXOGENEITYPLUSMONOTONICITY": cls.EM,
        }
        try:
            return aliases[key.replace("_", "").replace("-", "")]
        except KeyError:
            raise ValueError(f"unknown assumption set {text!r}") from None


ExogeneityOnly = AssumptionSet.E
ExogeneityPlusMonotonicity = AssumptionSet.EM


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"``, an integer or a finite decimal exactly.

    Floats are rejected: ``0.1`` has no exact binary representation, and the
    content decision compares sums against 1 with strict inequality.
    """
    if isinstance(text, bool):
        raise MalformedNumber(f"not a number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedNumber(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    if re.fullmatch(r"[+-]?\d+\s*/\s*[+-]?\d+", s):
        num, den = (part.strip() for part in s.split("/"))
        if int(den) == 0:
            raise MalformedNumber(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if re.fullmatch(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?", s):
        # Fraction parses decimal strings exactly, without passing through float
        return Fraction(s)
    raise MalformedNumber(f"cannot parse {text!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True, order=True)
class OutcomeCell:
    """A pair of potential outcomes ``(y0, y1)``."""

    y0: int
    y1: int

    def __post_init__(self):
        if self.y0 not in BITS or self.y1 not in BITS:
            raise ValueError(f"outcome cell components must be bits: {self}")

    @property
    def index(self) -> int:
        return 2 * self.y0 + self.y1

    @classmethod
    def from_index(cls, k: int) -> OutcomeCell:
        return cls(k >> 1 & 1, k & 1)

    def __str__(self) -> str:
        return f"{self.y0}{self.y1}"


CELLS = tuple(OutcomeCell.from_index(k) for k in range(4))


@dataclass(frozen=True)
class Event:
    """A subset of ``{0,1}^2``; bit ``k`` of ``mask`` is cell ``CELLS[k]``."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 16:
            raise ValueError(f"event mask out of range: {self.mask}")

    @classmethod
    def of(cls, cells: Iterable[OutcomeCell | tuple[int, int]]) -> Event:
        mask = 0
        for c in cells:
            if not isinstance(c, OutcomeCell):
                c = OutcomeCell(*c)
            mask |= 1 << c.index
        return cls(mask)

    @classmethod
    def parse(cls, text: str) -> Event:
        """Parse the command-line syntax ``"01,10"``; ``""`` is the empty event."""
        text = text.strip()
        if not text or text in ("{}", "empty"):
            return cls(0)
        if text in ("full", "all"):
            return FULL
        cells = []
        for tok in text.split(","):
            tok = tok.strip()
            if len(tok) != 2 or any(ch not in "01" for ch in tok):
                raise ValueError(f"bad event cell {tok!r}; expected two bits like 01")
            cells.append((int(tok[0]), int(tok[1])))
        return cls.of(cells)

    @property
    def members(self) -> tuple[OutcomeCell, ...]:
        return tuple(c for c in CELLS if self.mask >> c.index & 1)

    def __contains__(self, cell) -> bool:
        if not isinstance(cell, OutcomeCell):
            cell = OutcomeCell(*cell)
        return bool(self.mask >> cell.index & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[OutcomeCell]:
        return iter(self.members)

    def __or__(self, other: Event) -> Event:
        return Event(self.mask | other.mask)

    def __and__(self, other: Event) -> Event:
        return Event(self.mask & other.mask)

    def issubset(self, other: Event) -> bool:
        return self.mask & ~other.mask == 0

    def to_json(self) -> list[list[int]]:
        return [[c.y0, c.y1] for c in self.members]

    @classmethod
    def from_json(cls, pairs) -> Event:
        return cls.of(tuple(p) for p in pairs)

    def __str__(self) -> str:
        return "{" + ",".join(f"({c.y0},{c.y1})" for c in self.members) + "}"


EMPTY = Event(0)
FULL = Event(15)
ALL_EVENTS = tuple(Event(m) for m in range(16))
SINGLETONS = tuple(Event(1 << k) for k in range(4))


def complement(event: Event) -> Event:
    return Event(15 ^ event.mask)


@dataclass(frozen=True, order=True)
class ResponseType:
    y0: int
    y1: int
    d0: int
    d1: int

    def __post_init__(self):
        if any(v not in BITS for v in (self.y0, self.y1, self.d0, self.d1)):
            raise ValueError(f"response type components must be bits: {self}")

    @property
    def index(self) -> int:
        return 8 * self.y0 + 4 * self.y1 + 2 * self.d0 + self.d1

    @classmethod
    def from_index(cls, k: int) -> ResponseType:
        return cls(k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1)

    @property
    def cell(self) -> OutcomeCell:
        return OutcomeCell(self.y0, self.y1)

    @property
    def is_defier(self) -> bool:
        return self.d0 == 1 and self.d1 == 0

    def treatment(self, z: int) -> int:
        return self.d1 if z else self.d0

    def outcome(self, d: int) -> int:
        return self.y1 if d else self.y0

    def observed(self, z: int) -> tuple[int, int]:
        """The ``(y, d)`` cell this type produces when the instrument is ``z``."""
        d = self.treatment(z)
        return self.outcome(d), d

    def __str__(self) -> str:
        return f"({self.y0},{self.y1},{self.d0},{self.d1})"


RESPONSE_TYPES = tuple(ResponseType.from_index(k) for k in range(16))
DEFIERS = frozenset(w for w in RESPONSE_TYPES if w.is_defier)

# Observed cells in the order used for the LP data rows and for printing.
OBS_CELLS = tuple((y, d, z) for z in BITS for d in BITS for y in BITS)


def response_types_for_cell(y: int, d: int, z: int) -> frozenset[ResponseType]:
    """Types that produce ``Y = y, D = d`` when assigned ``Z = z``."""
    return frozenset(w for w in RESPONSE_TYPES if w.observed(z) == (y, d))


def response_types_for_event(event: Event) -> frozenset[ResponseType]:
    return frozenset(w for w in RESPONSE_TYPES if w.cell in event)


def _cell_key(key) -> tuple[int, int, int]:
    y, d, z = key
    if y not in BITS or d not in BITS or z not in BITS:
        raise KeyError(key)
    return int(y), int(d), int(z)


@dataclass(frozen=True)
class DataDistribution:
    """The eight conditional probabilities ``P(Y=y, D=d | Z=z)``.

    Index with ``P[y, d, z]``. Construction validates that every entry is a
    probability and that each conditional distribution sums to one exactly.
    """

    values: tuple[Fraction, ...]  # in OBS_CELLS order

    def __post_init__(self):
        if len(self.values) != 8:
            raise ModelError("a data distribution has exactly 8 entries")
        vals = tuple(v if type(v) is Fraction else Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        for (y, d, z), v in zip(OBS_CELLS, vals):
            if v < 0:
                raise NegativeEntry(f"P_{{{y},{d}|{z}}} = {v} is negative")
            if v > 1:
                raise EntryAboveOne(f"P_{{{y},{d}|{z}}} = {v} exceeds 1")
        for z in BITS:
            total = sum(vals[4 * z : 4 * z + 4])
            if total != 1:
                raise ConditionalSumNotOne(z, total)

    @classmethod
    def from_mapping(cls, p: Mapping[tuple[int, int, int], Fraction | str | int]) -> DataDistribution:
        entries = {_cell_key(k): parse_rational(v) for k, v in p.items()}
        missing = [c for c in OBS_CELLS if c not in entries]
        if missing:
            raise ModelError(f"missing cells {missing}")
        return cls(tuple(entries[c] for c in OBS_CELLS))

    def __getitem__(self, key) -> Fraction:
        return self.values[OBS_CELLS.index(_cell_key(key))]

    def items(self):
        return zip(OBS_CELLS, self.values)

    def treatment_rate(self, z: int) -> Fraction:
        """``Prob{D = 1 | Z = z}``."""
        return self[0, 1, z] + self[1, 1, z]

    def to_json(self) -> dict:
        return {
            f"z{z}": {f"y{y}d{d}": format_rational(self[y, d, z]) for d in BITS for y in BITS}
            for z in BITS
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> DataDistribution:
        return parse_data_distribution(obj)

    def __str__(self) -> str:
        parts = []
        for z in BITS:
            cells = ", ".join(f"P{y}{d}|{z}={self[y, d, z]}" for d in BITS for y in BITS)
            parts.append(cells)
        return "; ".join(parts)


_JSON_KEY = re.compile(r"y([01])d([01])")


def parse_data_distribution(raw: Mapping) -> DataDistribution:
    """Validate the JSON object form ``{"z0": {"y0d0": "1/2", ...}, "z1": {...}}``.

    Raises MalformedNumber, NegativeEntry, EntryAboveOne or ConditionalSumNotOne.
    """
    if not isinstance(raw, Mapping):
        raise ModelError("data distribution must be a JSON object")
    entries = {}
    for zkey in ("z0", "z1"):
        block = raw.get(zkey)
        if not isinstance(block, Mapping):
            raise ModelError(f"missing object {zkey!r}")
        for key, val in block.items():
            m = _JSON_KEY.fullmatch(key)
            if not m:
                raise ModelError(f"unexpected key {key!r} in {zkey!r}")
            entries[int(m[1]), int(m[2]), int(zkey[1])] = parse_rational(val)
    extra = set(raw) - {"z0", "z1"}
    if extra:
        raise ModelError(f"unexpected keys {sorted(extra)}")
    return DataDistribution.from_mapping(entries)


@dataclass(frozen=True)
class MassFunction:
    """A probability mass function over the 16 response types."""

    q: tuple[Fraction, ...]  # indexed by ResponseType.index

    def __post_init__(self):
        if len(self.q) != 16:
            raise InvalidMassFunction("a mass function has exactly 16 entries")
        q = tuple(v if type(v) is Fraction else Fraction(v) for v in self.q)
        object.__setattr__(self, "q", q)
        if any(v < 0 or v > 1 for v in q):
            raise InvalidMassFunction("masses must lie in [0, 1]")
        if sum(q) != 1:
            raise InvalidMassFunction(f"masses sum to {sum(q)}, not 1")

    @classmethod
    def from_mapping(cls, masses: Mapping[ResponseType, Fraction]) -> MassFunction:
        q = [Fraction(0)] * 16
        for w, v in masses.items():
            q[w.index] = Fraction(v)
        return cls(tuple(q))

    @classmethod
    def point_mass(cls, w: ResponseType | tuple[int, int, int, int]) -> MassFunction:
        if not isinstance(w, ResponseType):
            w = ResponseType(*w)
        return cls.from_mapping({w: Fraction(1)})

    @classmethod
    def uniform(cls) -> MassFunction:
        return cls((Fraction(1, 16),) * 16)

    def __getitem__(self, w: ResponseType | int) -> Fraction:
        return self.q[w if isinstance(w, int) else w.index]

    @property
    def defier_mass(self) -> Fraction:
        return sum((self[w] for w in DEFIERS), Fraction(0))

    def event_probability(self, event: Event) -> Fraction:
        return sum((self[w] for w in response_types_for_event(event)), Fraction(0))

    def to_json(self) -> dict:
        return {
            f"{w.y0}{w.y1}{w.d0}{w.d1}": format_rational(self[w])
            for w in RESPONSE_TYPES
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> MassFunction:
        q = [Fraction(0)] * 16
        for key, val in obj.items():
            if len(key) != 4 or any(ch not in "01" for ch in key):
                raise InvalidMassFunction(f"bad response type key {key!r}")
            q[ResponseType(*map(int, key)).index] = parse_rational(val)
        return cls(tuple(q))


def push_forward(Q: MassFunction) -> DataDistribution:
    """The data distribution ``P_{y,d|z}`` implied by ``Q`` under exogeneity."""
    p = {}
    for y, d, z in OBS_CELLS:
        p[y, d, z] = sum((Q[w] for w in response_types_for_cell(y, d, z)), Fraction(0))
    return DataDistribution(tuple(p[c] for c in OBS_CELLS))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(f"invalid probability interval [{self.lo}, {self.hi}]")

    def __contains__(self, t) -> bool:
        return self.lo <= t <= self.hi

    def strictly_inside(self, other: Interval) -> bool:
        """Proper subset of ``other``."""
        return other.lo <= self.lo and self.hi <= other.hi and (self.lo, self.hi) != (other.lo, other.hi)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_json(cls, obj) -> Interval:
        return cls(parse_rational(obj["lo"]), parse_rational(obj["hi"]))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"
