"""Exact Chern-character bookkeeping on a polarised threefold.

Every class is reduced to the four numbers ``(ch0, ch1.H^2, ch2.H, ch3)``
which are the only data the tilt slope, the projection to the (b, w)-plane
and the H-discriminant ever see. All arithmetic is on :class:`Fraction`.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

from .surd import Surd, surd_compare

__all__ = [
    "INF", "SlopeValue", "Surd", "surd_compare",
    "BgRegion", "Polarization", "LatticeSpec", "DEFAULT_LATTICE", "INTEGRAL_CH2_LATTICE",
    "ChernData", "StabilityPoint", "ExtendedPoint",
    "parse_rational", "format_rational", "parse_chern", "chern_to_json", "chern_from_json",
    "validate_lattice", "twist", "mu_h", "nu", "nu_unscaled", "projection",
    "discriminant", "discriminant_pairing",
]

Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal and exponent forms are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected a 'p/q' string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text.replace("−", "-"))
    if m is None:
        raise ValueError(f"not a rational in p/q form: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Number) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@total_ordering
class _PositiveInfinity:
    """The slope value of a class whose slope denominator vanishes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "+inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("tiltwalls.INF")

    def __lt__(self, other) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return True
        if other is self:
            return False
        return NotImplemented

    def __reduce__(self):
        return (_PositiveInfinity, ())


INF = _PositiveInfinity()
SlopeValue = Union[Fraction, _PositiveInfinity]


class BgRegion(enum.Enum):
    """Where the strong Bogomolov-Gieseker inequality is known to hold."""

    EVERYWHERE = "Everywhere"
    LI_QUINTIC = "LiQuintic"
    NONE = "None"


@dataclass(frozen=True)
class Polarization:
    h3: Fraction
    bg_region: BgRegion = BgRegion.EVERYWHERE

    def __post_init__(self):
        object.__setattr__(self, "h3", Fraction(self.h3))
        if self.h3 <= 0:
            raise ValueError("H^3 must be positive")


@dataclass(frozen=True)
class LatticeSpec:
    """``ch_i`` must lie in ``(1/d_i) Z``."""

    d0: int = 1
    d1: int = 1
    d2: int = 2
    d3: int = 6

    def __post_init__(self):
        for d in self.denominators:
            if not isinstance(d, int) or d < 1:
                raise ValueError(f"lattice denominators must be positive integers, got {d!r}")

    @property
    def denominators(self) -> tuple[int, int, int, int]:
        return (self.d0, self.d1, self.d2, self.d3)


DEFAULT_LATTICE = LatticeSpec(1, 1, 2, 6)
# destabilising subobjects in the first-wall analysis carry ch2.H in Z
INTEGRAL_CH2_LATTICE = LatticeSpec(1, 1, 1, 6)


@dataclass(frozen=True)
class ChernData:
    """Reduced Chern character. ``ch3=None`` marks a truncation (ch3 unknown)."""

    ch0: Fraction
    ch1h2: Fraction
    ch2h: Fraction
    ch3: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "ch0", Fraction(self.ch0))
        object.__setattr__(self, "ch1h2", Fraction(self.ch1h2))
        object.__setattr__(self, "ch2h", Fraction(self.ch2h))
        if self.ch3 is not None:
            object.__setattr__(self, "ch3", Fraction(self.ch3))

    @property
    def truncation(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.ch0, self.ch1h2, self.ch2h)

    def truncated(self) -> ChernData:
        return ChernData(self.ch0, self.ch1h2, self.ch2h)

    def __add__(self, other: ChernData) -> ChernData:
        ch3 = None if self.ch3 is None or other.ch3 is None else self.ch3 + other.ch3
        return ChernData(self.ch0 + other.ch0, self.ch1h2 + other.ch1h2,
                         self.ch2h + other.ch2h, ch3)

    def __neg__(self) -> ChernData:
        return ChernData(-self.ch0, -self.ch1h2, -self.ch2h,
                         None if self.ch3 is None else -self.ch3)

    def __sub__(self, other: ChernData) -> ChernData:
        return self + (-other)

    def __str__(self) -> str:
        parts = [format_rational(x) for x in self.truncation]
        parts.append("?" if self.ch3 is None else format_rational(self.ch3))
        return "(" + ", ".join(parts) + ")"


def parse_chern(text: str) -> ChernData:
    """Parse ``"ch0,ch1,ch2[,ch3]"`` with every entry in p/q form."""
    fields = [f for f in text.split(",")]
    if len(fields) not in (3, 4) or any(not f.strip() for f in fields):
        raise ValueError(f"expected 3 or 4 comma-separated rationals, got {text!r}")
    values = [parse_rational(f) for f in fields]
    return ChernData(*values)


def chern_to_json(ch: ChernData) -> list[str | None]:
    out: list[str | None] = [format_rational(x) for x in ch.truncation]
    out.append(None if ch.ch3 is None else format_rational(ch.ch3))
    return out


def chern_from_json(data: Iterable) -> ChernData:
    values = list(data)
    if len(values) == 3:
        values.append(None)
    if len(values) != 4:
        raise ValueError("Chern data must have four entries")
    ch3 = None if values[3] is None else parse_rational(values[3])
    return ChernData(*(parse_rational(v) for v in values[:3]), ch3)


@dataclass(frozen=True)
class StabilityPoint:
    b: Fraction
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "w", Fraction(self.w))
        if not self.w > self.b * self.b / 2:
            raise ValueError(f"({self.b}, {self.w}) is not in U: need w > b^2/2")


@dataclass(frozen=True)
class ExtendedPoint:
    """A finite point of the plane, or a point at infinity given by a direction.

    Directions are stored primitive up to positive scaling, so equal points
    compare equal.
    """

    x: Fraction
    y: Fraction
    at_infinity: bool = False

    @classmethod
    def direction(cls, u: Number, v: Number) -> ExtendedPoint:
        u, v = Fraction(u), Fraction(v)
        if u == 0 and v == 0:
            raise ValueError("zero direction")
        scale = abs(u) if u else abs(v)
        return cls(u / scale, v / scale, True)


def validate_lattice(ch: ChernData, spec: LatticeSpec = DEFAULT_LATTICE) -> bool:
    """True iff each known component lies in its declared lattice."""
    values = list(ch.truncation) + ([] if ch.ch3 is None else [ch.ch3])
    return all((x * d).denominator == 1 for x, d in zip(values, spec.denominators))


def twist(ch: ChernData, b: Number, h3: Number) -> ChernData:
    """``ch * exp(-bH)`` in reduced form."""
    b, h3 = Fraction(b), Fraction(h3)
    c0, c1, c2, c3 = ch.ch0, ch.ch1h2, ch.ch2h, ch.ch3
    t1 = c1 - b * c0 * h3
    t2 = c2 - b * c1 + b * b / 2 * c0 * h3
    t3 = None
    if c3 is not None:
        t3 = c3 - b * c2 + b * b / 2 * c1 - b ** 3 / 6 * c0 * h3
    return ChernData(c0, t1, t2, t3)


def mu_h(ch: ChernData, h3: Number) -> SlopeValue:
    if ch.ch0 == 0:
        return INF
    return ch.ch1h2 / (ch.ch0 * Fraction(h3))


def nu(ch: ChernData, pt: StabilityPoint, h3: Number) -> SlopeValue:
    """Rescaled tilt slope: linear denominator in b, linear numerator in w."""
    h3 = Fraction(h3)
    den = ch.ch1h2 - pt.b * ch.ch0 * h3
    if den == 0:
        return INF
    return (ch.ch2h - pt.w * ch.ch0 * h3) / den


def nu_unscaled(ch: ChernData, b: Number, w: Number, h3: Number) -> SlopeValue:
    """The unrescaled slope ``N_{b,w}``; w here is the scale parameter, w != 0."""
    b, w, h3 = Fraction(b), Fraction(w), Fraction(h3)
    if w == 0:
        raise ValueError("w must be nonzero")
    tw = twist(ch, b, h3)
    den = w * w * tw.ch1h2
    if den == 0:
        return INF
    return (w * tw.ch2h - w ** 3 / 6 * ch.ch0 * h3) / den


def projection(ch: ChernData, h3: Number) -> ExtendedPoint:
    h3 = Fraction(h3)
    if ch.ch0 == 0 and ch.ch1h2 == 0 and ch.ch2h == 0:
        raise ValueError("degenerate class")
    if ch.ch0 != 0:
        return ExtendedPoint(ch.ch1h2 / (ch.ch0 * h3), ch.ch2h / (ch.ch0 * h3))
    return ExtendedPoint.direction(ch.ch1h2, ch.ch2h)


def discriminant(ch: ChernData, h3: Number) -> Fraction:
    h3 = Fraction(h3)
    return ch.ch1h2 ** 2 - 2 * (ch.ch0 * h3) * ch.ch2h


def discriminant_pairing(a: ChernData, b: ChernData, h3: Number) -> Fraction:
    """Symmetric bilinear form with ``discriminant(x) == pairing(x, x)``."""
    h3 = Fraction(h3)
    return a.ch1h2 * b.ch1h2 - h3 * (a.ch0 * b.ch2h + b.ch0 * a.ch2h)
