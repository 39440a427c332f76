"""Bogomolov-Gieseker type ch3 inequalities and where they are known to hold."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional

from .lattice import ChernData, StabilityPoint, format_rational, twist

__all__ = [
    "BgLocus", "BgVerdict", "BgMode", "ParamCheck", "BgParamsReport",
    "bg_equality_locus", "bg_check", "bg_floor", "li_region", "li_threshold",
    "verify_bg_params", "bg2_special_point", "special_point_data",
]


@dataclass(frozen=True)
class BgLocus:
    """Where the inequality applies to a class.

    Either the parabola ``w = b^2 + lin*b + const`` or the vertical line
    ``b = vertical_b`` (rank zero).
    """

    lin: Optional[Fraction] = None
    const: Optional[Fraction] = None
    vertical_b: Optional[Fraction] = None

    @property
    def is_vertical(self) -> bool:
        return self.vertical_b is not None

    def contains(self, b, w) -> bool:
        b, w = Fraction(b), Fraction(w)
        if self.is_vertical:
            return b == self.vertical_b
        return w == b * b + self.lin * b + self.const

    def w_at(self, b) -> Fraction:
        if self.is_vertical:
            raise ValueError("vertical locus has no height at a given b")
        b = Fraction(b)
        return b * b + self.lin * b + self.const


def bg_equality_locus(ch: ChernData, h3) -> BgLocus:
    h3 = Fraction(h3)
    if ch.ch0 != 0:
        scale = ch.ch0 * h3
        return BgLocus(lin=-ch.ch1h2 / scale, const=ch.ch2h / scale)
    if ch.ch1h2 == 0:
        raise ValueError("degenerate class: ch0 and ch1.H^2 both vanish")
    return BgLocus(vertical_b=ch.ch2h / ch.ch1h2)


@dataclass(frozen=True)
class BgVerdict:
    applicable: bool
    holds: Optional[bool]
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        out = {"applicable": self.applicable}
        if self.applicable:
            out["holds"] = self.holds
        out["lhs"] = format_rational(self.lhs)
        out["rhs"] = format_rational(self.rhs)
        return out


def bg_check(ch: ChernData, pt: StabilityPoint, h3) -> BgVerdict:
    """``ch3^{bH} <= (w/3 - b^2/6) ch1^{bH}.H^2``, applicable on the equality locus only."""
    if ch.ch3 is None:
        raise ValueError("bg_check needs ch3")
    h3 = Fraction(h3)
    tw = twist(ch, pt.b, h3)
    lhs = tw.ch3
    rhs = (pt.w / 3 - pt.b * pt.b / 6) * tw.ch1h2
    applicable = tw.ch2h == (pt.w - pt.b * pt.b / 2) * ch.ch0 * h3
    return BgVerdict(applicable, (lhs <= rhs) if applicable else None, lhs, rhs)


def bg_floor(n: int, h3, l2) -> Fraction:
    """Lowest w on ``b = -n/2`` where the inequality holds for a degree-n pushforward."""
    if n < 1:
        raise ValueError("n must be positive")
    h3, l2 = Fraction(h3), Fraction(l2)
    if h3 <= 0:
        raise ValueError("H^3 must be positive")
    return Fraction(n * n, 4) + 3 * l2 / (2 * n * h3)


def li_threshold(b) -> Fraction:
    """Right-hand side of the quintic validity region at ``b``."""
    b = Fraction(b)
    frac = b - floor(b)
    return b * b / 2 + frac * (1 - frac) / 2


def li_region(b, w) -> bool:
    return Fraction(w) > li_threshold(b)


class BgMode(enum.Enum):
    BG1 = "BG1"
    BG2_PUSHFORWARD = "BG2-pushforward"
    BG2_RANK_ONE = "BG2-rank-one"


@dataclass(frozen=True)
class ParamCheck:
    """One strict or weak inequality ``lhs < rhs`` (or ``<=``) in a chain."""

    label: str
    lhs: Fraction
    rhs: Fraction
    strict: bool = True

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {"label": self.label, "lhs": format_rational(self.lhs),
                "rhs": format_rational(self.rhs), "strict": self.strict, "holds": self.holds}


@dataclass(frozen=True)
class BgParamsReport:
    mode: BgMode
    steps: tuple[ParamCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(s.holds for s in self.steps)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"mode": self.mode.value, "passed": self.passed,
                "steps": [s.to_json() for s in self.steps]}


def special_point_data(c, h3) -> tuple[Fraction, Fraction, Fraction]:
    """``(b*, w*, w* - b*^2/2)`` for any rational c and H^3, with the gap identity checked."""
    c, h3 = Fraction(c), Fraction(h3)
    b = c - 1 / (2 * h3)
    w = b * b + c / h3
    gap = w - b * b / 2
    if gap != (c + 1 / (2 * h3)) ** 2 / 2:
        raise AssertionError("special point gap identity failed")
    return b, w, gap


def bg2_special_point(c, h3) -> StabilityPoint:
    c = Fraction(c)
    if c not in (-1, -2):
        raise ValueError(f"ch2.H must be -1 or -2, got {format_rational(c)}")
    b, w, _ = special_point_data(c, h3)
    return StabilityPoint(b, w)


def _outside(reason: str) -> ValueError:
    return ValueError(f"outside theorem hypotheses: {reason}")


def verify_bg_params(mode, n: Optional[int] = None, h3=5, c=None) -> BgParamsReport:
    """Check that the parameters a mode needs lie in the quintic validity region.

    The ray modes compare the worst case of the region on ``b = -n/2`` with
    the lowest admitted w; the rank-one mode tests the special point directly.
    """
    mode = BgMode(mode)
    h3 = Fraction(h3)
    if h3 <= 0:
        raise _outside("H^3 must be positive")
    if mode is BgMode.BG2_RANK_ONE:
        if c is None or Fraction(c) not in (-1, -2):
            raise _outside("ch2.H must be -1 or -2")
        b, w, gap = special_point_data(c, h3)
        frac = b - floor(b)
        return BgParamsReport(mode, (
            ParamCheck("floor correction < w* - b*^2/2", frac * (1 - frac) / 2, gap),
        ))
    offset = 1 if mode is BgMode.BG1 else 3
    min_n = 4 if mode is BgMode.BG1 else 10
    if n is None or n < min_n:
        raise _outside(f"n >= {min_n} required")
    b = Fraction(-n, 2)
    worst = Fraction(n * n + 1, 8)
    floor_w = Fraction(n * n, 4) - offset / h3
    return BgParamsReport(mode, (
        ParamCheck("region threshold on b=-n/2 <= n^2/8 + 1/8", li_threshold(b), worst, strict=False),
        ParamCheck(f"n^2/8 + 1/8 < n^2/4 - {offset}/H^3", worst, floor_w),
    ))
