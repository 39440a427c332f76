"""Walls in the (b, w)-plane and exhaustive numerical wall search.

A wall for a class ``v`` is a line along which ``nu(v)`` equals ``nu(u)`` for
some sub-class ``u``; only its part inside the open region ``w > b^2/2``
matters. :func:`enumerate_walls` scans a finite box of lattice classes ``u``
and keeps those admissible as destabilisers of ``v`` on a wall crossing the
reference line ``b = b0`` inside a window of heights. The result is a set of
pseudo-walls: every actual wall in the window appears, but not every
reported wall need be realised by objects.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _kernels
from .lattice import (
    DEFAULT_LATTICE,
    ChernData,
    LatticeSpec,
    StabilityPoint,
    chern_from_json,
    chern_to_json,
    discriminant,
    format_rational,
    nu,
    parse_rational,
    projection,
    validate_lattice,
)
from .surd import Surd

__all__ = [
    "WallLine", "WallSegment", "SearchBox", "WallReport",
    "wall_between", "segment_in_u", "heart_numeric_ok", "heart_ok_on_segment",
    "default_box", "enumerate_walls", "first_wall",
]


@dataclass(frozen=True)
class WallLine:
    """``w = slope*b + intercept``, or the vertical line ``b = vertical_b``."""

    slope: Optional[Fraction] = None
    intercept: Optional[Fraction] = None
    vertical_b: Optional[Fraction] = None

    def __post_init__(self):
        sloped = self.slope is not None and self.intercept is not None
        if sloped == (self.vertical_b is not None):
            raise ValueError("a wall line is either sloped or vertical")

    @classmethod
    def sloped(cls, slope, intercept) -> WallLine:
        return cls(Fraction(slope), Fraction(intercept), None)

    @classmethod
    def vertical(cls, b) -> WallLine:
        return cls(None, None, Fraction(b))

    @property
    def is_vertical(self) -> bool:
        return self.vertical_b is not None

    def height_at(self, b) -> Fraction:
        if self.is_vertical:
            raise ValueError("a vertical line has no height at a given b")
        return self.slope * Fraction(b) + self.intercept

    def sort_key(self) -> tuple:
        if self.is_vertical:
            return (1, self.vertical_b, Fraction(0))
        return (0, self.slope, self.intercept)

    def to_json(self) -> dict:
        if self.is_vertical:
            return {"vertical": format_rational(self.vertical_b)}
        return {"slope": format_rational(self.slope), "intercept": format_rational(self.intercept)}

    @classmethod
    def from_json(cls, data: dict) -> WallLine:
        if "vertical" in data:
            return cls.vertical(parse_rational(data["vertical"]))
        return cls.sloped(parse_rational(data["slope"]), parse_rational(data["intercept"]))

    def __str__(self) -> str:
        if self.is_vertical:
            return f"b = {format_rational(self.vertical_b)}"
        if self.intercept == 0:
            return f"w = {format_rational(self.slope)}*b"
        sign = "-" if self.intercept < 0 else "+"
        return f"w = {format_rational(self.slope)}*b {sign} {format_rational(abs(self.intercept))}"


@dataclass(frozen=True)
class WallSegment:
    """The part of ``line`` inside U, between the parabola crossings.

    For a vertical line both endpoints are its b-value and the segment is
    unbounded above.
    """

    line: WallLine
    b_left: Surd
    b_right: Surd

    def contains_b(self, b) -> bool:
        if self.line.is_vertical:
            return Fraction(b) == self.line.vertical_b
        return self.b_left < b < self.b_right


def _surd_to_json(s: Surd) -> dict:
    return {"p": format_rational(s.p), "q": format_rational(s.q), "d": format_rational(s.d)}


def _surd_from_json(data: dict) -> Surd:
    return Surd(parse_rational(data["p"]), parse_rational(data["q"]), parse_rational(data["d"]))


def wall_between(ch_e: ChernData, ch_f: ChernData, h3) -> Optional[WallLine]:
    """The line through the projections of two classes, if they span one."""
    pe, pf = projection(ch_e, h3), projection(ch_f, h3)
    if pe.at_infinity and pf.at_infinity:
        return None
    if pe == pf:
        return None
    if pe.at_infinity or pf.at_infinity:
        direction, base = (pe, pf) if pe.at_infinity else (pf, pe)
        if direction.x == 0:
            return WallLine.vertical(base.x)
        slope = direction.y / direction.x
        return WallLine.sloped(slope, base.y - slope * base.x)
    if pe.x == pf.x:
        return WallLine.vertical(pe.x)
    slope = (pf.y - pe.y) / (pf.x - pe.x)
    return WallLine.sloped(slope, pe.y - slope * pe.x)


def segment_in_u(line: WallLine) -> Optional[WallSegment]:
    """Intersection of ``line`` with the open region ``w > b^2/2``."""
    if line.is_vertical:
        b = Surd(line.vertical_b)
        return WallSegment(line, b, b)
    s, x = line.slope, line.intercept
    disc = s * s + 2 * x
    if disc <= 0:
        return None
    return WallSegment(line, Surd(s, -1, disc), Surd(s, 1, disc))


def heart_numeric_ok(ch: ChernData, pt: StabilityPoint, h3) -> bool:
    """Sign conditions on the slope denominator and numerator at one point."""
    h3 = Fraction(h3)
    den = ch.ch1h2 - pt.b * ch.ch0 * h3
    if den < 0:
        return False
    if den == 0:
        return ch.ch2h - pt.w * ch.ch0 * h3 >= 0
    return True


def heart_ok_on_segment(ch: ChernData, seg: WallSegment, h3) -> bool:
    """Whether ``ch1.H^2 - b*ch0*H^3 >= 0`` along the whole open segment."""
    h3 = Fraction(h3)
    if ch.ch0 == 0:
        return ch.ch1h2 >= 0
    if seg.line.is_vertical:
        return ch.ch1h2 - seg.line.vertical_b * ch.ch0 * h3 >= 0
    root = ch.ch1h2 / (ch.ch0 * h3)
    # the denominator is linear in b and vanishes at `root`
    if ch.ch0 > 0:
        return seg.b_right <= root
    return seg.b_left >= root


@dataclass(frozen=True)
class SearchBox:
    """Candidates ``(r, c1, c2)`` with ``1 <= r <= r_max``, ``|c1| <= c1_span``, ``|c2| <= c2_span``."""

    r_max: int
    c1_span: Fraction
    c2_span: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c1_span", Fraction(self.c1_span))
        object.__setattr__(self, "c2_span", Fraction(self.c2_span))
        if not isinstance(self.r_max, int) or self.r_max < 1 or self.c1_span <= 0 or self.c2_span <= 0:
            raise ValueError(f"degenerate search box {self}")

    def scaled(self, factor: int) -> SearchBox:
        return SearchBox(self.r_max * factor, self.c1_span * factor, self.c2_span * factor)

    def to_json(self) -> dict:
        return {"rMax": str(self.r_max), "c1Span": format_rational(self.c1_span),
                "c2Span": format_rational(self.c2_span)}

    @classmethod
    def from_json(cls, data: dict) -> SearchBox:
        return cls(int(parse_rational(data["rMax"])), parse_rational(data["c1Span"]),
                   parse_rational(data["c2Span"]))


def default_box(v: ChernData, h3) -> SearchBox:
    """Rank up to 5, ``|c1| <= 2|ch1.H^2(v)|``, ``|c2| <= 4*Delta_H(v)/H^3`` (each at least 1)."""
    h3 = Fraction(h3)
    c1 = max(2 * abs(v.ch1h2), Fraction(1))
    c2 = max(4 * discriminant(v, h3) / h3, Fraction(1))
    return SearchBox(5, c1, c2)


@dataclass(frozen=True)
class WallReport:
    """One wall and every admissible destabiliser truncation found on it."""

    segment: WallSegment
    height_at_b0: Fraction
    candidates: tuple[ChernData, ...]
    complements: tuple[ChernData, ...]
    box_saturated: bool = False

    @property
    def line(self) -> WallLine:
        return self.segment.line

    def candidate_triples(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        return [c.truncation for c in self.candidates]

    def to_json(self) -> dict:
        return {
            "line": self.line.to_json(),
            "heightAtB0": format_rational(self.height_at_b0),
            "segment": {"bLeft": _surd_to_json(self.segment.b_left),
                        "bRight": _surd_to_json(self.segment.b_right)},
            "candidates": [chern_to_json(c)[:3] for c in self.candidates],
            "complements": [chern_to_json(c)[:3] for c in self.complements],
            "boxSaturated": self.box_saturated,
        }

    @classmethod
    def from_json(cls, data: dict) -> WallReport:
        line = WallLine.from_json(data["line"])
        seg = data.get("segment")
        if seg is None:
            segment = segment_in_u(line)
        else:
            segment = WallSegment(line, _surd_from_json(seg["bLeft"]), _surd_from_json(seg["bRight"]))
        return cls(
            segment=segment,
            height_at_b0=parse_rational(data["heightAtB0"]),
            candidates=tuple(chern_from_json(c) for c in data["candidates"]),
            complements=tuple(chern_from_json(c) for c in data.get("complements", [])),
            box_saturated=bool(data["boxSaturated"]),
        )


@dataclass
class _WallAccumulator:
    line: WallLine
    height: Fraction
    segment: WallSegment
    pairs: list = field(default_factory=list)
    saturated: bool = False


def _check_candidate(v, u, comp, b0, w_floor, w_ceil, h3):
    """Exact re-verification of one kernel survivor; returns (line, height, segment)."""
    line = wall_between(v, u, h3)
    if line is None or line.is_vertical:
        raise AssertionError(f"scan kept {u} but no sloped wall exists")
    height = line.height_at(b0)
    seg = segment_in_u(line)
    ok = (
        w_floor <= height <= w_ceil
        and seg is not None
        and discriminant(u, h3) >= 0
        and (discriminant(comp, h3) >= 0 if comp.ch0 != 0 else comp.ch1h2 >= 0)
        and heart_ok_on_segment(u, seg, h3)
        and heart_ok_on_segment(comp, seg, h3)
    )
    if not ok:
        raise AssertionError(f"scan kept {u} which fails the exact constraints")
    pt = StabilityPoint(b0, height)
    if nu(u, pt, h3) != nu(v, pt, h3):
        raise AssertionError(f"slopes of {u} and {v} differ on their wall")
    return line, height, seg


def enumerate_walls(
    v: ChernData,
    b0,
    w_floor,
    w_ceil,
    box: Optional[SearchBox] = None,
    spec: LatticeSpec = DEFAULT_LATTICE,
    h3=1,
    *,
    target_spec: LatticeSpec = DEFAULT_LATTICE,
    backend: Optional[str] = None,
) -> list[WallReport]:
    """All numerical walls for ``v`` crossing ``b = b0`` at heights in ``[w_floor, w_ceil]``.

    ``spec`` is the lattice scanned for sub-classes ``u`` of positive rank;
    ``target_spec`` is the lattice the truncation of ``v`` must lie in.
    Vertical walls are parallel to the reference line and are never reported.
    Walls come out highest first; candidates are sorted lexicographically.
    """
    b0, w_floor, w_ceil, h3 = (Fraction(x) for x in (b0, w_floor, w_ceil, h3))
    if box is None:
        box = default_box(v, h3)
    # the window is closed, so a single height is still a valid window
    if w_floor > w_ceil:
        return []
    if not w_floor > b0 * b0 / 2:
        raise ValueError("window floor must lie inside U on the reference line")
    if v.truncation == (0, 0, 0):
        raise ValueError("degenerate class")
    if not validate_lattice(v.truncated(), target_spec):
        raise ValueError(f"target class {v} is not on the lattice {target_spec}")

    problem = _kernels.ScanProblem.build(
        v.truncation, h3, b0, w_floor, w_ceil,
        box.r_max, box.c1_span, box.c2_span, (spec.d0, spec.d1, spec.d2),
    )
    survivors = _kernels.scan(problem, backend)

    vt = v.truncated()
    walls: dict[WallLine, _WallAccumulator] = {}
    for k, i, j in survivors:
        u = ChernData(Fraction(k, spec.d0), Fraction(i, spec.d1), Fraction(j, spec.d2))
        comp = vt - u
        line, height, seg = _check_candidate(vt, u, comp, b0, w_floor, w_ceil, h3)
        acc = walls.get(line)
        if acc is None:
            acc = walls[line] = _WallAccumulator(line, height, seg)
        acc.pairs.append((u, comp))
        if k == problem.kmax or abs(i) == problem.imax or abs(j) == problem.jmax:
            acc.saturated = True

    reports = []
    for acc in walls.values():
        pairs = sorted(acc.pairs, key=lambda p: p[0].truncation)
        reports.append(WallReport(
            segment=acc.segment,
            height_at_b0=acc.height,
            candidates=tuple(p[0] for p in pairs),
            complements=tuple(p[1] for p in pairs),
            box_saturated=acc.saturated,
        ))
    reports.sort(key=lambda r: (-r.height_at_b0, r.line.sort_key()))
    return reports


def first_wall(v, b0, w_floor, w_ceil, box=None, spec=DEFAULT_LATTICE, h3=1, **kwargs) -> Optional[WallReport]:
    """The highest wall found by :func:`enumerate_walls`, or None."""
    reports = enumerate_walls(v, b0, w_floor, w_ceil, box, spec, h3, **kwargs)
    return reports[0] if reports else None
