"""Line bundles on a degree-n divisor: first-wall analysis and the resulting bounds.

The target object is the pushforward of a line bundle L with ``L.H = 0`` on a
divisor in ``|O(n)|``. Its walls all have slope ``-n/2``; the analysis
finds the highest one on the reference line ``b = -n/2`` inside the window
allowed by the ch3 inequality, and shows numerically that the only
surviving destabiliser truncation is ``(1, 0, 0)``.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Iterable, Optional, Sequence

from .bg import BgMode, bg_floor, verify_bg_params
from .lattice import (
    DEFAULT_LATTICE,
    INTEGRAL_CH2_LATTICE,
    BgRegion,
    ChernData,
    LatticeSpec,
    format_rational,
    parse_rational,
)
from .surd import Surd
from .walls import SearchBox, WallLine, WallReport, default_box, enumerate_walls

__all__ = [
    "Mode", "BoundMode", "Conclusion", "NlInput", "AnalysisReport", "Exclusion",
    "pushforward_class", "b1b2", "denominator_d", "prop_bound_f1", "prop_bound_f2",
    "exclude_c", "exclusion_chain", "first_wall_analysis", "sweep", "sweep_csv",
    "theorem_bound", "max_vanishing_cycles", "p3_example", "restricted_bound",
    "mode_l2_floor",
]


class Mode(enum.Enum):
    I = "i"
    II = "ii"


class BoundMode(enum.Enum):
    A = "A"
    B = "B"


class Conclusion(enum.Enum):
    FIRST_WALL_THROUGH_ORIGIN = "FirstWallThroughOrigin"
    INCONCLUSIVE = "Inconclusive"


def mode_l2_floor(mode: Mode, n: int) -> Fraction:
    """Smallest L^2 the mode admits."""
    if Mode(mode) is Mode.I:
        return Fraction(floor(Fraction(-2 * n, 3)) + 1)
    return Fraction(-2 * n + 5)


@dataclass(frozen=True)
class NlInput:
    n: int
    h3: Fraction
    l2: Fraction
    mode: Mode
    lh: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "h3", Fraction(self.h3))
        object.__setattr__(self, "l2", Fraction(self.l2))
        object.__setattr__(self, "lh", Fraction(self.lh))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n ≥ 1 required")
        if self.h3 <= 0:
            raise ValueError("H^3 > 0 required")
        if self.lh != 0:
            raise ValueError("L.H = 0 required")

    def check_hypotheses(self) -> None:
        """Raise with the first failed precondition of the mode."""
        min_n = 4 if self.mode is Mode.I else 10
        if self.n < min_n:
            raise ValueError(f"n ≥ {min_n} required")
        floor_l2 = mode_l2_floor(self.mode, self.n)
        if self.l2 < floor_l2:
            raise ValueError(f"L² ≥ {format_rational(floor_l2)} required")

    def to_json(self) -> dict:
        return {"n": self.n, "h3": format_rational(self.h3), "L2": format_rational(self.l2),
                "LH": format_rational(self.lh), "mode": self.mode.value}


def pushforward_class(inp: NlInput) -> ChernData:
    n, h = inp.n, inp.h3
    return ChernData(0, n * h, inp.lh - Fraction(n * n, 2) * h, inp.l2 / 2 + Fraction(n ** 3, 6) * h)


def b1b2(n: int, h3, x) -> tuple[Surd, Surd, bool, bool]:
    """Ends of the slope ``-n/2`` wall with intercept offset x, and the two endpoint claims."""
    h3, x = Fraction(h3), Fraction(x)
    rad = Fraction(n * n, 4) + 2 * x
    if rad <= 0:
        raise ValueError("wall misses U: n^2/4 + 2x must be positive")
    half = Fraction(n, 2)
    b1 = Surd(-half, 1, rad)
    b2 = Surd(-half, -1, rad)
    return b1, b2, b1 > -1 / (2 * h3), b2 + n < 1 / (2 * h3)


def denominator_d(ch: ChernData, which: str, n: int = 0, h3=1) -> Fraction:
    """Slope denominators on ``b = -1/H^3`` ("D1") and ``b = -n + 1/H^3`` ("D2")."""
    if which == "D1":
        return ch.ch1h2 + ch.ch0
    if which == "D2":
        return ch.ch1h2 + n * ch.ch0 * Fraction(h3) - ch.ch0
    raise ValueError(f"unknown denominator {which!r}")


def prop_bound_f1(c, h3) -> Fraction:
    """Upper bound on ch3 of the rank-one destabiliser with ``ch2.H = c``."""
    c, h3 = Fraction(c), Fraction(h3)
    return 2 * c / 3 * (c - 1 / (2 * h3))


def prop_bound_f2(c2, h3) -> Fraction:
    """Upper bound on ch3 of the twisted quotient with ``ch2.H = c2``."""
    c2, h3 = Fraction(c2), Fraction(h3)
    return 2 * c2 / 3 * (c2 + 1 / (2 * h3))


@dataclass(frozen=True)
class Exclusion:
    c: int
    lower: Fraction        # -n(c+1) + 2
    with_l2: Fraction      # -nc + L^2/2
    bound_f1: Fraction
    bound_f2: Fraction
    upper: Fraction        # combined upper bound
    excluded: bool

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "lower": format_rational(self.lower),
            "withL2": format_rational(self.with_l2),
            "boundF1": format_rational(self.bound_f1),
            "boundF2": format_rational(self.bound_f2),
            "upper": format_rational(self.upper),
            "excluded": self.excluded,
        }


def exclusion_chain(n: int, h3, l2, c: int) -> Exclusion:
    h3, l2 = Fraction(h3), Fraction(l2)
    if c == 0:
        raise ValueError("c = 0 cannot be excluded")
    if c not in (-1, -2):
        raise ValueError("c must be -1 or -2")
    b1 = prop_bound_f1(c, h3)
    # the quotient twisted by n has ch2.H = -c; its bound feeds back as a lower bound on ch3(F1)
    b2 = prop_bound_f2(-c, h3)
    upper = b1 + b2
    lower = Fraction(-n * (c + 1) + 2)
    return Exclusion(c, lower, -n * c + l2 / 2, b1, b2, upper, not lower < upper)


def exclude_c(n: int, h3, l2, c: int) -> bool:
    """True iff ``c = ch2(F1).H`` is ruled out by the combined ch3 bounds."""
    return exclusion_chain(n, h3, l2, c).excluded


@dataclass(frozen=True)
class AnalysisReport:
    input: NlInput
    wf_value: Fraction
    window: tuple[Fraction, Fraction]
    walls: tuple[WallReport, ...]
    candidates_c: tuple[int, ...]
    surviving_c: tuple[int, ...]
    exclusions: tuple[Exclusion, ...]
    conclusion: Conclusion
    box: SearchBox
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def wall_heights(self) -> list[Fraction]:
        return [w.height_at_b0 for w in self.walls]

    def to_json(self) -> dict:
        return {
            "input": self.input.to_json(),
            "wf": format_rational(self.wf_value),
            "window": [format_rational(x) for x in self.window],
            "box": self.box.to_json(),
            "walls": [w.to_json() for w in self.walls],
            "candidateC": list(self.candidates_c),
            "survivingC": list(self.surviving_c),
            "exclusions": [e.to_json() for e in self.exclusions],
            "conclusion": self.conclusion.value,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, data: dict) -> AnalysisReport:
        inp = data["input"]
        nl_input = NlInput(int(inp["n"]), parse_rational(inp["h3"]), parse_rational(inp["L2"]),
                           Mode(inp["mode"]), parse_rational(inp["LH"]))
        exclusions = tuple(
            Exclusion(int(e["c"]), *(parse_rational(e[k]) for k in
                                     ("lower", "withL2", "boundF1", "boundF2", "upper")),
                      bool(e["excluded"]))
            for e in data["exclusions"]
        )
        return cls(
            input=nl_input,
            wf_value=parse_rational(data["wf"]),
            window=tuple(parse_rational(x) for x in data["window"]),
            walls=tuple(WallReport.from_json(w) for w in data["walls"]),
            candidates_c=tuple(int(c) for c in data["candidateC"]),
            surviving_c=tuple(int(c) for c in data["survivingC"]),
            exclusions=exclusions,
            conclusion=Conclusion(data["conclusion"]),
            box=SearchBox.from_json(data["box"]),
            warnings=tuple(data["warnings"]),
        )

    def csv_row(self) -> list[str]:
        inp = self.input
        return [
            str(inp.n), format_rational(inp.h3), format_rational(inp.l2), inp.mode.value,
            format_rational(self.wf_value),
            ";".join(format_rational(h) for h in self.wall_heights),
            ";".join(str(c) for c in self.surviving_c),
            self.conclusion.value,
        ]


CSV_COLUMNS = ["n", "h3", "L2", "mode", "wf", "wallHeights", "survivingC", "conclusion"]


def _check_bg_cover(inp: NlInput, region: BgRegion) -> None:
    region = BgRegion(region)
    if region is BgRegion.EVERYWHERE:
        return
    if region is BgRegion.NONE:
        raise ValueError("the ch3 inequality is not known on this threefold")
    if inp.mode is Mode.I:
        reports = [verify_bg_params(BgMode.BG1, inp.n, inp.h3)]
    else:
        reports = [verify_bg_params(BgMode.BG2_PUSHFORWARD, inp.n, inp.h3)]
        reports += [verify_bg_params(BgMode.BG2_RANK_ONE, None, inp.h3, c) for c in (-1, -2)]
    for r in reports:
        if not r.passed:
            raise ValueError(f"known validity region does not cover {r.mode.value} parameters")


def first_wall_analysis(
    inp: NlInput,
    box: Optional[SearchBox] = None,
    bg_region: BgRegion = BgRegion.EVERYWHERE,
    spec: LatticeSpec = INTEGRAL_CH2_LATTICE,
    *,
    backend: Optional[str] = None,
) -> AnalysisReport:
    inp.check_hypotheses()
    _check_bg_cover(inp, bg_region)
    n, h = inp.n, inp.h3
    v = pushforward_class(inp)
    if box is None:
        box = default_box(v, h)
    b0 = Fraction(-n, 2)
    wf = bg_floor(n, h, inp.l2)
    ceil = Fraction(n * n, 4)
    walls = enumerate_walls(v, b0, wf, ceil, box, spec, h,
                            target_spec=DEFAULT_LATTICE, backend=backend)

    warnings: list[str] = []
    cs: set[int] = set()
    for wall in walls:
        if wall.box_saturated:
            warnings.append(f"search box saturated on wall {wall.line}")
        for cand in wall.candidates:
            r, c1, c2 = cand.truncation
            if r == 1 and c1 == 0 and c2.denominator == 1 and c2 in (0, -1, -2):
                cs.add(int(c2))
            else:
                warnings.append(f"unexpected candidate ({format_rational(r)}, "
                                f"{format_rational(c1)}, {format_rational(c2)})")

    exclusions = tuple(exclusion_chain(n, h, inp.l2, c) for c in sorted(cs, reverse=True) if c != 0)
    if inp.mode is Mode.I and cs - {0}:
        warnings.append("mode i admits only ch2.H = 0")
        surviving = sorted(cs, reverse=True)
    else:
        dead = {e.c for e in exclusions if e.excluded}
        surviving = sorted(cs - dead, reverse=True)

    through_origin = WallLine.sloped(Fraction(-n, 2), 0)
    ok = (
        not warnings
        and surviving == [0]
        and any(w.line == through_origin and w.candidate_triples() == [(1, 0, 0)] for w in walls)
    )
    return AnalysisReport(
        input=inp,
        wf_value=wf,
        window=(wf, ceil),
        walls=tuple(walls),
        candidates_c=tuple(sorted(cs, reverse=True)),
        surviving_c=tuple(surviving),
        exclusions=exclusions,
        conclusion=Conclusion.FIRST_WALL_THROUGH_ORIGIN if ok else Conclusion.INCONCLUSIVE,
        box=box,
        warnings=tuple(warnings),
    )


def sweep(ns: Iterable[int], h3s: Iterable, l2s_for: Callable, mode: Mode, **kwargs) -> list[AnalysisReport]:
    """Run the analysis on every cell; ``l2s_for(n, h3)`` lists the L^2 values."""
    out = []
    for n in ns:
        for h3 in h3s:
            for l2 in l2s_for(n, Fraction(h3)):
                out.append(first_wall_analysis(NlInput(n, h3, l2, mode), **kwargs))
    return out


def sweep_csv(reports: Sequence[AnalysisReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


# -- headline bounds --------------------------------------------------------------

def _min_n(mode: BoundMode, n: int) -> None:
    need = 4 if BoundMode(mode) is BoundMode.A else 10
    if n < need:
        raise ValueError(f"n ≥ {need} required")


def theorem_bound(mode, n: int) -> Fraction:
    """Largest L^2 allowed for a line bundle with ``c1 != 0`` and ``L.H = 0``."""
    mode = BoundMode(mode)
    _min_n(mode, n)
    return Fraction(-2 * n, 3) if mode is BoundMode.A else Fraction(-2 * n + 4)


def max_vanishing_cycles(mode, n: int) -> int:
    """Most disjoint vanishing cycles whose sum has empty Noether-Lefschetz locus."""
    mode = BoundMode(mode)
    bound = theorem_bound(mode, n)
    m = (n - 1) // 3 if mode is BoundMode.A else n - 3
    # a sum of m disjoint (-2)-classes has square -2m
    if not (-2 * m > bound and -2 * (m + 1) <= bound):
        raise AssertionError(f"vanishing-cycle count {m} inconsistent with bound {bound}")
    return m


def p3_example(kind: str, *params: int) -> Fraction:
    """Classes on surfaces in P^3 that meet the mode-B bound.

    ``disjointLines(n)``: two disjoint lines, ``L = O(L1 - L2)``.
    ``planeCurves(n, d, g1, g2)``: two disjoint curves of degree d.
    ``genusBound(n, d)``: the resulting cap on ``g1 + g2``.
    """
    if kind == "disjointLines":
        (n,) = params
        if n < 1:
            raise ValueError("n ≥ 1 required")
        # each line has self-intersection -n+2 on the surface
        return Fraction(2 * (-n + 2))
    if kind == "planeCurves":
        n, d, g1, g2 = params
        if n < 1 or d < 1 or g1 < 0 or g2 < 0:
            raise ValueError("need n, d ≥ 1 and genera ≥ 0")
        self_int = [2 * g - 2 - (n - 4) * d for g in (g1, g2)]
        return Fraction(sum(self_int))
    if kind == "genusBound":
        n, d = params
        if n < 1 or d < 1:
            raise ValueError("need n, d ≥ 1")
        return Fraction((n - 4) * (d - 1))
    raise ValueError(f"unknown example {kind!r}")


def restricted_bound(n: int, strong: bool) -> Fraction:
    """Bound on L^2 when L is restricted from the threefold."""
    if n < 1:
        raise ValueError("n ≥ 1 required")
    return Fraction(-2 * n if strong else -n)
