"""Static SVG pictures of the (b, w)-plane: the boundary parabola, U, walls and projections."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional
from xml.sax.saxutils import escape

from .lattice import ChernData, format_rational, projection
from .walls import WallLine, WallReport

WIDTH, HEIGHT = 800, 600
PARABOLA_SAMPLES = 200


def fmt(x) -> str:
    """Decimal rendering with 10 significant digits (exact inputs, display only)."""
    value = float(x)
    if value == 0:
        return "0"
    return format(value, ".10g")


def _minus(text: str) -> str:
    return text.replace("-", "−")


def class_label(ch: ChernData, h3) -> str:
    """``O(k)`` when ``+-ch`` is the class of a line bundle, else the truncation."""
    h3 = Fraction(h3)
    for sign in (1, -1):
        r, c1, c2 = (sign * x for x in ch.truncation)
        if r == 1:
            k = c1 / h3
            if k.denominator == 1 and c2 == k * k * h3 / 2:
                return "O" if k == 0 else _minus(f"O({k.numerator})")
    return _minus("(" + ",".join(format_rational(x) for x in ch.truncation) + ")")


@dataclass(frozen=True)
class Viewport:
    b_min: Fraction
    b_max: Fraction
    w_min: Fraction
    w_max: Fraction

    def __post_init__(self):
        if not (self.b_min < self.b_max and self.w_min < self.w_max):
            raise ValueError("viewport must have positive width and height")

    def contains(self, b, w) -> bool:
        return self.b_min <= b <= self.b_max and self.w_min <= w <= self.w_max

    def x(self, b) -> Fraction:
        return (Fraction(b) - self.b_min) / (self.b_max - self.b_min) * WIDTH

    def y(self, w) -> Fraction:
        return HEIGHT - (Fraction(w) - self.w_min) / (self.w_max - self.w_min) * HEIGHT

    @classmethod
    def for_degree(cls, n: int) -> Viewport:
        return cls(Fraction(-(n + 2)), Fraction(2), Fraction(-2), Fraction(n * n, 2) + 2)


@dataclass(frozen=True)
class Marker:
    b: Fraction
    w: Fraction
    label: str


@dataclass
class Figure:
    viewport: Viewport
    walls: list[WallLine] = field(default_factory=list)
    markers: list[Marker] = field(default_factory=list)
    vertical_loci: list[Fraction] = field(default_factory=list)
    title: str = ""

    def add_report(self, report: WallReport, target: Optional[ChernData], h3) -> None:
        if report.line not in self.walls:
            self.walls.append(report.line)
        classes = list(report.candidates)
        if target is not None:
            classes += [target.truncated() - c for c in report.candidates]
        for ch in classes:
            pt = projection(ch, h3)
            if pt.at_infinity:
                continue
            marker = Marker(pt.x, pt.y, f"Π({class_label(ch, h3)})")
            if marker not in self.markers:
                self.markers.append(marker)

    def _wall_endpoints(self, line: WallLine):
        vp = self.viewport
        if line.is_vertical:
            b = line.vertical_b
            if not vp.b_min <= b <= vp.b_max:
                return None
            return (b, vp.w_min), (b, vp.w_max)
        pts = []
        for b in (vp.b_min, vp.b_max):
            w = line.height_at(b)
            if vp.w_min <= w <= vp.w_max:
                pts.append((b, w))
        if line.slope != 0:
            for w in (vp.w_min, vp.w_max):
                b = (w - line.intercept) / line.slope
                if vp.b_min <= b <= vp.b_max:
                    pts.append((b, w))
        pts = sorted(set(pts))
        if len(pts) < 2:
            return None
        return pts[0], pts[-1]

    def visible_elements(self) -> int:
        count = sum(1 for m in self.markers if self.viewport.contains(m.b, m.w))
        count += sum(1 for w in self.walls if self._wall_endpoints(w) is not None)
        count += sum(1 for b in self.vertical_loci if self.viewport.b_min <= b <= self.viewport.b_max)
        return count

    def to_svg(self) -> str:
        vp = self.viewport
        if not (self.walls or self.markers or self.vertical_loci):
            raise ValueError("nothing to draw")
        if self.visible_elements() == 0:
            raise ValueError("viewport excludes every element of the report")
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" '
            f'data-viewport="{format_rational(vp.b_min)} {format_rational(vp.b_max)} '
            f'{format_rational(vp.w_min)} {format_rational(vp.w_max)}">',
        ]
        if self.title:
            out.append(f"<title>{escape(self.title)}</title>")
        parabola = []
        for i in range(PARABOLA_SAMPLES + 1):
            b = vp.b_min + (vp.b_max - vp.b_min) * Fraction(i, PARABOLA_SAMPLES)
            parabola.append((vp.x(b), vp.y(b * b / 2)))
        region = [(vp.x(vp.b_min), vp.y(vp.w_max))] + parabola + [(vp.x(vp.b_max), vp.y(vp.w_max))]
        out.append('<clipPath id="frame"><rect x="0" y="0" width="{}" height="{}"/></clipPath>'
                   .format(WIDTH, HEIGHT))
        out.append('<g clip-path="url(#frame)">')
        out.append('<polygon class="region-U" fill="#dde8f4" stroke="none" points="'
                   + " ".join(f"{fmt(x)},{fmt(y)}" for x, y in region) + '"/>')
        out.append('<polyline class="parabola" fill="none" stroke="#000" stroke-width="1.5" points="'
                   + " ".join(f"{fmt(x)},{fmt(y)}" for x, y in parabola) + '"/>')
        if vp.b_min <= 0 <= vp.b_max:
            out.append(f'<line class="axis" x1="{fmt(vp.x(0))}" y1="0" x2="{fmt(vp.x(0))}" '
                       f'y2="{HEIGHT}" stroke="#999" stroke-width="0.5"/>')
        if vp.w_min <= 0 <= vp.w_max:
            out.append(f'<line class="axis" x1="0" y1="{fmt(vp.y(0))}" x2="{WIDTH}" '
                       f'y2="{fmt(vp.y(0))}" stroke="#999" stroke-width="0.5"/>')
        for b in self.vertical_loci:
            if vp.b_min <= b <= vp.b_max:
                out.append(f'<line class="bg-locus" data-b="{format_rational(b)}" x1="{fmt(vp.x(b))}" '
                           f'y1="0" x2="{fmt(vp.x(b))}" y2="{HEIGHT}" stroke="#2a7" '
                           f'stroke-dasharray="6,4"/>')
        for line in self.walls:
            ends = self._wall_endpoints(line)
            if ends is None:
                continue
            (b1, w1), (b2, w2) = ends
            if line.is_vertical:
                attrs = f'data-vertical="{format_rational(line.vertical_b)}"'
            else:
                attrs = (f'data-slope="{format_rational(line.slope)}" '
                         f'data-intercept="{format_rational(line.intercept)}"')
            out.append(f'<line class="wall" {attrs} x1="{fmt(vp.x(b1))}" y1="{fmt(vp.y(w1))}" '
                       f'x2="{fmt(vp.x(b2))}" y2="{fmt(vp.y(w2))}" stroke="#c22" stroke-width="1.5"/>')
        out.append("</g>")
        for m in self.markers:
            if not vp.contains(m.b, m.w):
                continue
            x, y = fmt(vp.x(m.b)), fmt(vp.y(m.w))
            out.append(f'<g class="marker" data-b="{format_rational(m.b)}" data-w="{format_rational(m.w)}">'
                       f'<circle cx="{x}" cy="{y}" r="4" fill="#000"/>'
                       f'<text x="{x}" y="{y}" dx="6" dy="-6" font-size="14">{escape(m.label)}</text></g>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
