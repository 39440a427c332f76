"""Brute-force wall search for rank-zero targets, written independently of the package.

The wall of ``u`` against a rank-zero class ``v = (0, a, c)`` is the line of
slope ``c/a`` through ``(c1/r, c2/r)``. Window and Bogomolov filters are
applied to the full box with numpy integer arrays; the few survivors are
then checked on the segment with sympy's exact square roots.
"""
from fractions import Fraction

import numpy as np
import sympy


def oracle_walls(v, b0, w_floor, w_ceil, r_max, c1_span, c2_span, h3=1):
    """``[(slope, intercept, height, [(r, c1, c2), ...]), ...]`` highest first."""
    _, a, c = (Fraction(x) for x in v)
    h3, b0 = Fraction(h3), Fraction(b0)
    w_floor, w_ceil = Fraction(w_floor), Fraction(w_ceil)
    s = c / a
    c1s = np.arange(-int(c1_span), int(c1_span) + 1, dtype=np.int64)[:, None]
    c2s = np.arange(-int(c2_span), int(c2_span) + 1, dtype=np.int64)[None, :]
    # height at b0 is s*b0 + (c2 - s*c1)/r, compared after scaling by r*den
    den = np.lcm.reduce([s.denominator, b0.denominator, w_floor.denominator, w_ceil.denominator])
    den = int(den)
    sb = s * b0
    found = []
    for r in range(1, r_max + 1):
        scaled = (c2s * den - (c1s * int(s * den)) + r * int(sb * den))
        lo, hi = int(w_floor * den) * r, int(w_ceil * den) * r
        mask = (scaled >= lo) & (scaled <= hi)
        # discriminant of u with H^3 = p/q, scaled by q
        mask &= (c1s * c1s * h3.denominator - 2 * r * h3.numerator * c2s) >= 0
        for i, j in zip(*np.nonzero(mask)):
            found.append((r, int(c1s[i, 0]), int(c2s[0, j])))

    walls = {}
    for r, c1, c2 in found:
        x = (Fraction(c2) - s * c1) / r
        disc = s * s + 2 * x
        if disc <= 0:
            continue
        q0, q1, q2 = -r, a - c1, c - c2
        if q1 * q1 - 2 * q0 * h3 * q2 < 0:
            continue
        # c1 - b*r*h3 >= 0 up to the right end:  s + sqrt(disc) <= c1/(r*h3)
        gap = Fraction(c1) / (r * h3) - s
        if gap < 0 or disc > gap * gap:
            continue
        # q1 + b*r*h3 >= 0 from the left end:  s - sqrt(disc) >= -q1/(r*h3)
        gap = s + q1 / (r * h3)
        if gap < 0 or disc > gap * gap:
            continue
        walls.setdefault((s, x), []).append((Fraction(r), Fraction(c1), Fraction(c2)))
    _sympy_confirm(walls, a, h3)
    out = []
    for (slope, intercept), cands in walls.items():
        out.append((slope, intercept, slope * b0 + intercept, sorted(cands)))
    out.sort(key=lambda t: (-t[2], t[0], t[1]))
    return out


def _sympy_confirm(walls, a, h3):
    """Re-check each kept candidate with symbolic square roots."""
    h = sympy.Rational(h3.numerator, h3.denominator)
    for (slope, x), cands in walls.items():
        sv = sympy.Rational(slope.numerator, slope.denominator)
        xv = sympy.Rational(x.numerator, x.denominator)
        root = sympy.sqrt(sv ** 2 + 2 * xv)
        for r, c1, _ in cands:
            r, c1 = int(r), int(c1)
            assert sympy.simplify(c1 - (sv + root) * r * h) >= 0
            q1 = sympy.Rational((a - c1).numerator, (a - c1).denominator)
            assert sympy.simplify(q1 + (sv - root) * r * h) >= 0
