"""Exact quadratic surds ``p + q*sqrt(d)`` over the rationals.

Comparison never touches floating point. Operands sharing a radicand (or
rationals) are compared in closed form by sign analysis and squaring. Surds
with different radicands are first tested for equality algebraically, then
separated by refining rational enclosures of both square roots.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import isqrt
from numbers import Rational
from typing import Union

Number = Union[int, Fraction]


def _rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    n, m = x.numerator, x.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_linear(a: Fraction, b: Fraction, d: Fraction) -> int:
    """Sign of ``a + b*sqrt(d)`` for d >= 0."""
    sa, sb = _sign(a), _sign(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: the larger square wins
    return sa * _sign(a * a - b * b * d)


def _sqrt_bounds(d: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(d) <= hi with hi - lo <= 2**-bits / denominator."""
    n, m = d.numerator, d.denominator
    scale = 1 << bits
    # sqrt(n/m) = sqrt(n*m)/m
    r = isqrt(n * m * scale * scale)
    lo = Fraction(r, m * scale)
    hi = lo if r * r == n * m * scale * scale else Fraction(r + 1, m * scale)
    return lo, hi


def _sign_two_radicals(x: Fraction, y: Fraction, d: Fraction,
                       z: Fraction, f: Fraction) -> int:
    """Sign of ``x + y*sqrt(d) + z*sqrt(f)`` with all inputs rational."""
    # Equality test: x + y*sqrt(d) == -z*sqrt(f) requires matching signs and
    # equal squares (x^2 + y^2 d - z^2 f) + 2xy sqrt(d) == 0.
    left = _sign_linear(x, y, d)
    right = _sign(-z) if f else 0
    if left == right:
        if _sign_linear(x * x + y * y * d - z * z * f, 2 * x * y, d) == 0:
            return 0
    bits = 8
    while True:
        dlo, dhi = _sqrt_bounds(d, bits)
        flo, fhi = _sqrt_bounds(f, bits)
        ylo, yhi = sorted((y * dlo, y * dhi))
        zlo, zhi = sorted((z * flo, z * fhi))
        lo, hi = x + ylo + zlo, x + yhi + zhi
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


@total_ordering
class Surd:
    """The real number ``p + q*sqrt(d)`` with rational p, q and d >= 0.

    A perfect-square radicand is folded into ``p``; zero ``q`` or ``d``
    collapses to ``(p, 0, 0)``. The radicand is otherwise kept as given.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p: Number = 0, q: Number = 0, d: Number = 0):
        p, q, d = Fraction(p), Fraction(q), Fraction(d)
        if d < 0:
            raise ValueError(f"negative radicand {d}")
        if q and d:
            root = _rational_sqrt(d)
            if root is not None:
                p, q, d = p + q * root, Fraction(0), Fraction(0)
        if not q or not d:
            q, d = Fraction(0), Fraction(0)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    @classmethod
    def sqrt(cls, d: Number) -> Surd:
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _key(self) -> tuple[Fraction, int, Fraction]:
        # q*sqrt(d) is pinned down by sign(q) and q^2 d once d is not a square
        return (self.p, _sign(self.q), self.q * self.q * self.d)

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.p)
        return hash(self._key())

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Surd({self.p})"
        return f"Surd({self.p}, {self.q}, {self.d})"

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.p)
        root = f"sqrt({self.d})"
        term = root if self.q == 1 else f"-{root}" if self.q == -1 else f"{self.q}*{root}"
        if self.p == 0:
            return term
        return f"{self.p} + {term}" if self.q > 0 else f"{self.p} - {term.lstrip('-')}"

    # -- arithmetic -----------------------------------------------------

    def __neg__(self) -> Surd:
        return Surd(-self.p, -self.q, self.d)

    def __add__(self, other) -> Surd:
        if isinstance(other, Rational):
            return Surd(self.p + other, self.q, self.d)
        if isinstance(other, Surd):
            if other.is_rational:
                return self + other.p
            if self.is_rational:
                return other + self.p
            if self.d == other.d:
                return Surd(self.p + other.p, self.q + other.q, self.d)
            raise ValueError("cannot add surds with different radicands")
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> Surd:
        if isinstance(other, (Rational, Surd)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> Surd:
        return (-self) + other

    def __mul__(self, other) -> Surd:
        if isinstance(other, Rational):
            return Surd(self.p * other, self.q * other, self.d)
        return NotImplemented

    __rmul__ = __mul__

    # -- comparison -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (Rational, Surd)):
            return surd_compare(self, other) == 0
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (Rational, Surd)):
            return surd_compare(self, other) < 0
        return NotImplemented

    def approx(self, digits: int = 12) -> Fraction:
        """A rational within 10**-digits of the value (for rendering only)."""
        if self.is_rational:
            return self.p
        # error is |q| * 2**-bits, so pay for the size of q as well
        bits = int(digits * 3.33) + 4 + abs(self.q).__ceil__().bit_length()
        lo, _ = _sqrt_bounds(self.d, bits)
        return self.p + self.q * lo


def surd_compare(a: Surd | Number, b: Surd | Number) -> int:
    """Exact three-way comparison: -1, 0 or 1 as a <, ==, > b."""
    if not isinstance(a, Surd):
        a = Surd(a)
    if not isinstance(b, Surd):
        b = Surd(b)
    if b.is_rational or a.is_rational or a.d == b.d:
        d = a.d if not a.is_rational else b.d
        return _sign_linear(a.p - b.p, a.q - b.q, d)
    return _sign_two_radicals(a.p - b.p, a.q, a.d, -b.q, b.d)
