"""Section counts on surfaces and plane curves in P^3, via binomial coefficients."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

__all__ = [
    "binom", "h0_p3", "h0_surface", "h0_plane_curve", "chi_structure_sheaf",
    "riemann_roch_chi", "sum_identity_sides", "verify_sum_identity", "ineq1_gap",
    "k3_bound", "AppendixRow", "appendix_rows", "appendix_csv",
]


@lru_cache(maxsize=None)
def binom(a: int, k: int) -> int:
    """C(a, k), taken to be 0 whenever a < k; lru_cache is thread-safe."""
    if k < 0 or a < k:
        return 0
    return comb(a, k)


def h0_p3(k: int) -> int:
    """Sections of O(k) on P^3."""
    return binom(k + 3, 3)


def h0_surface(n: int, k: int) -> int:
    """Sections of O_D(k) for a degree-n surface D, valid while H^1(O(k-n)) vanishes."""
    if n < 1:
        raise ValueError("n must be positive")
    return h0_p3(k) - h0_p3(k - n)


def h0_plane_curve(n: int, i: int) -> int:
    """Sections of O_C(i) for a plane curve C of degree n."""
    if n < 1:
        raise ValueError("n must be positive")
    return binom(i + 2, 2) - binom(i - n + 2, 2)


def chi_structure_sheaf(n: int) -> int:
    return 1 + binom(n - 1, 3)


def riemann_roch_chi(n: int, l2, kl) -> Fraction:
    """Euler characteristic of a line bundle L on a degree-n surface from L^2 and K.L."""
    return chi_structure_sheaf(n) + Fraction(l2) / 2 - Fraction(kl) / 2


def sum_identity_sides(n: int) -> tuple[int, int]:
    if n < 5:
        raise ValueError("n ≥ 5 required")
    lhs = h0_surface(n, n - 4) - 1
    rhs = sum(h0_plane_curve(n, i) for i in range(1, n - 3))
    return lhs, rhs


def verify_sum_identity(n: int) -> bool:
    lhs, rhs = sum_identity_sides(n)
    return lhs == rhs


def ineq1_gap(n: int, l2=None) -> int:
    """Lower bound for sections of ``L^{-1}(n-4)`` when ``L^2 >= -2n+6``."""
    if n < 5:
        raise ValueError("n ≥ 5 required")
    if l2 is not None and Fraction(l2) < -2 * n + 6:
        raise ValueError("L² ≥ -2n+6 required")
    return h0_surface(n, n - 4) - (n - 4)


def k3_bound() -> Fraction:
    """Largest L^2 for a nontrivial L with ``L.H = 0`` on a quartic surface."""
    # chi(L) = 2 + L^2/2 must be <= 0 once neither L nor L^{-1} has sections
    return Fraction(-4)


@dataclass(frozen=True)
class AppendixRow:
    n: int
    sum_lhs: int
    sum_rhs: int
    gap: int

    @property
    def verified(self) -> bool:
        return self.sum_lhs == self.sum_rhs


def appendix_rows(ns) -> list[AppendixRow]:
    rows = []
    for n in ns:
        lhs, rhs = sum_identity_sides(n)
        rows.append(AppendixRow(n, lhs, rhs, ineq1_gap(n)))
    return rows


def appendix_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "sum_lhs", "sum_rhs", "gap", "verified"])
    for r in rows:
        writer.writerow([r.n, r.sum_lhs, r.sum_rhs, r.gap, str(r.verified).lower()])
    return buf.getvalue()
