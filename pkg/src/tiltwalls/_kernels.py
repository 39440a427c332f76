"""Lattice scan for numerical walls, in exact integer arithmetic.

A candidate sub-class ``u = (k/d0, i/d1, j/d2)`` of a target ``v`` defines the
line ``A*w + B*b + C = 0`` on which their tilt slopes agree. After clearing
denominators A, B and C are integer linear forms in (k, i, j), and every
constraint of the search (window height, Bogomolov discriminants, heart
positivity along the open segment) becomes a sign test on a polynomial of
degree <= 3 in those forms. Heart positivity at a segment endpoint is tested
without square roots: for the quadratic P(b) = A b^2 + 2B b + 2C with A > 0,
``t >= right root`` iff ``P(t) >= 0`` and ``t`` lies right of the vertex.

Two interchangeable backends run the scan:

* ``numba``: a compiled triple loop (default when numba imports).
* ``numpy``: vectorised over the ch2 coordinate, int64 or Python-int objects.

Set ``TILTWALLS_BACKEND=numpy`` to force the fallback. When the magnitude
bound of some intermediate exceeds 2**62 the scan always runs on Python-int
object arrays, so results never depend on the backend.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

INT64_SAFE = 1 << 62
BACKENDS = ("numba", "numpy")

# coefficient vector layout
(A_I, A_K, B_K, B_J, C_J, C_I, BETA, E, PHI1, PHI2,
 D0, D1, D2, HN, HD, P0, P1, P2, Q) = range(19)
NCOEF = 19


def selected_backend(requested: str | None = None) -> str:
    name = requested or os.environ.get("TILTWALLS_BACKEND", "").strip().lower() or "numba"
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name == "numba" and not HAS_NUMBA:
        return "numpy"
    return name


@dataclass(frozen=True)
class ScanProblem:
    """Integer data of one scan. ``coef`` follows the layout constants above."""

    coef: tuple[int, ...]
    kmin: int
    kmax: int
    imax: int
    jmax: int

    @classmethod
    def build(cls, v, h3, b0, w_floor, w_ceil, r_max, c1_span, c2_span, dens) -> ScanProblem:
        d0, d1, d2 = dens
        vt = [Fraction(x) for x in v]
        q = lcm(*(x.denominator for x in vt))
        p0, p1, p2 = (int(x * q) for x in vt)
        h3 = Fraction(h3)
        hn, hd = h3.numerator, h3.denominator
        b0, w_floor, w_ceil = Fraction(b0), Fraction(w_floor), Fraction(w_ceil)
        e = lcm(b0.denominator, w_floor.denominator, w_ceil.denominator)
        coef = [0] * NCOEF
        coef[A_I] = hn * d0 * d2 * p0
        coef[A_K] = -hn * d1 * d2 * p1
        coef[B_K] = hn * d1 * d2 * p2
        coef[B_J] = -hn * d0 * d1 * p0
        coef[C_J] = hd * d0 * d1 * p1
        coef[C_I] = -hd * d0 * d2 * p2
        coef[BETA] = int(b0 * e)
        coef[E] = e
        coef[PHI1] = int(w_floor * e)
        coef[PHI2] = int(w_ceil * e)
        coef[D0], coef[D1], coef[D2] = d0, d1, d2
        coef[HN], coef[HD] = hn, hd
        coef[P0], coef[P1], coef[P2], coef[Q] = p0, p1, p2, q
        return cls(
            coef=tuple(coef),
            kmin=d0,
            kmax=r_max * d0,
            imax=int(Fraction(c1_span) * d1),  # floor for nonnegative spans
            jmax=int(Fraction(c2_span) * d2),
        )

    def magnitude_bound(self) -> int:
        """Upper bound on |x| for every intermediate the scan forms."""
        c = self.coef
        ks, is_, js = (self.kmin, self.kmax), (-self.imax, self.imax), (-self.jmax, self.jmax)
        max_a = max(abs(c[A_I] * i + c[A_K] * k) for k in ks for i in is_)
        max_b = max(abs(c[B_K] * k + c[B_J] * j) for k in ks for j in js)
        max_c = max(abs(c[C_J] * j + c[C_I] * i) for i in is_ for j in js)
        max_n = abs(c[BETA]) * max_b + c[E] * max_c
        d0, d1, d2, hn, hd = c[D0], c[D1], c[D2], c[HN], c[HD]
        q = c[Q]
        t = self.imax * d0 * hd
        s = self.kmax * d1 * hn
        r0 = abs(c[P0] * d0) + self.kmax * q
        r1 = abs(c[P1] * d1) + self.imax * q
        r2 = abs(c[P2] * d2) + self.jmax * q
        t2 = r1 * d0 * hd
        s2 = r0 * d1 * hn
        terms = [
            max(abs(c[PHI1]), abs(c[PHI2])) * max_a + max_n,
            max_b * max_b + 2 * max_a * max_c,
            self.imax ** 2 * d0 * d2 * hd + 2 * self.kmax * self.jmax * hn * d1 * d1,
            r1 * r1 * d0 * d2 * hd + 2 * r0 * r2 * hn * d1 * d1,
            max_a * t * t + 2 * max_b * t * s + 2 * max_c * s * s,
            max_a * t2 * t2 + 2 * max_b * t2 * s2 + 2 * max_c * s2 * s2,
            t * max_a + max_b * s,
            t2 * max_a + max_b * s2,
        ]
        return max(terms)

    @property
    def int64_safe(self) -> bool:
        return self.magnitude_bound() < INT64_SAFE

    @property
    def size(self) -> int:
        return (self.kmax - self.kmin + 1) * (2 * self.imax + 1) * (2 * self.jmax + 1)


def scan(problem: ScanProblem, backend: str | None = None) -> list[tuple[int, int, int]]:
    """All lattice indices (k, i, j) passing every constraint, in scan order."""
    name = selected_backend(backend)
    if not problem.int64_safe:
        return _scan_numpy(problem, dtype=object)
    if name == "numba":
        return _scan_numba(problem)
    return _scan_numpy(problem, dtype=np.int64)


# -- numpy backend ------------------------------------------------------------

def _scan_numpy(problem: ScanProblem, dtype) -> list[tuple[int, int, int]]:
    c = problem.coef
    a_i, a_k, b_k, b_j, c_j, c_i = (c[A_I], c[A_K], c[B_K], c[B_J], c[C_J], c[C_I])
    beta, e, phi1, phi2 = c[BETA], c[E], c[PHI1], c[PHI2]
    d0, d1, d2, hn, hd = c[D0], c[D1], c[D2], c[HN], c[HD]
    p0, p1, p2, q = c[P0], c[P1], c[P2], c[Q]
    jmax = problem.jmax
    js = np.arange(-jmax, jmax + 1, dtype=np.int64)
    if dtype is object:
        js = js.astype(object)
    out: list[tuple[int, int, int]] = []
    for k in range(problem.kmin, problem.kmax + 1):
        bj = b_k * k + b_j * js
        r0 = p0 * d0 - k * q
        s_u = k * d1 * hn
        for i in range(-problem.imax, problem.imax + 1):
            a = a_i * i + a_k * k
            if a == 0:
                continue
            sgn = 1 if a > 0 else -1
            a = a * sgn
            b = bj * sgn
            cc = (c_j * js + c_i * i) * sgn
            n = -(b * beta + cc * e)
            keep = (n >= phi1 * a) & (n <= phi2 * a) & (b * b - 2 * a * cc > 0)
            keep &= (i * i * d0 * d2 * hd - 2 * k * js * hn * d1 * d1) >= 0
            r1 = p1 * d1 - i * q
            if r0 != 0:
                r2 = p2 * d2 - js * q
                keep &= (r1 * r1 * d0 * d2 * hd - 2 * r0 * r2 * hn * d1 * d1) >= 0
            elif r1 < 0:
                continue
            if not keep.any():
                continue
            t_u = i * d0 * hd
            keep &= (a * t_u * t_u + 2 * b * t_u * s_u + 2 * cc * s_u * s_u) >= 0
            keep &= (t_u * a + b * s_u) >= 0
            if r0 != 0:
                sg = 1 if r0 > 0 else -1
                t_q = r1 * d0 * hd * sg
                s_q = abs(r0) * d1 * hn
                keep &= (a * t_q * t_q + 2 * b * t_q * s_q + 2 * cc * s_q * s_q) >= 0
                vert = t_q * a + b * s_q
                keep &= (vert >= 0) if r0 > 0 else (vert <= 0)
            for j in np.nonzero(keep)[0]:
                out.append((k, i, int(js[j])))
    return out


# -- numba backend ------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _scan_kernel(coef, kmin, kmax, imax, jmax, out):  # pragma: no cover - compiled
        a_i = coef[0]; a_k = coef[1]; b_k = coef[2]; b_j = coef[3]
        c_j = coef[4]; c_i = coef[5]; beta = coef[6]; e = coef[7]
        phi1 = coef[8]; phi2 = coef[9]
        d0 = coef[10]; d1 = coef[11]; d2 = coef[12]; hn = coef[13]; hd = coef[14]
        p0 = coef[15]; p1 = coef[16]; p2 = coef[17]; q = coef[18]
        cap = out.shape[0]
        count = 0
        for k in range(kmin, kmax + 1):
            r0 = p0 * d0 - k * q
            s_u = k * d1 * hn
            for i in range(-imax, imax + 1):
                a0 = a_i * i + a_k * k
                if a0 == 0:
                    continue
                sgn = 1 if a0 > 0 else -1
                a = a0 * sgn
                r1 = p1 * d1 - i * q
                if r0 == 0 and r1 < 0:
                    continue
                t_u = i * d0 * hd
                du0 = i * i * d0 * d2 * hd
                for j in range(-jmax, jmax + 1):
                    b = (b_k * k + b_j * j) * sgn
                    cc = (c_j * j + c_i * i) * sgn
                    n = -(b * beta + cc * e)
                    if n < phi1 * a or n > phi2 * a:
                        continue
                    if b * b - 2 * a * cc <= 0:
                        continue
                    if du0 - 2 * k * j * hn * d1 * d1 < 0:
                        continue
                    if r0 != 0:
                        r2 = p2 * d2 - j * q
                        if r1 * r1 * d0 * d2 * hd - 2 * r0 * r2 * hn * d1 * d1 < 0:
                            continue
                    if a * t_u * t_u + 2 * b * t_u * s_u + 2 * cc * s_u * s_u < 0:
                        continue
                    if t_u * a + b * s_u < 0:
                        continue
                    if r0 != 0:
                        sg = 1 if r0 > 0 else -1
                        t_q = r1 * d0 * hd * sg
                        s_q = (r0 if r0 > 0 else -r0) * d1 * hn
                        if a * t_q * t_q + 2 * b * t_q * s_q + 2 * cc * s_q * s_q < 0:
                            continue
                        vert = t_q * a + b * s_q
                        if r0 > 0 and vert < 0:
                            continue
                        if r0 < 0 and vert > 0:
                            continue
                    if count < cap:
                        out[count, 0] = k
                        out[count, 1] = i
                        out[count, 2] = j
                    count += 1
        return count


def _scan_numba(problem: ScanProblem) -> list[tuple[int, int, int]]:
    coef = np.array(problem.coef, dtype=np.int64)
    cap = 256
    while True:
        out = np.zeros((cap, 3), dtype=np.int64)
        count = _scan_kernel(coef, problem.kmin, problem.kmax, problem.imax, problem.jmax, out)
        if count <= cap:
            return [tuple(int(x) for x in row) for row in out[:count]]
        cap = count
