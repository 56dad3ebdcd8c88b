"""Characteristic quartic construction, root solving, and classification.

The variance-function parameters determine a monic quartic whose distinct
real roots are the admissible atom abscissas.  Each real root carries a
dual ordinate obtained by solving the first coordinate relation for the
second coordinate; the second coordinate relation then vanishes identically
at exact roots (the residual times b^2 is the quartic itself).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._num import Number, all_exact
from .errors import NotARoot

__all__ = [
    "DiagonalVFParams",
    "Quartic",
    "RootSet",
    "RootPattern",
    "build_characteristic_quartic",
    "build_dual_quartic",
    "solve_quartic",
    "classify_root_pattern",
    "dual_ordinate",
]


@dataclass(frozen=True)
class DiagonalVFParams:
    """Coefficients of the quadratic diagonal variance function.

    diag V(m1, m2) = (A m1^2 + a m1 + b m2 + e,  A m2^2 + c m1 + d m2 + f)
    with A < 0 and b != 0.
    """

    A: Number
    a: Number
    b: Number
    c: Number
    d: Number
    e: Number
    f: Number

    def __post_init__(self):
        if not self.A < 0:
            raise ValueError(f"A must be strictly negative, got {self.A}")
        if self.b == 0:
            raise ValueError("b must be nonzero")

    @property
    def is_exact(self) -> bool:
        return all_exact(self.A, self.a, self.b, self.c, self.d, self.e, self.f)

    def as_tuple(self):
        return (self.A, self.a, self.b, self.c, self.d, self.e, self.f)


@dataclass(frozen=True)
class Quartic:
    """Monic quartic; coeffs = (c0, c1, c2, c3, c4) with c4 == 1."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 5 or self.coeffs[4] != 1:
            raise ValueError("quartic must be monic with five coefficients")

    @property
    def is_exact(self) -> bool:
        return all_exact(*self.coeffs)

    def __call__(self, x):
        c0, c1, c2, c3, c4 = self.coeffs
        return (((c4 * x + c3) * x + c2) * x + c1) * x + c0

    def derivative(self, x):
        c0, c1, c2, c3, c4 = self.coeffs
        return ((4 * c4 * x + 3 * c3) * x + 2 * c2) * x + c1

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(float(c)) for c in self.coeffs)


@dataclass(frozen=True)
class RootSet:
    """Quartic roots with multiplicities; complex entries come in conjugate pairs."""

    entries: tuple  # of (value, multiplicity)

    def __post_init__(self):
        if sum(m for _, m in self.entries) != 4:
            raise ValueError("multiplicities must sum to 4")

    @property
    def real_entries(self):
        return [(v, m) for v, m in self.entries if not isinstance(v, complex)]

    @property
    def complex_entries(self):
        return [(v, m) for v, m in self.entries if isinstance(v, complex)]

    @property
    def real_roots(self):
        return sorted(v for v, _ in self.real_entries)

    @property
    def n_r(self) -> int:
        return len(self.real_entries)


class RootPattern(enum.Enum):
    FOUR_SINGLE_REAL = "FourSingleReal"
    DOUBLE_PLUS_TWO_SINGLE_REAL = "DoublePlusTwoSingleReal"
    SINGLE_PLUS_TRIPLE_REAL = "SinglePlusTripleReal"
    QUADRUPLE_REAL = "QuadrupleReal"
    TWO_DOUBLE_REAL = "TwoDoubleReal"
    TWO_REAL_TWO_COMPLEX = "TwoRealTwoComplex"
    FOUR_COMPLEX = "FourComplex"
    TWO_DOUBLE_COMPLEX = "TwoDoubleComplex"
    DOUBLE_REAL_PLUS_COMPLEX_PAIR = "DoubleRealPlusComplexPair"


def build_characteristic_quartic(p: DiagonalVFParams) -> Quartic:
    """Monic quartic in the first-coordinate abscissa lambda."""
    A, a, b, c, d, e, f = p.as_tuple()
    return Quartic((
        A * A * e * e - e * d * b * A + f * b * b * A,
        -(2 * A * a * e - a * d * b + c * b * b),
        2 * A * e + a * a - d * b,
        -2 * a,
        1,
    ))


def build_dual_quartic(p: DiagonalVFParams) -> Quartic:
    """Monic quartic in the second-coordinate ordinate nu."""
    A, a, b, c, d, e, f = p.as_tuple()
    return Quartic((
        A * A * f * f - a * c * f * A + e * c * c * A,
        -(b * c * c - a * c * d + 2 * d * f * A),
        2 * A * f - a * c + d * d,
        -2 * d,
        1,
    ))


def _rational_roots(q: Quartic):
    """Extract exact rational roots with multiplicities by trial division.

    Returns (list of (Fraction, mult), remaining coefficient list ascending).
    Only called when all coefficients are exact.
    """
    coeffs = [Fraction(c) for c in q.coeffs]
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]  # integer polynomial, ascending

    def divisors(n):
        n = abs(n)
        out = set()
        i = 1
        while i * i <= n:
            if n % i == 0:
                out.add(i)
                out.add(n // i)
            i += 1
        return out

    def deflate(poly, r):
        # synthetic division of ascending-coefficient poly by (x - r)
        desc = poly[::-1]
        out = [desc[0]]
        for c in desc[1:]:
            out.append(c + r * out[-1])
        if out[-1] != 0:
            return None
        return [Fraction(c) for c in out[:-1][::-1]]

    poly = [Fraction(c) for c in coeffs]
    found = []
    # zero roots first
    mult0 = 0
    while poly[0] == 0 and len(poly) > 1:
        poly = poly[1:]
        mult0 += 1
    if mult0:
        found.append((Fraction(0), mult0))
    if len(poly) > 1 and abs(ints[0]) <= 10**12 and abs(ints[-1]) <= 10**12:
        cden = math.lcm(*(c.denominator for c in poly))
        ip = [int(c * cden) for c in poly]
        for pnum in sorted(divisors(ip[0]) or {1}):
            for qden in sorted(divisors(ip[-1]) or {1}):
                for sign in (1, -1):
                    r = Fraction(sign * pnum, qden)
                    mult = 0
                    while len(poly) > 1:
                        deflated = deflate(poly, r)
                        if deflated is None:
                            break
                        poly = deflated
                        mult += 1
                    if mult:
                        found.append((r, mult))
                if len(poly) == 1:
                    break
            if len(poly) == 1:
                break
    return found, poly


def _cluster(values, tol: float):
    """Single-linkage clustering of complex values; returns (mean, count) list."""
    groups: list[list[complex]] = []
    for v in values:
        placed = False
        for g in groups:
            if any(abs(v - w) <= tol for w in g):
                g.append(v)
                placed = True
                break
        if not placed:
            groups.append([v])
    # merge groups that became adjacent
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(abs(u - w) <= tol for u in groups[i] for w in groups[j]):
                    groups[i].extend(groups[j])
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    return [(sum(g) / len(g), len(g)) for g in groups]


def _polish(q: Quartic, r: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        d = q.derivative(r)
        if abs(d) < 1e-12 * q.scale:
            break
        step = q(r) / d
        if abs(step) > 1.0:
            break
        r = r - step
    return r


def solve_quartic(q: Quartic, tol: float = 1e-8) -> RootSet:
    """All four roots with multiplicities.

    Exact rational roots are extracted exactly when the coefficients are
    exact; the remainder is solved via companion-matrix eigenvalues with
    Newton polishing, proximity clustering, and real-axis snapping.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    cluster_tol = tol * q.scale
    entries = []
    residual_poly = None
    if q.is_exact:
        exact, residual_poly = _rational_roots(q)
        entries.extend(exact)
        numeric_coeffs = [float(c) for c in residual_poly]
    else:
        numeric_coeffs = [float(c) for c in q.coeffs]

    if len(numeric_coeffs) > 1:
        raw = np.roots(numeric_coeffs[::-1])
        raw = [_polish(q, complex(r)) for r in raw]
        for v, m in _cluster(raw, cluster_tol):
            if abs(v.imag) <= cluster_tol:
                entries.append((v.real, m))
            else:
                entries.append((v, m))

    # enforce exact conjugate pairing of complex entries
    fixed = []
    pos = [(v, m) for v, m in entries if isinstance(v, complex) and v.imag > 0]
    neg = [(v, m) for v, m in entries if isinstance(v, complex) and v.imag < 0]
    fixed.extend((v, m) for v, m in entries if not isinstance(v, complex))
    neg_left = list(neg)
    for v, m in pos:
        j = min(range(len(neg_left)), key=lambda i: abs(neg_left[i][0] - v.conjugate()))
        w, mw = neg_left.pop(j)
        z = (v + w.conjugate()) / 2
        fixed.append((z, min(m, mw) if m != mw else m))
        fixed.append((z.conjugate(), min(m, mw) if m != mw else mw))
    fixed.extend(neg_left)

    fixed.sort(key=lambda em: (float(em[0].real) if isinstance(em[0], complex)
                               else float(em[0]),
                               em[0].imag if isinstance(em[0], complex) else 0.0))
    rs = RootSet(tuple(fixed))
    for v, _ in rs.entries:
        res = abs(complex(q(v)))
        if res > tol * max(1.0, abs(complex(v)) ** 4) * q.scale:
            raise ArithmeticError(f"root residual too large at {v}: {res}")
    return rs


def classify_root_pattern(r: RootSet) -> RootPattern:
    """One of the nine multiplicity patterns of a real quartic."""
    real = sorted((m for _, m in r.real_entries), reverse=True)
    cpx = sorted((m for v, m in r.complex_entries if v.imag > 0), reverse=True)
    key = (tuple(real), tuple(cpx))
    table = {
        ((1, 1, 1, 1), ()): RootPattern.FOUR_SINGLE_REAL,
        ((2, 1, 1), ()): RootPattern.DOUBLE_PLUS_TWO_SINGLE_REAL,
        ((3, 1), ()): RootPattern.SINGLE_PLUS_TRIPLE_REAL,
        ((4,), ()): RootPattern.QUADRUPLE_REAL,
        ((2, 2), ()): RootPattern.TWO_DOUBLE_REAL,
        ((1, 1), (1,)): RootPattern.TWO_REAL_TWO_COMPLEX,
        ((), (1, 1)): RootPattern.FOUR_COMPLEX,
        ((), (2,)): RootPattern.TWO_DOUBLE_COMPLEX,
        ((2,), (1,)): RootPattern.DOUBLE_REAL_PLUS_COMPLEX_PAIR,
    }
    try:
        return table[key]
    except KeyError:  # pragma: no cover - RootSet invariants preclude this
        raise ValueError(f"unclassifiable multiplicity pattern {key}")


def dual_ordinate(lam, p: DiagonalVFParams, tol: float = 1e-8):
    """Ordinate paired with a real abscissa, plus the second-relation residual.

    nu = (lam^2 - a*lam + e*A) / b; residual = nu^2 - c*lam - d*nu + f*A.
    The residual equals q(lam)/b^2 identically, so it vanishes at exact roots.
    """
    q = build_characteristic_quartic(p)
    qres = abs(float(q(lam)))
    if qres > tol * max(1.0, abs(float(lam)) ** 4) * q.scale:
        raise NotARoot(f"{lam} is not a root of the characteristic quartic (residual {qres})")
    A, a, b, c, d, e, f = p.as_tuple()
    nu = (lam * lam - a * lam + e * A) / b
    residual = nu * nu - c * lam - d * nu + f * A
    return nu, residual
