"""Series-coefficient arguments: generalized binomial expansion around a
dominant atom, first-negative-coefficient detection for non-integer
exponents, and characteristic-function magnitude scans that certify
unboundedness of inadmissible transform shapes.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._num import falling_factorial, is_exact, near_integer
from .errors import NoDominantAtom, NotNormalized
from .model import CandidateModel

__all__ = [
    "SeriesReport",
    "EliminationForm",
    "expand_series",
    "first_negative_coefficient",
    "magnitude_scan",
]

_KEY_TOL = 1e-9
_PROBE_DIRECTIONS = (
    (0.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0),
    (-1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (1.0, -1.0),
    (-1.0, -1e-3), (1.0, 1e-3),
)


@dataclass(frozen=True)
class SeriesReport:
    depth: int
    terms: dict           # support point -> coefficient
    first_negative: Optional[tuple]   # (point, coefficient)
    complete: bool
    pivot: int
    probe: tuple


@dataclass(frozen=True)
class EliminationForm:
    """Function shapes eliminated by the boundedness lemmas.

    f(t) = poly(t) + sum A_i exp(l_i t) + B t exp(g t)
           + sum_j exp(l_j t) [ (A0_j + t B0_j) cos(g_j t)
                              + (A1_j + t B1_j) sin(g_j t) ]
    """

    poly: tuple = ()                 # ascending coefficients
    exp_terms: tuple = ()            # of (A_i, lambda_i)
    linexp: Optional[tuple] = None   # (B, gamma)
    osc_blocks: tuple = ()           # of (lambda, gamma, A0, A1, B0, B1)

    def __post_init__(self):
        if not (self.poly or self.exp_terms or self.linexp or self.osc_blocks):
            raise ValueError("at least one block must be present")

    def eval_imag(self, t: float) -> complex:
        """f(i t) by direct complex evaluation."""
        z = 1j * t
        val = 0j
        for k, c in enumerate(self.poly):
            val += c * z ** k
        for amp, lam in self.exp_terms:
            val += amp * cmath.exp(lam * z)
        if self.linexp is not None:
            B, g = self.linexp
            val += B * z * cmath.exp(g * z)
        for lam, g, a0, a1, b0, b1 in self.osc_blocks:
            val += cmath.exp(lam * z) * ((a0 + z * b0) * cmath.cos(g * z)
                                         + (a1 + z * b1) * cmath.sin(g * z))
        return val


def _find_probe(atoms, weights, pivot):
    """Probe theta* with sum_{i != pivot} |alpha_i/alpha_p| e^<w_i,theta*> < 1."""
    wp = abs(float(weights[pivot]))
    diffs = [(float(a[0]) - float(atoms[pivot][0]),
              float(a[1]) - float(atoms[pivot][1]))
             for i, a in enumerate(atoms) if i != pivot]
    betas = [abs(float(w)) / wp for i, w in enumerate(weights) if i != pivot]
    for u in _PROBE_DIRECTIONS:
        for t in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0):
            theta = (u[0] * t, u[1] * t)
            total = sum(b * math.exp(d[0] * theta[0] + d[1] * theta[1])
                        for b, d in zip(betas, diffs))
            if total < 0.999:
                return theta
            if u == (0.0, 0.0):
                break
    raise NoDominantAtom("no probe point strictly dominates the pivot atom")


def expand_series(m: CandidateModel, depth: int = 8) -> SeriesReport:
    """Coefficients of the mixture power, aggregated by support point.

    Terms are keyed by the absolute support point r*v_pivot + sum n_i w_i,
    so for an integer exponent they coincide with the convolution masses.
    Exact rational arithmetic is used when the model is exact.
    """
    weights = m.weights
    flip = all(w <= 0 for w in weights) and any(w < 0 for w in weights)
    if flip:
        weights = tuple(-w for w in weights)
    pivot = max(range(len(weights)), key=lambda i: abs(float(weights[i])))
    if not float(weights[pivot]) > 0:
        raise NoDominantAtom("pivot weight is not positive")
    probe = _find_probe(m.atoms, weights, pivot)

    exact = m.is_exact
    r = m.r
    n_int = near_integer(r, 1e-12)
    ap = weights[pivot]
    others = [i for i in range(len(weights)) if i != pivot]
    betas = [weights[i] / ap for i in others]
    wdiffs = [(m.atoms[i][0] - m.atoms[pivot][0],
               m.atoms[i][1] - m.atoms[pivot][1]) for i in others]
    base = (r * m.atoms[pivot][0], r * m.atoms[pivot][1])
    lead = ap ** n_int if (exact and n_int is not None) else float(ap) ** float(r)

    terms: dict = {}
    reps: dict = {}
    order_of: dict = {}

    def key_of(pt):
        if exact:
            return (Fraction(pt[0]), Fraction(pt[1]))
        return (round(float(pt[0]) / _KEY_TOL), round(float(pt[1]) / _KEY_TOL))

    max_j = depth if (n_int is None or n_int > depth) else n_int
    for j in range(max_j + 1):
        ff = falling_factorial(r, j)
        if ff == 0:
            continue
        cj = lead * ff / (math.factorial(j) if exact else float(math.factorial(j)))
        for ns in itertools.product(range(j + 1), repeat=len(others)):
            if sum(ns) != j:
                continue
            mult = math.factorial(j)
            for n in ns:
                mult //= math.factorial(n)
            coef = cj * mult
            for b, n in zip(betas, ns):
                coef = coef * b ** n
            pt = (base[0] + sum(n * d[0] for n, d in zip(ns, wdiffs)),
                  base[1] + sum(n * d[1] for n, d in zip(ns, wdiffs)))
            key = key_of(pt)
            terms[key] = terms.get(key, Fraction(0) if exact else 0.0) + coef
            reps.setdefault(key, pt)
            order_of[key] = min(order_of.get(key, j), j)

    first_negative = None
    for key in sorted(terms, key=lambda k: (order_of[k], float(k[0]), float(k[1]))):
        if terms[key] < -1e-12:
            first_negative = (reps[key], terms[key])
            break
    out_terms = {reps[k]: terms[k] for k in sorted(
        terms, key=lambda k: (float(k[0]), float(k[1])))}
    return SeriesReport(depth=depth, terms=out_terms,
                        first_negative=first_negative,
                        complete=(n_int is not None and n_int <= max_j) or max_j == depth,
                        pivot=pivot, probe=probe)


def first_negative_coefficient(a1, a2, r, depth: int = 8,
                               tol: float = 1e-9) -> Optional[int]:
    """Least k <= depth whose expansion coefficient of e^(k theta) is negative.

    The coefficient is a1^r * [r(r-1)...(r-k+1)/k!] * (a2/a1)^k.  For an
    all-nonpositive pair summing to -1 the signs are flipped first (even
    exponent), matching the mirrored branch of the two-atom argument.
    """
    total = float(a1) + float(a2)
    if abs(total - 1.0) <= tol:
        pass
    elif abs(total + 1.0) <= tol:
        a1, a2 = -a1, -a2
    else:
        raise NotNormalized(f"weights sum to {total}, expected +1 or -1")
    if not a1 > 0:
        raise NotNormalized("dominant weight must be positive after sign flip")
    exact = is_exact(a1) and is_exact(a2) and is_exact(r)
    lead = None
    n_int = near_integer(r, 1e-12)
    if exact and n_int is not None:
        lead = a1 ** n_int
    else:
        lead = float(a1) ** float(r)
    ratio = a2 / a1 if exact else float(a2) / float(a1)
    for k in range(1, depth + 1):
        coef = lead * falling_factorial(r, k) * ratio ** k
        coef = coef / math.factorial(k)
        if (exact and coef < 0) or (not exact and coef < -1e-15):
            return k
    return None


def magnitude_scan(f: EliminationForm, r, t_grid) -> Optional[float]:
    """First grid t with |f(it)|^r > 1 + 1e-6, or None.

    A finite witness certifies that f^r cannot be a Laplace transform of a
    probability measure: the characteristic-function magnitude would exceed
    its value at zero.  Only the magnitude is used, so no branch of the
    complex power is ever chosen.
    """
    rf = float(r)
    for t in t_grid:
        t = float(t)
        try:
            mag = abs(f.eval_imag(t)) ** rf
        except OverflowError:
            return t
        if math.isinf(mag) or mag > 1.0 + 1e-6:
            return t
    return None
