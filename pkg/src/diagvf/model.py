"""Candidate transform assembly, lattice kernel analysis, and the verdict.

The mixture-power transform built from the quartic's distinct real roots is
a Laplace transform of a probability measure exactly when the weights are
uniformly signed with unit total and the exponent is a (CaseA) positive or
(CaseB) even positive integer.  For three or four atoms the argument goes
through an exponent lattice whose left kernel must contain no mixed-sign
integer vector; that check is done in exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from ._num import all_exact, is_exact, near_integer
from .errors import NRootDeficit, UnsupportedArity, WeightCountMismatch
from .roots import DiagonalVFParams, build_characteristic_quartic, dual_ordinate, solve_quartic

__all__ = [
    "CandidateModel",
    "LatticeMatrix",
    "StarReport",
    "AdmissibilityVerdict",
    "make_model",
    "candidate_model",
    "normalize_model",
    "build_lambda_matrix",
    "star_condition",
    "admissibility_verdict",
]


@dataclass(frozen=True)
class CandidateModel:
    """Atoms (lambda_i, nu_i) with weights alpha_i and exponent r = -1/A."""

    atoms: tuple          # of (lambda, nu), pairwise distinct lambda, ascending
    weights: tuple
    r: object             # positive real, Fraction when exact

    def __post_init__(self):
        lams = [a[0] for a in self.atoms]
        if len(lams) != len(self.weights):
            raise WeightCountMismatch(
                f"{len(self.weights)} weights for {len(lams)} atoms")
        if any(lams[i] >= lams[i + 1] for i in range(len(lams) - 1)):
            raise ValueError("atom abscissas must be strictly ascending")
        if not self.r > 0:
            raise ValueError("exponent must be positive")

    @property
    def n_r(self) -> int:
        return len(self.atoms)

    @property
    def is_exact(self) -> bool:
        return (all_exact(self.r, *self.weights)
                and all(all_exact(*a) for a in self.atoms))


def make_model(atoms, weights, r) -> CandidateModel:
    """Build a model, sorting atom/weight pairs by abscissa."""
    pairs = sorted(zip(atoms, weights), key=lambda aw: float(aw[0][0]))
    return CandidateModel(tuple(tuple(a) for a, _ in pairs),
                          tuple(w for _, w in pairs), r)


@dataclass(frozen=True)
class LatticeMatrix:
    """3x3 exponent matrix with exact rational entries."""

    rows: tuple  # of 3-tuples of Fraction

    def __post_init__(self):
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("lattice matrix must be 3x3")
        if not all(isinstance(x, Fraction) for r in self.rows for x in r):
            raise ValueError("lattice matrix entries must be Fractions")


@dataclass(frozen=True)
class StarReport:
    holds: bool
    witness: Optional[tuple] = None
    method: str = "exact-kernel"
    bound: Optional[int] = None


@dataclass(frozen=True)
class AdmissibilityVerdict:
    outcome: str                    # "CaseA" | "CaseB" | "Rejected"
    N: Optional[int] = None
    reason: Optional[str] = None
    theta_domain_full: bool = False
    star: Optional[StarReport] = None
    inconclusive: bool = False

    @property
    def accepted(self) -> bool:
        return self.outcome in ("CaseA", "CaseB")


def candidate_model(p: DiagonalVFParams, weights, tol: float = 1e-8) -> CandidateModel:
    """Atoms over the distinct real roots of the characteristic quartic."""
    rs = solve_quartic(build_characteristic_quartic(p), tol)
    lams = rs.real_roots
    if len(lams) < 2:
        raise NRootDeficit(
            f"characteristic quartic has {len(lams)} distinct real root(s); need >= 2")
    if len(weights) != len(lams):
        raise WeightCountMismatch(
            f"{len(weights)} weights for {len(lams)} distinct real roots")
    atoms = []
    for lam in lams:
        nu, _ = dual_ordinate(lam, p, tol)
        atoms.append((lam, nu))
    r = Fraction(-1) / Fraction(p.A) if is_exact(p.A) else -1.0 / p.A
    return CandidateModel(tuple(atoms), tuple(weights), r)


def normalize_model(m: CandidateModel) -> CandidateModel:
    """Affine change moving the first atom to the origin.

    The new ordinates are lambda_i^2 - lambda_1^2, matching the transformed
    transform whose exponents feed the lattice matrix.
    """
    lam1 = m.atoms[0][0]
    atoms = tuple((lam - lam1, lam * lam - lam1 * lam1) for lam, _ in m.atoms)
    return replace(m, atoms=atoms)


def _to_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def build_lambda_matrix(m: CandidateModel) -> LatticeMatrix:
    """Rows (lambda_i - lambda_1, lambda_i^2 - lambda_1^2, 0), zero-padded."""
    k = m.n_r
    if k not in (3, 4):
        raise UnsupportedArity(f"lattice matrix needs 3 or 4 atoms, got {k}")
    lam1 = _to_fraction(m.atoms[0][0])
    rows = []
    for lam, _ in m.atoms[1:]:
        lam = _to_fraction(lam)
        rows.append((lam - lam1, lam * lam - lam1 * lam1, Fraction(0)))
    while len(rows) < 3:
        rows.append((Fraction(0), Fraction(0), Fraction(0)))
    return LatticeMatrix(tuple(rows))


def _left_kernel_basis(rows):
    """Basis of {a : a^T M = 0} over the rationals, via RREF of M^T."""
    n = len(rows)
    mt = [[rows[j][i] for j in range(n)] for i in range(len(rows[0]))]
    cols = n
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(mt)) if mt[i][c] != 0), None)
        if piv is None:
            continue
        mt[r], mt[piv] = mt[piv], mt[r]
        inv = mt[r][c]
        mt[r] = [x / inv for x in mt[r]]
        for i in range(len(mt)):
            if i != r and mt[i][c] != 0:
                fac = mt[i][c]
                mt[i] = [x - fac * y for x, y in zip(mt[i], mt[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mt[i][fc]
        basis.append(tuple(v))
    return basis


def _primitive_integer(v):
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*(abs(i) for i in ints))
    if g:
        ints = [i // g for i in ints]
    return tuple(ints)


def _mixed_signs(a) -> bool:
    return any(ai * aj < 0 for ai, aj in itertools.combinations(a, 2))


_TRIPLES_CACHE: dict = {}


def _triples(bound: int) -> np.ndarray:
    cached = _TRIPLES_CACHE.get(bound)
    if cached is None:
        side = np.arange(-bound, bound + 1, dtype=np.int64)
        g = np.meshgrid(side, side, side, indexing="ij")
        cached = np.stack([x.ravel() for x in g], axis=1)
        order = np.lexsort((cached[:, 2], cached[:, 1], cached[:, 0],
                            np.abs(cached).max(axis=1)))
        _TRIPLES_CACHE[bound] = cached = cached[order]
    return cached


def star_condition(mat: LatticeMatrix, bound: int = 50) -> StarReport:
    """Decide whether the left kernel contains a mixed-sign integer vector.

    Trivial kernel: holds.  One-dimensional kernel: the sign pattern of the
    primitive integer generator decides, but a generator with entries beyond
    the bound is treated as no solution within reach (witnesses that large
    arise from float-to-rational conversion of irrational abscissas, where
    the underlying real matrix admits no integer relation at all); the
    method field discloses when the bound was decisive.  Higher dimension:
    bounded enumeration over |a_i| <= bound.
    """
    basis = _left_kernel_basis(mat.rows)
    if not basis:
        return StarReport(holds=True, method="exact-kernel")
    if len(basis) == 1:
        g = _primitive_integer(basis[0])
        if not _mixed_signs(g):
            return StarReport(holds=True, method="exact-kernel")
        if max(abs(x) for x in g) <= bound:
            return StarReport(holds=False, witness=g, method="exact-kernel")
        return StarReport(holds=True, method="bounded-search", bound=bound)

    # clear denominators column-wise; integer solutions are unchanged
    cols = []
    for j in range(3):
        den = math.lcm(*(mat.rows[i][j].denominator for i in range(3)))
        cols.append([int(mat.rows[i][j] * den) for i in range(3)])
    M = np.array(cols, dtype=np.int64).T  # 3x3 integer matrix

    triples = _triples(bound)
    prods = triples @ M
    in_kernel = np.all(prods == 0, axis=1)
    mixed = ((triples[:, 0] * triples[:, 1] < 0)
             | (triples[:, 0] * triples[:, 2] < 0)
             | (triples[:, 1] * triples[:, 2] < 0))
    hits = np.flatnonzero(in_kernel & mixed)
    if hits.size:
        w = tuple(int(x) for x in triples[hits[0]])
        return StarReport(holds=False, witness=w, method="bounded-search", bound=bound)
    return StarReport(holds=True, method="bounded-search", bound=bound)


def admissibility_verdict(m: CandidateModel, tol: float = 1e-9,
                          bound: int = 50) -> AdmissibilityVerdict:
    """CaseA / CaseB / Rejected per the sign, sum, and exponent clauses.

    Zero-weight atoms are dropped first.  For three or four effective atoms
    the lattice condition of the normalized model is checked as well; when
    it fails, the verdict is Rejected with an inconclusive flag since the
    characterization is silent in that regime.
    """
    kept = [(a, w) for a, w in zip(m.atoms, m.weights) if w != 0]
    if len(kept) < 2:
        return AdmissibilityVerdict(
            "Rejected", reason="fewer than two atoms with nonzero weight")
    atoms = tuple(a for a, _ in kept)
    weights = tuple(w for _, w in kept)
    eff = CandidateModel(atoms, weights, m.r)

    star = None
    if eff.n_r in (3, 4):
        star = star_condition(build_lambda_matrix(normalize_model(eff)), bound)
        if not star.holds:
            return AdmissibilityVerdict(
                "Rejected", reason="lattice mixed-sign kernel vector exists; "
                "atom masses cannot be identified",
                star=star, inconclusive=True)

    total = sum(weights)
    nonneg = all(w >= -tol for w in weights)
    nonpos = all(w <= tol for w in weights)
    n = near_integer(eff.r, tol)

    if nonneg and not nonpos:
        if abs(float(total) - 1.0) > tol:
            return AdmissibilityVerdict(
                "Rejected", reason="nonnegative weights do not sum to 1", star=star)
        if n is None or n < 1:
            return AdmissibilityVerdict(
                "Rejected", reason="exponent not a positive integer", star=star)
        return AdmissibilityVerdict("CaseA", N=n, theta_domain_full=True, star=star)
    if nonpos and not nonneg:
        if abs(float(total) + 1.0) > tol:
            return AdmissibilityVerdict(
                "Rejected", reason="nonpositive weights do not sum to -1", star=star)
        if n is None or n < 1:
            return AdmissibilityVerdict(
                "Rejected", reason="exponent not a positive integer", star=star)
        if n % 2 != 0:
            return AdmissibilityVerdict(
                "Rejected", reason="exponent not an even positive integer", star=star)
        return AdmissibilityVerdict("CaseB", N=n, theta_domain_full=True, star=star)
    return AdmissibilityVerdict(
        "Rejected", reason="weights have mixed signs", star=star)
