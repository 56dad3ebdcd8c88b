"""Finite atomic measures, cumulant calculus, and identity verification.

An accepted model is realized as the N-fold convolution of the atomic
mixture; masses stay exact rationals whenever the inputs are exact.  All
identity checks are parameterized by theta so that collinear (degenerate)
supports remain checkable without inverting a singular mean map.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ._num import all_exact
from .errors import Degenerate, DomainViolation, NotAdmissible, OutOfMeanDomain
from .model import AdmissibilityVerdict, CandidateModel
from .roots import DiagonalVFParams

__all__ = [
    "FiniteMeasure",
    "DiagCheckReport",
    "RegressionReport",
    "realize_measure",
    "cumulant_eval",
    "mean_to_theta",
    "diag_variance_check",
    "regression_check",
    "tilt_member",
    "fd_hessian",
]

_MERGE_TOL = 1e-9


def _collinear(points) -> bool:
    if len(points) <= 2:
        return True
    x0, y0 = points[0]
    for (x1, y1), (x2, y2) in itertools.combinations(points[1:], 2):
        cross = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if abs(float(cross)) > 1e-12:
            return False
    return True


@dataclass(frozen=True)
class FiniteMeasure:
    """Finitely supported probability measure in the plane."""

    support: tuple   # of (x1, x2)
    masses: tuple    # positive, summing to 1

    def __post_init__(self):
        if len(self.support) != len(self.masses):
            raise ValueError("support/mass length mismatch")
        if any(not m > 0 for m in self.masses):
            raise ValueError("masses must be positive")
        if abs(float(sum(self.masses)) - 1.0) > 1e-12:
            raise ValueError("masses must sum to 1")

    @property
    def degenerate(self) -> bool:
        """True when the support lies on a single affine line."""
        return _collinear(self.support)

    @property
    def is_exact(self) -> bool:
        return (all_exact(*self.masses)
                and all(all_exact(*x) for x in self.support))

    def laplace(self, theta) -> float:
        t1, t2 = float(theta[0]), float(theta[1])
        return float(sum(float(m) * math.exp(t1 * float(x[0]) + t2 * float(x[1]))
                         for x, m in zip(self.support, self.masses)))


@dataclass(frozen=True)
class DiagCheckReport:
    max_dev: float
    tol: float
    n_points: int
    worst_theta: tuple

    @property
    def passed(self) -> bool:
        return self.max_dev <= self.tol


@dataclass(frozen=True)
class RegressionReport:
    max_dev: float
    tol: float
    exact: bool
    n_groups: int

    @property
    def passed(self) -> bool:
        return self.max_dev <= self.tol


def _merge_key(pt, exact: bool):
    if exact:
        return (Fraction(pt[0]), Fraction(pt[1]))
    return (round(float(pt[0]) / _MERGE_TOL), round(float(pt[1]) / _MERGE_TOL))


def realize_measure(m: CandidateModel, verdict: AdmissibilityVerdict) -> FiniteMeasure:
    """N-fold convolution of the atomic mixture with weights |alpha_i|."""
    if not verdict.accepted:
        raise NotAdmissible(f"verdict is {verdict.outcome}: {verdict.reason}")
    N = verdict.N
    alphas = [abs(w) for w in m.weights]
    exact = m.is_exact
    k = len(alphas)
    acc: dict = {}
    reps: dict = {}
    for ns in itertools.product(range(N + 1), repeat=k):
        if sum(ns) != N:
            continue
        coef = math.factorial(N)
        for n in ns:
            coef //= math.factorial(n)
        mass = (Fraction(coef) if exact else float(coef))
        for a, n in zip(alphas, ns):
            mass = mass * a ** n
        if mass == 0:
            continue
        pt = (sum(n * v[0] for n, v in zip(ns, m.atoms)),
              sum(n * v[1] for n, v in zip(ns, m.atoms)))
        key = _merge_key(pt, exact)
        acc[key] = acc.get(key, Fraction(0) if exact else 0.0) + mass
        reps.setdefault(key, pt)
    keys = sorted(acc, key=lambda kk: (float(kk[0]), float(kk[1])))
    return FiniteMeasure(tuple(reps[kk] for kk in keys),
                         tuple(acc[kk] for kk in keys))


def _mixture_stats(m: CandidateModel, theta):
    """Per-atom probabilities of the exponentially tilted single mixture."""
    t = np.asarray([float(theta[0]), float(theta[1])])
    V = np.array([[float(a[0]), float(a[1])] for a in m.atoms])
    w = np.array([float(x) for x in m.weights])
    if np.all(w >= 0) or np.all(w <= 0):
        w = np.abs(w)
    z = V @ t
    ew = w * np.exp(z - z.max())
    total = ew.sum()
    if not total > 0:
        raise DomainViolation(f"mixture transform nonpositive at theta={theta}")
    log_s = z.max() + math.log(total)
    p = ew / total
    return log_s, p, V


def cumulant_eval(m: CandidateModel, theta):
    """Cumulant value, mean vector, and covariance matrix at theta."""
    log_s, p, V = _mixture_stats(m, theta)
    N = float(m.r)
    k = N * log_s
    mean = N * (p @ V)
    centered = V - p @ V
    cov = N * (centered.T * p) @ centered
    cov = (cov + cov.T) / 2
    return k, mean, cov


def _hull_equations(m: CandidateModel):
    pts = np.array([[float(a[0]), float(a[1])] for a in m.atoms])
    try:
        hull = ConvexHull(pts)
    except QhullError:
        raise Degenerate("atoms are collinear; mean map is singular")
    return hull.equations


def mean_to_theta(m: CandidateModel, target, tol: float = 1e-10,
                  max_iter: int = 100):
    """Invert the mean map by damped Newton iteration from the origin."""
    N = float(m.r)
    eqs = _hull_equations(m)
    t = np.asarray([float(target[0]), float(target[1])]) / N
    margin = eqs[:, :2] @ t + eqs[:, 2]
    if margin.max() > -1e-9:
        raise OutOfMeanDomain(
            f"target {tuple(target)} not interior to the domain of means")

    theta = np.zeros(2)
    goal = np.asarray([float(target[0]), float(target[1])])
    _, mean, _ = cumulant_eval(m, theta)
    res = np.linalg.norm(mean - goal)
    for _ in range(max_iter):
        if res <= tol:
            return tuple(theta)
        _, mean, cov = cumulant_eval(m, theta)
        try:
            step = np.linalg.solve(cov, goal - mean)
        except np.linalg.LinAlgError:
            raise Degenerate("singular covariance during Newton iteration")
        s = 1.0
        for _ in range(60):
            cand = theta + s * step
            _, mc, _ = cumulant_eval(m, cand)
            rc = np.linalg.norm(mc - goal)
            if rc < res:
                theta, res = cand, rc
                break
            s /= 2
        else:
            break
    if res <= tol:
        return tuple(theta)
    raise OutOfMeanDomain(
        f"Newton iteration stalled at residual {res:.3e} for target {tuple(target)}")


def diag_variance_check(m: CandidateModel, p: DiagonalVFParams,
                        theta_grid=None, tol: float = 1e-8) -> DiagCheckReport:
    """Compare both covariance diagonal entries to their quadratic forms.

    Evaluated along the theta-parametrized mean curve, so no mean-map
    inversion is needed and collinear supports are checkable too.
    """
    if theta_grid is None:
        axis = np.linspace(-1.0, 1.0, 11)
        theta_grid = [(t1, t2) for t1 in axis for t2 in axis]
    A, a, b, c, d, e, f = (float(x) for x in p.as_tuple())
    max_dev = -1.0
    worst = (0.0, 0.0)
    for theta in theta_grid:
        _, mean, cov = cumulant_eval(m, theta)
        m1, m2 = mean
        d1 = abs(cov[0, 0] - (A * m1 * m1 + a * m1 + b * m2 + e))
        d2 = abs(cov[1, 1] - (A * m2 * m2 + c * m1 + d * m2 + f))
        dev = float(max(d1, d2))
        if dev > max_dev:
            max_dev, worst = dev, (float(theta[0]), float(theta[1]))
    return DiagCheckReport(max_dev=max_dev, tol=tol,
                           n_points=len(theta_grid), worst_theta=worst)


def regression_check(mu: FiniteMeasure, p: DiagonalVFParams,
                     tol: float = 1e-10) -> RegressionReport:
    """Conditional-expectation identities for an i.i.d. pair, by enumeration.

    Exact rational arithmetic whenever the measure and parameters are exact,
    in which case a passing check has deviation exactly zero.
    """
    exact = mu.is_exact and p.is_exact
    A, a, b, c, d, e, f = p.as_tuple()
    if not exact:
        A, a, b, c, d, e, f = (float(x) for x in (A, a, b, c, d, e, f))
    groups: dict = {}
    for (x, wx), (y, wy) in itertools.product(
            zip(mu.support, mu.masses), repeat=2):
        if not exact:
            x = (float(x[0]), float(x[1]))
            y = (float(y[0]), float(y[1]))
            wx, wy = float(wx), float(wy)
        s = (x[0] + y[0], x[1] + y[1])
        key = _merge_key(s, exact)
        w = wx * wy
        g1 = (x[0] - y[0]) ** 2 - 2 * A * x[0] * y[0]
        g2 = (x[1] - y[1]) ** 2 - 2 * A * x[1] * y[1]
        den, n1, n2, srep = groups.get(
            key, (Fraction(0) if exact else 0.0,) * 3 + (s,))
        groups[key] = (den + w, n1 + w * g1, n2 + w * g2, srep)
    max_dev = Fraction(0) if exact else 0.0
    for den, n1, n2, s in groups.values():
        lhs1 = n1 / den
        lhs2 = n2 / den
        dev1 = abs(lhs1 - (a * s[0] + b * s[1] + 2 * e))
        dev2 = abs(lhs2 - (c * s[0] + d * s[1] + 2 * f))
        max_dev = max(max_dev, dev1, dev2)
    return RegressionReport(max_dev=float(max_dev), tol=tol, exact=exact,
                            n_groups=len(groups))


def tilt_member(mu: FiniteMeasure, theta) -> FiniteMeasure:
    """Exponentially tilted member: mass(x) -> mass(x) e^<theta,x> / L(theta)."""
    if theta[0] == 0 and theta[1] == 0:
        return mu
    t1, t2 = float(theta[0]), float(theta[1])
    logs = [math.log(float(m)) + t1 * float(x[0]) + t2 * float(x[1])
            for x, m in zip(mu.support, mu.masses)]
    top = max(logs)
    raw = [math.exp(v - top) for v in logs]
    z = sum(raw)
    return FiniteMeasure(mu.support, tuple(v / z for v in raw))


def fd_hessian(m: CandidateModel, theta, h: float = 1e-4):
    """Central-difference Hessian of the cumulant; independent covariance oracle."""
    if not h > 0:
        raise ValueError("h must be positive")

    def k(t1, t2):
        val, _, _ = cumulant_eval(m, (t1, t2))
        return val

    t1, t2 = float(theta[0]), float(theta[1])
    k0 = k(t1, t2)
    h11 = (k(t1 + h, t2) - 2 * k0 + k(t1 - h, t2)) / h ** 2
    h22 = (k(t1, t2 + h) - 2 * k0 + k(t1, t2 - h)) / h ** 2
    h12 = (k(t1 + h, t2 + h) + k(t1 - h, t2 - h)
           - k(t1 + h, t2 - h) - k(t1 - h, t2 + h)) / (4 * h ** 2)
    return np.array([[h11, h12], [h12, h22]])
