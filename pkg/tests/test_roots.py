import math
from fractions import Fraction as F

import numpy as np
import pytest

from diagvf import (DiagonalVFParams, NotARoot, Quartic, RootPattern,
                    build_characteristic_quartic, build_dual_quartic,
                    classify_root_pattern, dual_ordinate, solve_quartic)

E1 = DiagonalVFParams(F(-1), F(0), F(1), F(0), F(1), F(0), F(0))
P2 = DiagonalVFParams(F(-1), F(0), F(1), F(0), F(-1), F(1), F(0))


def random_params(rng):
    A = -rng.uniform(0.1, 3.0)
    a, c, d, e, f = rng.uniform(-2, 2, size=5)
    b = rng.uniform(0.3, 2.0) * rng.choice([-1, 1])
    return DiagonalVFParams(A, a, b, c, d, e, f)


class TestBuildQuartic:
    def test_e1(self):
        q = build_characteristic_quartic(E1)
        assert q.coeffs == (0, 0, -1, 0, 1)

    def test_p2(self):
        # 2Ae = -2, -db = +1, constant A^2 e^2 - edbA = 1 - 1 = 0
        q = build_characteristic_quartic(P2)
        assert q.coeffs == (0, 0, -1, 0, 1)

    def test_double_root_case(self):
        p = DiagonalVFParams(-1, 1, 1, 0, 0, 0, 0)
        q = build_characteristic_quartic(p)
        assert q.coeffs == (0, 0, 1, -2, 1)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            DiagonalVFParams(1, 0, 1, 0, 0, 0, 0)
        with pytest.raises(ValueError):
            DiagonalVFParams(-1, 0, 0, 0, 0, 0, 0)


class TestDualQuartic:
    def test_e1(self):
        q = build_dual_quartic(E1)
        assert q.coeffs == (0, 0, 1, -2, 1)

    def test_p2(self):
        q = build_dual_quartic(P2)
        assert q.coeffs == (0, 0, 1, 2, 1)

    def test_all_second_row_zero(self):
        p = DiagonalVFParams(-1, 1, 2, 0, 0, 1, 0)
        q = build_dual_quartic(p)
        assert q.coeffs[:4] == (0, 0, 0, 0)

    def test_dual_roots_match_dual_ordinates(self):
        # dual quartic roots must be the ordinates of the primal real roots
        for p in (E1, P2):
            prim = solve_quartic(build_characteristic_quartic(p))
            dual = solve_quartic(build_dual_quartic(p))
            nus = {dual_ordinate(lam, p)[0] for lam in prim.real_roots}
            dual_reals = {v for v, _ in dual.real_entries}
            assert nus <= dual_reals


class TestSolveQuartic:
    def test_e1_roots(self):
        rs = solve_quartic(Quartic((0, 0, -1, 0, 1)))
        assert dict((v, m) for v, m in rs.entries) == {-1: 1, 0: 2, 1: 1}
        assert rs.n_r == 3

    def test_quadruple_zero(self):
        rs = solve_quartic(Quartic((0, 0, 0, 0, 1)))
        assert rs.entries == ((F(0), 4),)
        assert rs.n_r == 1

    def test_eighth_roots_of_unity(self):
        rs = solve_quartic(Quartic((1, 0, 0, 0, 1)))
        assert rs.n_r == 0
        s = math.sqrt(2) / 2
        got = sorted((round(v.real, 9), round(v.imag, 9)) for v, _ in rs.entries)
        want = sorted((round(sr, 9), round(si, 9))
                      for sr in (-s, s) for si in (-s, s))
        assert got == want

    def test_multiplicities_sum_to_four(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            q = build_characteristic_quartic(random_params(rng))
            rs = solve_quartic(q)
            assert sum(m for _, m in rs.entries) == 4

    def test_conjugate_pairing(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            q = build_characteristic_quartic(random_params(rng))
            rs = solve_quartic(q)
            cpx = sorted((v for v, _ in rs.complex_entries),
                         key=lambda z: (z.real, z.imag))
            assert len(cpx) % 2 == 0
            for z in cpx:
                assert z.conjugate() in cpx


def _vieta_coeffs(rs):
    roots = []
    for v, m in rs.entries:
        roots.extend([complex(v)] * m)
    poly = np.poly(np.array(roots))  # descending, monic
    return poly[::-1].real


class TestVieta:
    def test_random_params(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            q = build_characteristic_quartic(random_params(rng))
            rs = solve_quartic(q)
            rebuilt = _vieta_coeffs(rs)
            scale = max(1.0, max(abs(float(c)) for c in q.coeffs))
            for c_new, c_old in zip(rebuilt, q.coeffs):
                assert abs(c_new - float(c_old)) <= 1e-8 * scale


def _poly_gcd_degree(coeffs):
    """Degree of approximate gcd(q, q') via repeated division with tolerance."""
    def norm(p):
        m = np.abs(p).max()
        return p / m if m > 0 else p

    def trim(p, tol=1e-8):
        i = 0
        while i < len(p) - 1 and abs(p[i]) < tol:
            i += 1
        return p[i:]

    a = np.array([float(c) for c in coeffs][::-1])
    b = np.polyder(a)
    a, b = norm(a), norm(trim(b))
    for _ in range(10):
        if len(b) == 1 and abs(b[0]) <= 1e-8:
            return len(a) - 1
        _, r = np.polydiv(a, b)
        if np.abs(r).max() <= 1e-8:
            return len(b) - 1
        a, b = b, norm(trim(r))
    return 0


class TestMultiplicityOracle:
    @pytest.mark.parametrize("roots", [
        (0.0, 1.0, -1.0, 2.0),
        (0.5, 0.5, 1.5, -2.0),
        (1.0, 1.0, 1.0, -1.0),
        (2.0, 2.0, 2.0, 2.0),
        (1.0, 1.0, -1.0, -1.0),
    ])
    def test_gcd_degree_matches(self, roots):
        coeffs = np.poly(roots)[::-1]
        # exact coefficients so multiplicity detection is not float-limited
        q = Quartic(tuple(F(float(c)) for c in coeffs[:-1]) + (1,))
        rs = solve_quartic(q)
        assert _poly_gcd_degree(q.coeffs) == 4 - len(rs.entries)


class TestClassification:
    CASES = [
        ((0.0, 1.0, -1.0, 3.0), RootPattern.FOUR_SINGLE_REAL),
        ((0.0, 0.0, 1.0, -1.0), RootPattern.DOUBLE_PLUS_TWO_SINGLE_REAL),
        ((1.0, 1.0, 1.0, -2.0), RootPattern.SINGLE_PLUS_TRIPLE_REAL),
        ((2.0, 2.0, 2.0, 2.0), RootPattern.QUADRUPLE_REAL),
        ((1.0, 1.0, -1.0, -1.0), RootPattern.TWO_DOUBLE_REAL),
        ((1.0, -1.0, 1j, -1j), RootPattern.TWO_REAL_TWO_COMPLEX),
        ((1j, -1j, 2j, -2j), RootPattern.FOUR_COMPLEX),
        ((1j, -1j, 1j, -1j), RootPattern.TWO_DOUBLE_COMPLEX),
        ((1.0, 1.0, 2j, -2j), RootPattern.DOUBLE_REAL_PLUS_COMPLEX_PAIR),
    ]

    @pytest.mark.parametrize("roots,pattern", CASES)
    def test_all_nine(self, roots, pattern):
        coeffs = np.poly(np.array(roots, dtype=complex))[::-1].real
        q = Quartic(tuple(F(float(c)) for c in coeffs[:-1]) + (1,))
        assert classify_root_pattern(solve_quartic(q)) is pattern

    def test_known_patterns(self):
        rs = solve_quartic(Quartic((0, 0, -1, 0, 1)))
        assert classify_root_pattern(rs) is RootPattern.DOUBLE_PLUS_TWO_SINGLE_REAL
        rs = solve_quartic(Quartic((1, 0, 0, 0, 1)))
        assert classify_root_pattern(rs) is RootPattern.FOUR_COMPLEX
        rs = solve_quartic(Quartic((0, 0, 0, 0, 1)))
        assert classify_root_pattern(rs) is RootPattern.QUADRUPLE_REAL


class TestDualOrdinate:
    def test_e1_root_one(self):
        nu, res = dual_ordinate(F(1), E1)
        assert nu == 1 and res == 0

    def test_p2_root_zero(self):
        nu, res = dual_ordinate(F(0), P2)
        assert nu == -1 and res == 0

    def test_zero_root_e_zero(self):
        # lam=0 with e=0: nu=0, residual = f*A
        p = DiagonalVFParams(F(-1), F(0), F(1), F(0), F(1), F(0), F(0))
        nu, res = dual_ordinate(F(0), p)
        assert nu == 0 and res == 0

    def test_non_root_rejected(self):
        with pytest.raises(NotARoot):
            dual_ordinate(F(1, 2), E1)

    def test_elimination_identity_random(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            p = random_params(rng)
            q = build_characteristic_quartic(p)
            rs = solve_quartic(q)
            for lam in rs.real_roots:
                _, res = dual_ordinate(lam, p)
                assert abs(float(res)) <= 1e-8 * max(1.0, float(lam) ** 4) * q.scale


def _solve3(Arows, rhs):
    """Exact 3x3 rational linear solve."""
    M = [list(row) + [r] for row, r in zip(Arows, rhs)]
    for c in range(3):
        piv = next(i for i in range(c, 3) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        M[c] = [x / M[c][c] for x in M[c]]
        for i in range(3):
            if i != c and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [x - fac * y for x, y in zip(M[i], M[c])]
    return [M[i][3] for i in range(3)]


def params_from_abscissas(lams, A=F(-1), a=F(0), b=F(1), e=F(0)):
    """Construct parameters whose characteristic quartic has the given roots.

    Ordinates follow from the first relation; c, d, f come from requiring
    the second relation to hold at each atom.
    """
    nus = [(l * l - a * l + e * A) / b for l in lams]
    rows = [(l, n, -A) for l, n in zip(lams, nus)]
    rhs = [n * n for n in nus]
    c, d, f = _solve3(rows, rhs)
    return DiagonalVFParams(A, a, b, c, d, e, f)


class TestForwardInverse:
    @pytest.mark.parametrize("lams", [
        (F(-1), F(0), F(1)),
        (F(0), F(1), F(3)),
        (F(-2), F(1, 2), F(2)),
        (F(-3), F(-1), F(5)),
    ])
    def test_chosen_abscissas_recovered(self, lams):
        p = params_from_abscissas(list(lams))
        rs = solve_quartic(build_characteristic_quartic(p))
        reals = [float(v) for v in rs.real_roots]
        for lam in lams:
            assert any(abs(float(lam) - v) <= 1e-9 for v in reals)
