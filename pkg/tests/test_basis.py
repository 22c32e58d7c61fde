"""Tests for the basis scalars mu / sigma / pi_mn and matrix assembly.

Oracle strategy: exact rational anchors worked out by hand, plus an
independent numerical-quadrature route (mpmath) for the two integral
families:

    int_B omega P_m P_n dx   = delta_{mn} sigma_n        (weight omega)
    int_B omega^2 P_m P_n dx = pi_mn                      (weight omega^2)

where omega(x) = (1 - |x|^2)^(alpha/2) and the ball integral reduces to
|S^(d-1)| int_0^1 r^(d-1) f(r^2) dr.
"""

from fractions import Fraction

import mpmath
import pytest

from fraclap.basis import (
    ProblemParams,
    assemble_AB,
    mu,
    multiplicity,
    pi_mn,
    sigma,
)
from fraclap.specfun import DomainError, XReal, radial_poly


def ball_weighted_integral(d, alpha, m, n, weight_power):
    """mpmath oracle for int_B omega^weight_power P_m P_n dx, 30 digits."""
    mpmath.mp.dps = 30
    alpha = Fraction(alpha)
    af = mpmath.mpf(alpha.numerator) / alpha.denominator
    pm = radial_poly(m, d, alpha)
    pn = radial_poly(n, d, alpha)

    def f(r):
        t = r * r
        vm = sum(mpmath.mpf(c.numerator) / c.denominator * t**k for k, c in enumerate(pm.exact))
        vn = sum(mpmath.mpf(c.numerator) / c.denominator * t**k for k, c in enumerate(pn.exact))
        return r ** (d - 1) * (1 - t) ** (af / 2 * weight_power) * vm * vn

    sphere = 2 * mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2)
    return sphere * mpmath.quad(f, [0, 1])


def assert_matches_oracle(x: XReal, oracle, tol=1e-8):
    assert abs(mpmath.mpf(str(x.value)) - oracle) < tol, f"{x!r} vs {oracle}"


class TestProblemParams:
    def test_valid(self):
        p = ProblemParams(3, Fraction(1, 2))
        assert p.d == 3 and p.alpha == Fraction(1, 2) and p.precision == 256

    def test_alpha_coerced_to_fraction(self):
        p = ProblemParams(1, 1)
        assert isinstance(p.alpha, Fraction)
        p = ProblemParams(1, 0.5)
        assert p.alpha == Fraction(1, 2)

    def test_invalid(self):
        with pytest.raises(DomainError):
            ProblemParams(0, 1)
        with pytest.raises(DomainError):
            ProblemParams(1, 0)
        with pytest.raises(DomainError):
            ProblemParams(1, Fraction(5, 2))
        with pytest.raises(DomainError):
            ProblemParams(1, 1, precision=32)

    def test_hashable_and_frozen(self):
        a = ProblemParams(2, 1)
        b = ProblemParams(2, Fraction(1))
        assert a == b and hash(a) == hash(b)


class TestMu:
    def test_rational_anchor_d1_alpha1(self):
        # mu_0 = 2 Gamma(3/2) Gamma(1) / Gamma(1/2) = 1
        assert mu(ProblemParams(1, 1), 0).contains(1)

    def test_alpha2_closed_form(self):
        # at alpha = 2:  mu_n = 4 (n + 1)(d/2 + n), a rational number
        for d in (1, 2, 3, 9):
            pp = ProblemParams(d, 2)
            for n in range(6):
                expect = 4 * (n + 1) * (Fraction(d, 2) + n)
                assert mu(pp, n).contains(expect)

    def test_spot_value_d9_alpha2(self):
        assert mu(ProblemParams(9, 2), 0).contains(18)

    def test_pi_multiple_anchor_d2_alpha1(self):
        # mu_3 = 1225 pi / 512  (d = 2, alpha = 1)
        val = mu(ProblemParams(2, 1), 3)
        ratio = val / XReal.pi(256)
        assert ratio.contains(Fraction(1225, 512))

    def test_increasing_in_n(self):
        for (d, alpha) in [(1, Fraction(1, 100)), (2, 1), (9, Fraction(3, 2))]:
            pp = ProblemParams(d, alpha)
            vals = [mu(pp, n) for n in range(8)]
            for a, b in zip(vals, vals[1:]):
                assert a.definitely_less(b)

    def test_positive(self):
        assert mu(ProblemParams(5, Fraction(7, 10)), 4).definitely_positive()


class TestSigma:
    def test_rational_anchor_d1_alpha2(self):
        # sigma_0 = 4/3 at d = 1, alpha = 2
        assert sigma(ProblemParams(1, 2), 0).contains(Fraction(4, 3))

    def test_pi_anchors_d1_alpha1(self):
        # sigma_0 = sigma_1 = pi/2 at d = 1, alpha = 1
        pp = ProblemParams(1, 1)
        half = Fraction(1, 2)
        assert (sigma(pp, 0) / XReal.pi(256)).contains(half)
        assert (sigma(pp, 1) / XReal.pi(256)).contains(half)

    def test_quadrature_oracle(self):
        for d in (1, 2):
            for alpha in (Fraction(1, 2), 1, 2):
                pp = ProblemParams(d, alpha)
                for n in range(3):
                    oracle = ball_weighted_integral(d, alpha, n, n, 1)
                    assert_matches_oracle(sigma(pp, n), oracle)

    def test_orthogonality_oracle(self):
        # int omega P_m P_n vanishes for m != n
        for (m, n) in [(0, 1), (0, 2), (1, 2)]:
            oracle = ball_weighted_integral(2, 1, m, n, 1)
            assert abs(oracle) < 1e-12

    def test_positive(self):
        assert sigma(ProblemParams(9, Fraction(1, 10)), 5).definitely_positive()


class TestPiMn:
    def test_rational_anchor_d1_alpha2(self):
        assert pi_mn(ProblemParams(1, 2), 0, 0).contains(Fraction(16, 15))

    def test_pi_anchor_d1_alpha1(self):
        # pi_01 = 4/15 at d = 1, alpha = 1  (rational since pi^(1/2) cancels)
        assert pi_mn(ProblemParams(1, 1), 0, 1).contains(Fraction(4, 15))

    def test_symmetry(self):
        pp = ProblemParams(3, Fraction(3, 2))
        a, b = pi_mn(pp, 1, 4), pi_mn(pp, 4, 1)
        assert a.value == b.value and a.err == b.err

    def test_alpha2_tridiagonal(self):
        # Gamma poles make all entries with |m - n| >= 2 vanish identically
        pp = ProblemParams(2, 2)
        for m in range(5):
            for n in range(5):
                x = pi_mn(pp, m, n)
                if abs(m - n) >= 2:
                    assert x.is_exact and x.value == 0
                else:
                    assert x.definitely_positive() or x.definitely_negative()

    def test_alpha_below_2_full_matrix(self):
        # for alpha < 2 no entry vanishes
        pp = ProblemParams(2, Fraction(3, 2))
        for m in range(4):
            for n in range(4):
                x = pi_mn(pp, m, n)
                assert x.value != 0

    def test_quadrature_oracle(self):
        for d in (1, 2):
            for alpha in (Fraction(1, 2), 1, 2):
                pp = ProblemParams(d, alpha)
                for m in range(3):
                    for n in range(m + 1):
                        oracle = ball_weighted_integral(d, alpha, m, n, 2)
                        assert_matches_oracle(pi_mn(pp, m, n), oracle)


class TestAssembleAB:
    def test_shapes_and_structure(self):
        A, B = assemble_AB(ProblemParams(2, 1), 4)
        assert len(A) == len(B) == 4
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert A[i][j].value == 0
        # mass matrix symmetric with positive diagonal
        for i in range(4):
            assert B[i][i].definitely_positive()
            for j in range(4):
                assert B[i][j].value == B[j][i].value

    def test_diagonal_equals_mu_sigma(self):
        pp = ProblemParams(3, Fraction(1, 2))
        A, _ = assemble_AB(pp, 3)
        for n in range(3):
            expect = mu(pp, n) * sigma(pp, n)
            assert abs(float(A[n][n].value - expect.value)) <= float(A[n][n].err + expect.err)

    def test_cross_check_runs_clean_on_grid(self):
        # the built-in independent-closed-form check must never trip
        for d in (1, 2, 9):
            for alpha in (Fraction(1, 100), Fraction(1), Fraction(2)):
                assemble_AB(ProblemParams(d, alpha), 5)

    def test_invalid_size(self):
        with pytest.raises(DomainError):
            assemble_AB(ProblemParams(1, 1), 0)


class TestMultiplicity:
    def test_degree_zero(self):
        for d in (1, 2, 3, 9):
            assert multiplicity(d, 0) == 1

    def test_dimension_one(self):
        assert multiplicity(1, 1) == 1
        assert multiplicity(1, 2) == 0
        assert multiplicity(1, 5) == 0

    def test_dimension_two(self):
        for l in range(1, 6):
            assert multiplicity(2, l) == 2

    def test_dimension_three(self):
        # 2l + 1 in three dimensions
        assert multiplicity(3, 1) == 3
        assert multiplicity(3, 2) == 5
        assert multiplicity(3, 3) == 7

    def test_higher_dimensions(self):
        assert multiplicity(9, 1) == 9
        # M_{d,2} = (d - 1)(d + 2)/2
        assert multiplicity(9, 2) == 8 * 11 // 2

    def test_invalid(self):
        with pytest.raises(DomainError):
            multiplicity(0, 1)
        with pytest.raises(DomainError):
            multiplicity(2, -1)
