"""Tests for the certified Rayleigh-Ritz upper-bound machinery.

Oracles: hand-checkable factorizations and eigensystems, closed-form pencil
eigenvalues for N = 2 (quadratic formula on the 2x2 pencil), and frozen
decimals cross-validated with independent 30-digit mpmath linear algebra.
"""

from fractions import Fraction

import pytest
from gmpy2 import mpfr

from fraclap.basis import ProblemParams, assemble_AB
from fraclap.rayleigh_ritz import NotPositiveDefinite, cholesky, sym_eigen, upper_bounds
from fraclap.specfun import DomainError, PrecisionError, XReal
from oracles import UPPER0_D1_A1, assert_tight

P = 256


def ball_matrix(rows):
    return [[XReal.from_fraction(Fraction(x), P) for x in row] for row in rows]


class TestCholesky:
    def test_identity(self):
        L = cholesky(ball_matrix([[1, 0], [0, 1]]))
        assert L[0][0].contains(1) and L[1][1].contains(1) and L[1][0].contains(0)

    def test_hand_checkable(self):
        L = cholesky(ball_matrix([[4, 2], [2, 5]]))
        assert L[0][0].contains(2)
        assert L[1][0].contains(1)
        assert L[1][1].contains(2)
        assert L[0][1].value == 0

    def test_reconstruction(self):
        M = ball_matrix([[9, 3, 1], [3, 5, 2], [1, 2, 7]])
        L = cholesky(M)
        n = 3
        for i in range(n):
            for j in range(n):
                s = XReal.from_int(0, P)
                for k in range(n):
                    s = s + L[i][k] * L[j][k]
                assert abs(float(s.value - M[i][j].value)) <= 1e-60

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(ball_matrix([[1, 2], [2, 1]]))

    def test_semidefinite_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(ball_matrix([[1, 1], [1, 1]]))

    def test_gram_matrix_pivots_positive(self):
        _, B = assemble_AB(ProblemParams(1, 1), 3)
        L = cholesky(B)
        for i in range(3):
            assert L[i][i].definitely_positive()

    def test_nonsquare_rejected(self):
        with pytest.raises(DomainError):
            cholesky([[XReal.from_int(1, P)], [XReal.from_int(2, P)]][:1] * 2)


class TestSymEigen:
    def test_diagonal(self):
        vals = sym_eigen(ball_matrix([[3, 0, 0], [0, 1, 0], [0, 0, 2]]))
        for v, expect in zip(vals, [1, 2, 3]):
            assert v.contains(expect)

    def test_swap_matrix(self):
        vals = sym_eigen(ball_matrix([[0, 1], [1, 0]]))
        assert vals[0].contains(-1)
        assert vals[1].contains(1)

    def test_two_by_two(self):
        vals = sym_eigen(ball_matrix([[2, 1], [1, 2]]))
        assert vals[0].contains(1)
        assert vals[1].contains(3)

    def test_three_by_three_exact_spectrum(self):
        # circulant-ish: eigenvalues of [[2,-1,0],[-1,2,-1],[0,-1,2]] are 2, 2±sqrt(2)
        vals = sym_eigen(ball_matrix([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]))
        two = XReal.from_int(2, P)
        rt2 = XReal.from_int(2, P).sqrt()
        for v, expect in zip(vals, [two - rt2, two, two + rt2]):
            assert abs(float(v.value - expect.value)) <= float(v.err + expect.err)

    def test_certified_radii_are_small(self):
        vals = sym_eigen(ball_matrix([[5, 2, 1], [2, 4, 1], [1, 1, 3]]))
        for v in vals:
            assert float(v.err) < 1e-60

    def test_coincident_eigenvalues_raise_precision_error(self):
        with pytest.raises(PrecisionError):
            sym_eigen(ball_matrix([[1, 0], [0, 1]]))


class TestUpperBounds:
    def test_single_trial_function_alpha2(self):
        # N = 1: bound = mu_0 sigma_0 / pi_00 = (d+alpha)/2 * ... = 2.5 at d=1, alpha=2
        ub = upper_bounds(ProblemParams(1, 2), 1)
        assert ub.values[0].contains(Fraction(5, 2))
        assert ub.upper(0) >= mpfr("2.5")

    def test_infinite_beyond_trial_space(self):
        ub = upper_bounds(ProblemParams(1, 2), 1)
        assert ub.upper(1) == mpfr("inf")
        assert ub.upper(7) == mpfr("inf")
        with pytest.raises(DomainError):
            ub.enclosure(1)

    def test_closed_form_n2_first(self):
        # d=1, alpha=1, N=2 ground eigenvalue: 45 pi (33 - sqrt(417)) / 1536
        ub = upper_bounds(ProblemParams(1, 1), 2)
        assert_tight(ub.values[0], UPPER0_D1_A1, rel=1e-38, max_err=1e-45)

    def test_closed_form_n2_second(self):
        # second pencil eigenvalue at d=1, alpha=1: 15 pi (33 + sqrt(417)) / 512
        ub = upper_bounds(ProblemParams(1, 1), 2)
        expect = (
            15
            * XReal.pi(P)
            * (33 + XReal.from_int(417, P).sqrt())
            / 512
        )
        assert abs(float(ub.values[1].value - expect.value)) <= float(ub.values[1].err + expect.err)

    def test_spot_value_d2_alpha1(self):
        ub = upper_bounds(ProblemParams(2, 1), 2)
        # certified enclosure rounds to 2.006175892 at 10 significant digits
        assert abs(float(ub.values[0].value) - 2.006175892) < 5e-10

    def test_monotone_in_trial_space_size(self):
        pp = ProblemParams(1, Fraction(3, 2))
        prev = None
        for N in range(1, 6):
            ub = upper_bounds(pp, N)
            first = ub.values[0]
            if prev is not None:
                assert first.lo() <= prev.hi()
            prev = first

    def test_sorted_and_positive(self):
        ub = upper_bounds(ProblemParams(3, Fraction(1, 2)), 5)
        for v in ub.values:
            assert v.definitely_positive()
        for a, b in zip(ub.values, ub.values[1:]):
            assert a.value < b.value

    def test_dominates_base_eigenvalue(self):
        # the unprojected operator scalar mu_n is a lower bound for lambda_n,
        # so every upper bound must exceed it
        from fraclap.basis import mu

        pp = ProblemParams(2, 1)
        ub = upper_bounds(pp, 4)
        for n in range(4):
            assert ub.values[n].hi() > mu(pp, n).lo()

    def test_invalid_size(self):
        with pytest.raises(DomainError):
            upper_bounds(ProblemParams(1, 1), 0)
