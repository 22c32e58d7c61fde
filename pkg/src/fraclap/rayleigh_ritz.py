"""Certified Rayleigh-Ritz upper bounds.

Projecting the quadratic form of (-Delta)^(alpha/2) onto the span of the first
N weighted radial polynomials gives the matrix pencil A x = lambda B x with
A = diag(mu_n sigma_n) and B the Gram matrix (pi_mn).  Every eigenvalue of the
pencil is an upper bound for the corresponding Dirichlet eigenvalue of the
operator, by the min-max principle; monotonicity in N is automatic because the
trial spaces are nested.

The pencil is symmetrized to C = A^(-1/2) B A^(-1/2) (A is diagonal and
positive), whose eigenvalues nu relate by lambda = 1/nu.  Eigenvalues of C are
*certified*: a plain floating-point Jacobi iteration produces approximate
eigenpairs, and each pair is turned into a rigorous enclosure through the
residual bound  dist(lambda_approx, spec(C)) <= ||C v - lambda_approx v|| / ||v||,
evaluated in ball arithmetic over the ball matrix C (which contains the exact
matrix entry-wise).  N pairwise disjoint enclosures must then contain exactly
one eigenvalue of the exact matrix each; if they overlap, the whole computation
escalates to a higher working precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from fraclap.basis import Matrix, ProblemParams, assemble_AB
from fraclap.specfun import (
    DomainError,
    PrecisionError,
    XReal,
    escalate,
)


class NotPositiveDefinite(ArithmeticError):
    """A matrix required to be positive definite has a certified nonpositive pivot."""


@dataclass(frozen=True)
class UpperBounds:
    """Certified upper bounds for the first N radial eigenvalues.

    ``values[n]`` encloses the n-th pencil eigenvalue; its upper endpoint
    ``values[n].hi()`` is the certified upper bound for the n-th radial
    Dirichlet eigenvalue.  For n >= N the projection gives no information and
    the bound is +infinity.
    """

    params: ProblemParams
    N: int
    values: tuple[XReal, ...]

    def upper(self, n: int) -> mpfr:
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"eigenvalue index must be a nonnegative integer, got {n!r}")
        if n >= self.N:
            return mpfr("inf")
        return self.values[n].hi()

    def enclosure(self, n: int) -> XReal:
        if not 0 <= n < self.N:
            raise DomainError(f"no enclosure for index {n} at trial-space size {self.N}")
        return self.values[n]


def cholesky(M: Matrix) -> Matrix:
    """Certified Cholesky factor L (lower triangular, M = L L^T) of a ball matrix.

    Raises NotPositiveDefinite if some pivot is certainly <= 0, and
    PrecisionError if a pivot's enclosure straddles zero (not decidable at this
    precision).
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise DomainError("cholesky needs a square matrix")
    p = min(x.precision for row in M for x in row)
    zero = XReal.from_int(0, p)
    L: Matrix = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = M[i][j]
            for k in range(j):
                s = s - L[i][k] * L[j][k]
            if i == j:
                if s.hi() <= 0:
                    raise NotPositiveDefinite(f"pivot {i} is certainly nonpositive: {s!r}")
                if not s.definitely_positive():
                    raise PrecisionError(f"pivot {i} cannot be certified positive: {s!r}")
                L[i][i] = s.sqrt()
            else:
                L[i][j] = s / L[j][j]
    return L


# ---------------------------------------------------------------------------
# certified symmetric eigenvalues
# ---------------------------------------------------------------------------


def _jacobi_midpoint(M: list[list[mpfr]], precision: int) -> tuple[list[mpfr], list[list[mpfr]]]:
    """Plain cyclic Jacobi on the midpoint matrix; returns (diagonal, eigenvector columns).

    Runs with ordinary operators under a thread context at ``precision``; the
    output is only a *candidate* decomposition, certified separately.
    """
    n = len(M)
    saved = gmpy2.get_context()
    gmpy2.set_context(gmpy2.context(precision=precision))
    try:
        A = [[mpfr(M[i][j]) for j in range(n)] for i in range(n)]
        V = [[mpfr(1) if i == j else mpfr(0) for j in range(n)] for i in range(n)]
        scale = gmpy2.sqrt(sum(A[i][j] ** 2 for i in range(n) for j in range(n))) or mpfr(1)
        stop = scale * mpfr(2) ** (8 - precision)
        for _sweep in range(80):
            off = gmpy2.sqrt(sum(A[i][j] ** 2 for i in range(n) for j in range(i + 1, n)) * 2)
            if off <= stop:
                break
            for i in range(n - 1):
                for j in range(i + 1, n):
                    if A[i][j] == 0:
                        continue
                    tau = (A[j][j] - A[i][i]) / (2 * A[i][j])
                    t = 1 / (abs(tau) + gmpy2.sqrt(1 + tau * tau))
                    if tau < 0:
                        t = -t
                    c = 1 / gmpy2.sqrt(1 + t * t)
                    s = t * c
                    for k in range(n):
                        aik, ajk = A[i][k], A[j][k]
                        A[i][k] = c * aik - s * ajk
                        A[j][k] = s * aik + c * ajk
                    for k in range(n):
                        aki, akj = A[k][i], A[k][j]
                        A[k][i] = c * aki - s * akj
                        A[k][j] = s * aki + c * akj
                    for k in range(n):
                        vki, vkj = V[k][i], V[k][j]
                        V[k][i] = c * vki - s * vkj
                        V[k][j] = s * vki + c * vkj
        return [A[i][i] for i in range(n)], V
    finally:
        gmpy2.set_context(saved)


def sym_eigen(M: Matrix) -> list[XReal]:
    """Certified enclosures of all eigenvalues of a symmetric ball matrix, ascending.

    Each enclosure is centered at a Jacobi eigenvalue with radius
    ||M v - lambda v|| / ||v|| computed in ball arithmetic (the ball matrix
    contains the exact matrix, so the classical residual bound for symmetric
    matrices applies to every matrix in the ball).  The N enclosures must be
    pairwise disjoint, which pins exactly one exact eigenvalue inside each;
    otherwise a PrecisionError asks the caller to escalate.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise DomainError("sym_eigen needs a square matrix")
    p = min(x.precision for row in M for x in row)
    lam, V = _jacobi_midpoint([[x.value for x in row] for row in M], p)

    enclosures = []
    for idx in range(n):
        lam_x = XReal(mpfr(lam[idx], p), p)
        v = [XReal(mpfr(V[k][idx], p), p) for k in range(n)]
        res_sq = XReal.from_int(0, p)
        for i in range(n):
            r_i = -lam_x * v[i]
            for j in range(n):
                r_i = r_i + M[i][j] * v[j]
            res_sq = res_sq + r_i * r_i
        norm_sq = XReal.from_int(0, p)
        for i in range(n):
            norm_sq = norm_sq + v[i] * v[i]
        if not norm_sq.definitely_positive():
            raise PrecisionError("candidate eigenvector has no certified norm")
        radius = (res_sq.sqrt() / norm_sq.sqrt()).hi()
        enclosures.append(XReal(lam_x.value, p, lam_x.err).widened(radius))

    enclosures.sort(key=lambda x: x.value)
    for a, b in zip(enclosures, enclosures[1:]):
        if not a.hi() < b.lo():
            raise PrecisionError(
                f"eigenvalue enclosures overlap ({a!r} vs {b!r}); increase precision"
            )
    return enclosures


def upper_bounds(params: ProblemParams, N: int) -> UpperBounds:
    """Certified Rayleigh-Ritz upper bounds from the first N trial functions."""
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"trial-space size N must be a positive integer, got {N!r}")

    def attempt(p: int) -> UpperBounds:
        pp = params.with_precision(p)
        A, B = assemble_AB(pp, N)
        cholesky(B)  # certifies positive definiteness of the Gram matrix
        inv_sqrt = [XReal.from_int(1, p) / A[k][k].sqrt() for k in range(N)]
        C: Matrix = [[B[i][j] * inv_sqrt[i] * inv_sqrt[j] for j in range(N)] for i in range(N)]
        nus = sym_eigen(C)
        one = XReal.from_int(1, p)
        values = []
        for nu in reversed(nus):  # largest nu -> smallest lambda
            if not nu.definitely_positive():
                raise PrecisionError(f"pencil eigenvalue not certified positive: {nu!r}")
            values.append(one / nu)
        return UpperBounds(params=params, N=N, values=tuple(values))

    return escalate(attempt, params.precision)
