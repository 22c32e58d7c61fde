"""Problem parameters and the closed-form scalars of the weighted polynomial basis.

The trial space for the operator (-Delta)^(alpha/2) on the unit ball B in R^d
is spanned by u_n(x) = omega(x) P_n(|x|^2), where omega(x) = (1 - |x|^2)^(alpha/2)
and P_n is the degree-n radial polynomial of :func:`fraclap.specfun.radial_poly`.
Three families of scalars make every matrix entry closed-form:

* ``mu(params, n)``     -- the operator acts diagonally on the basis:
                           (-Delta)^(alpha/2) [omega P_n] = mu_n P_n on B;
* ``sigma(params, n)``  -- orthogonality weight: int_B omega P_m P_n = delta_{mn} sigma_n;
* ``pi_mn(params, m, n)`` -- plain-L2 Gram matrix: int_B omega^2 P_m P_n.

Consequently the Rayleigh-Ritz matrices over the first N trial functions are
A = diag(mu_n sigma_n) (stiffness) and B = (pi_mn) (mass).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from fraclap.specfun import DomainError, XReal, log_gamma, recip_gamma

Matrix = list[list[XReal]]


@dataclass(frozen=True)
class ProblemParams:
    """Dimension d >= 1, fractional order alpha in (0, 2], working precision in bits.

    ``alpha`` is stored as an exact Fraction so that pole detection in the Gram
    matrix (entries vanish identically when alpha/2 + m - n + 1 hits a
    nonpositive integer) is decided by exact arithmetic.
    """

    d: int
    alpha: Fraction
    precision: int = 256

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise DomainError(f"dimension d must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not (0 < self.alpha <= 2):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not isinstance(self.precision, int) or not (64 <= self.precision <= 4096):
            raise DomainError(f"precision must be an integer in [64, 4096], got {self.precision!r}")

    @property
    def half_d(self) -> Fraction:
        return Fraction(self.d, 2)

    @property
    def half_alpha(self) -> Fraction:
        return self.alpha / 2

    def with_precision(self, precision: int) -> "ProblemParams":
        return ProblemParams(self.d, self.alpha, precision)


@dataclass
class BasisScalars:
    """Memo table for mu / sigma / pi_mn at fixed problem parameters."""

    params: ProblemParams
    _mu: dict[int, XReal] = field(default_factory=dict)
    _sigma: dict[int, XReal] = field(default_factory=dict)
    _pi: dict[tuple[int, int], XReal] = field(default_factory=dict)
    _consts: dict[str, XReal] = field(default_factory=dict)

    def _const(self, name: str) -> XReal:
        c = self._consts.get(name)
        if c is not None:
            return c
        p = self.params.precision
        if name == "pi_half_d":  # pi^(d/2)
            c = XReal.pi(p).pow_fraction(Fraction(self.params.d, 2))
        elif name == "two_alpha":  # 2^alpha
            c = XReal.from_int(2, p).pow_fraction(self.params.alpha)
        else:  # pragma: no cover
            raise KeyError(name)
        self._consts[name] = c
        return c

    def mu(self, n: int) -> XReal:
        got = self._mu.get(n)
        if got is not None:
            return got
        _check_index(n)
        pp, p = self.params, self.params.precision
        ha, hd = pp.half_alpha, pp.half_d
        # mu_n = 2^alpha Gamma(alpha/2+n+1) Gamma((d+alpha)/2+n) / (n! Gamma(d/2+n))
        log_mu = (
            log_gamma(ha + n + 1, p)
            + log_gamma(hd + ha + n, p)
            - log_gamma(Fraction(n + 1), p)
            - log_gamma(hd + n, p)
        )
        out = self._const("two_alpha") * log_mu.exp()
        self._mu[n] = out
        return out

    def sigma(self, n: int) -> XReal:
        got = self._sigma.get(n)
        if got is not None:
            return got
        _check_index(n)
        pp, p = self.params, self.params.precision
        ha, hd = pp.half_alpha, pp.half_d
        # sigma_n = pi^(d/2) n! Gamma(d/2) Gamma(alpha/2+n+1)
        #           / [((d+alpha)/2 + 2n) Gamma(d/2+n) Gamma((d+alpha)/2+n)]
        log_s = (
            log_gamma(Fraction(n + 1), p)
            + log_gamma(hd, p)
            + log_gamma(ha + n + 1, p)
            - log_gamma(hd + n, p)
            - log_gamma(hd + ha + n, p)
        )
        out = self._const("pi_half_d") * log_s.exp() / XReal.from_fraction(hd + ha + 2 * n, p)
        self._sigma[n] = out
        return out

    def pi(self, m: int, n: int) -> XReal:
        if m > n:
            m, n = n, m
        got = self._pi.get((m, n))
        if got is not None:
            return got
        _check_index(m)
        _check_index(n)
        pp, p = self.params, self.params.precision
        ha, hd, a = pp.half_alpha, pp.half_d, pp.alpha
        # pi_mn = pi^(d/2) Gamma(alpha+1) Gamma(d/2) Gamma(d/2+m+n)
        #         * Gamma(alpha/2+m+1) Gamma(alpha/2+n+1)
        #         / [Gamma(alpha/2+m-n+1) Gamma(alpha/2+n-m+1)
        #            Gamma(d/2+m) Gamma(d/2+n) Gamma(d/2+alpha+m+n+1)]
        # The two reciprocal factors can sit at poles of Gamma (alpha = 2 and
        # |m - n| >= 2), which makes the entry vanish identically; they are
        # evaluated through recip_gamma, which resolves poles exactly for
        # rational alpha.
        rg1 = recip_gamma(ha + m - n + 1, p)
        rg2 = recip_gamma(ha + n - m + 1, p)
        if rg1.is_exact and rg1.value == 0 or rg2.is_exact and rg2.value == 0:
            out = XReal.from_int(0, p)
        else:
            log_pos = (
                log_gamma(a + 1, p)
                + log_gamma(hd, p)
                + log_gamma(hd + m + n, p)
                + log_gamma(ha + m + 1, p)
                + log_gamma(ha + n + 1, p)
                - log_gamma(hd + m, p)
                - log_gamma(hd + n, p)
                - log_gamma(hd + a + m + n + 1, p)
            )
            out = self._const("pi_half_d") * log_pos.exp() * rg1 * rg2
        self._pi[(m, n)] = out
        return out


_scalars_cache: dict[ProblemParams, BasisScalars] = {}


def scalars_for(params: ProblemParams) -> BasisScalars:
    table = _scalars_cache.get(params)
    if table is None:
        table = BasisScalars(params)
        _scalars_cache[params] = table
    return table


def _check_index(n: int):
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"basis index must be a nonnegative integer, got {n!r}")


def mu(params: ProblemParams, n: int) -> XReal:
    """Diagonal action scalar: (-Delta)^(alpha/2) [omega P_n] = mu_n P_n on the ball."""
    return scalars_for(params).mu(n)


def sigma(params: ProblemParams, n: int) -> XReal:
    """Weighted norm: int_B omega P_m P_n dx = delta_{mn} sigma_n."""
    return scalars_for(params).sigma(n)


def pi_mn(params: ProblemParams, m: int, n: int) -> XReal:
    """Plain-L2 Gram entry of the trial functions: int_B (omega P_m)(omega P_n) dx."""
    return scalars_for(params).pi(m, n)


def assemble_AB(params: ProblemParams, N: int) -> tuple[Matrix, Matrix]:
    """Stiffness and mass matrices of the N-dimensional Rayleigh-Ritz problem.

    A = diag(mu_n sigma_n), B = (pi_mn), indices 0 .. N-1.  The diagonal of A
    is cross-checked against its independent closed form
    2^alpha pi^(d/2) Gamma(d/2) Gamma(alpha/2+n+1)^2 / [((d+alpha)/2+2n) Gamma(d/2+n)^2];
    disagreement of the two certified enclosures would mean a formula error and
    raises ArithmeticError.
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"matrix size N must be a positive integer, got {N!r}")
    table = scalars_for(params)
    p = params.precision
    ha, hd = params.half_alpha, params.half_d
    zero = XReal.from_int(0, p)
    A: Matrix = [[zero] * N for _ in range(N)]
    B: Matrix = [[zero] * N for _ in range(N)]
    for n in range(N):
        a_nn = table.mu(n) * table.sigma(n)
        log_alt = (
            log_gamma(hd, p)
            + 2 * log_gamma(ha + n + 1, p)
            - 2 * log_gamma(hd + n, p)
        )
        alt = (
            table._const("two_alpha")
            * table._const("pi_half_d")
            * log_alt.exp()
            / XReal.from_fraction(hd + ha + 2 * n, p)
        )
        if a_nn.lo() > alt.hi() or alt.lo() > a_nn.hi():
            raise ArithmeticError(
                f"internal cross-check failed for diagonal entry {n}: "
                f"{a_nn!r} vs {alt!r}"
            )
        A[n][n] = a_nn
        for m in range(n + 1):
            B[m][n] = B[n][m] = table.pi(m, n)
    return A, B


def multiplicity(d: int, l: int) -> int:
    """Number of linearly independent spherical harmonics of degree l in R^d.

    M_{d,0} = 1; in d = 1 only l in {0, 1} occur (even / odd); in general
    M_{d,l} = (d + 2l - 2) / (d + l - 2) * C(d + l - 2, l).
    """
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"dimension d must be a positive integer, got {d!r}")
    if not isinstance(l, int) or l < 0:
        raise DomainError(f"degree l must be a nonnegative integer, got {l!r}")
    if l == 0:
        return 1
    if d == 1:
        return 1 if l == 1 else 0
    num = (d + 2 * l - 2) * comb(d + l - 2, l)
    assert num % (d + l - 2) == 0
    return num // (d + l - 2)
