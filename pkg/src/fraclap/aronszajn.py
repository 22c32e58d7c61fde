"""Certified lower bounds via an intermediate-operator (Aronszajn-type) construction.

The lower-bound machinery replaces the operator by a finite-rank perturbation
of its diagonal action on the weighted basis.  Its spectrum consists of the
base scalars mu_n for n >= N+1 together with the N+1 roots of

    w(lambda) = [prod_{n=0..N} (mu_n - lambda)] * det W(lambda),

where the N x N matrix W(lambda) is the interaction Gram matrix I_{m,n} plus a
tridiagonal rational correction; the nondecreasing merge of the roots with the
remaining mu_n is entrywise a lower bound for the Dirichlet eigenvalues.

Interaction integrals.  With Q_n = P_n - P_{n+1} (zero constant term) and
t = |x|^2,

    I_{m,n} = int_B  Q_m(t) Q_n(t) / ((1 - t)^(-alpha/2) - 1)  dx.

Expanding 1/((1-t)^(-h) - 1) = sum_{j>=1} (1-t)^(j h)  (h = alpha/2) turns each
entry into sum_k s_k V_k with (Q_m Q_n)(t) = sum_{k>=2} s_k t^k and

    V_k = sum_{j>=1} B(d/2 + k, j h + 1)        (Euler beta function),

up to the surface factor pi^(d/2)/Gamma(d/2).  V_k is evaluated with a
*certified* tail: writing h = p/q in lowest terms, the series telescopes
exactly for p = 1 (V_k = sum_{r=1..q} B(d/2+k-1, r h + 1), by summing the
geometric series under the integral); otherwise a finite stretch j <= J is
summed directly and the tail is grouped into mgrp = floor(1/h) interleaved
subsequences with ratio (1-t)^(h'), h' = mgrp*h in (1/2, 1].  Using
1 - (1-x)^(h') = h' x (1 + rho(x)) with rho a power series with positive
coefficients and rho(1) = (1-h')/h' < 1, the grouped tail becomes an
alternating Neumann series in rho whose truncation error is bounded
coefficient-by-coefficient; every dropped term is dominated by a beta-function
ladder value, so the enclosure is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from fraclap.basis import BasisScalars, Matrix, ProblemParams, scalars_for
from fraclap.rayleigh_ritz import upper_bounds
from fraclap.specfun import (
    DomainError,
    PrecisionError,
    RadialPolynomial,
    XReal,
    escalate,
    log_beta,
    log_gamma,
    radial_poly,
)


class PoleProximity(ArithmeticError):
    """lambda is too close to a base scalar mu_j for the rational form of W."""


class RootCountMismatch(ArithmeticError):
    """The certified root search did not isolate the expected N+1 roots."""


@dataclass(frozen=True)
class IMatrix:
    """Interaction Gram matrix with certified series-truncation radii.

    ``entries[m][n]`` encloses I_{m,n} (rounding and truncation included);
    ``tail_bound[m][n]`` is the truncation part alone, kept for reporting.
    """

    params: ProblemParams
    N: int
    entries: tuple[tuple[XReal, ...], ...]
    tail_bound: tuple[tuple[mpfr, ...], ...]


@dataclass(frozen=True)
class LowerBounds:
    """Certified lower bounds: sorted merge of the w-roots with the tail scalars.

    ``values[n]`` encloses the n-th member of the merged sequence; its lower
    endpoint ``values[n].lo()`` is the certified lower bound for the n-th
    radial Dirichlet eigenvalue.
    """

    params: ProblemParams
    N: int
    values: tuple[XReal, ...]
    roots: tuple[XReal, ...]
    merged_tail: tuple[XReal, ...]

    def lower(self, n: int) -> mpfr:
        if not isinstance(n, int) or not 0 <= n < len(self.values):
            raise DomainError(f"no lower bound materialized for index {n!r}")
        return self.values[n].lo()


# ---------------------------------------------------------------------------
# polynomials and moments
# ---------------------------------------------------------------------------


def q_poly(n: int, params: ProblemParams) -> RadialPolynomial:
    """Difference polynomial Q_n = P_n - P_{n+1}; constant term exactly zero."""
    pn = radial_poly(n, params.d, params.alpha, params.precision)
    pn1 = radial_poly(n + 1, params.d, params.alpha, params.precision)
    coeffs = [
        (pn.exact[k] if k < len(pn.exact) else Fraction(0)) - pn1.exact[k]
        for k in range(n + 2)
    ]
    assert coeffs[0] == 0
    return RadialPolynomial(coeffs, params.precision)


def weighted_moment(k: int, s, d: int, precision: int = 256) -> XReal:
    """Radial moment int_B |x|^(2k) (1 - |x|^2)^s dx.

    Equals pi^(d/2) Gamma(d/2+k) Gamma(s+1) / (Gamma(d/2) Gamma(d/2+k+s+1)).
    """
    if not isinstance(k, int) or k < 0:
        raise DomainError(f"power k must be a nonnegative integer, got {k!r}")
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"dimension d must be a positive integer, got {d!r}")
    s = Fraction(s) if not isinstance(s, XReal) else s
    s_plus_1 = s + 1
    low = s_plus_1.lo() if isinstance(s_plus_1, XReal) else s_plus_1
    if not low > 0:
        raise DomainError(f"exponent s must be > -1, got {s!r}")
    hd = Fraction(d, 2)
    log_part = (
        log_gamma(hd + k, precision)
        + log_gamma(s_plus_1, precision)
        - log_gamma(hd, precision)
        - log_gamma(s_plus_1 + (hd + k), precision)
    )
    return XReal.pi(precision).pow_fraction(hd) * log_part.exp()


# ---------------------------------------------------------------------------
# kernel moments V_k with certified tails
# ---------------------------------------------------------------------------


def _beta_x(a, b, precision: int) -> XReal:
    return log_beta(a, b, precision).exp()


def _poly_mul_ball(p: list[XReal], q: list[XReal], cut: int | None = None) -> list[XReal]:
    n = len(p) + len(q) - 1
    if cut is not None:
        n = min(n, cut)
    prec = p[0].precision
    out = [XReal.from_int(0, prec) for _ in range(n)]
    for i, a in enumerate(p):
        if a.value == 0 and a.err == 0:
            continue
        for j, b in enumerate(q):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + a * b
    return out


def _kernel_moments(
    params: ProblemParams, K: int, J: int, jstar: int = 40, M: int = 48
) -> tuple[dict[int, XReal], dict[int, mpfr]]:
    """Certified V_k = sum_{j>=1} B(d/2+k, j alpha/2 + 1) for k = 2..K.

    Returns (values with full radii, truncation radii alone).  For
    alpha/2 = 1/q the sum telescopes exactly and the truncation radius is 0.
    """
    p = params.precision
    h = params.half_alpha
    d2 = params.half_d
    if h.numerator == 1:
        mgrp, J = h.denominator, 0
    else:
        mgrp = int(Fraction(1) / h) if h <= Fraction(1, 2) else 1
    hp = mgrp * h  # h' in (1/2, 1]
    assert Fraction(1, 2) < hp <= 1

    V = {k: XReal.from_int(0, p) for k in range(2, K + 1)}
    trunc = {k: mpfr(0) for k in range(2, K + 1)}

    # direct stretch j = 1 .. J (one beta evaluation per j, ladder over k)
    for j in range(1, J + 1):
        y = j * h
        b = _beta_x(d2 + 2, y + 1, p)
        for k in range(2, K + 1):
            V[k] = V[k] + b
            b = b * XReal.from_fraction(Fraction(d2 + k) / (d2 + k + y + 1), p)

    # rho(x) = sum_{m>=2} (beta_m / h') x^(m-1), where 1-(1-x)^h' = sum beta_m x^m
    rho1 = (1 - hp) / hp  # rho(1), exactly
    deg = M + 2
    bc = [hp]
    for m_ in range(1, deg + 1):
        bc.append(bc[-1] * (m_ - hp) / (m_ + 1))
    rho_exact = [Fraction(0)] + [c / hp for c in bc[1:]]
    rho = [XReal.from_fraction(c, p) for c in rho_exact]
    imax = 1 if rho1 == 0 else jstar
    rho_pows: list[list[XReal]] = [[XReal.from_int(1, p)]]
    for _ in range(1, imax):
        rho_pows.append(_poly_mul_ball(rho_pows[-1], rho, cut=M + 1))
    kept_sums = [sum((c for c in pw), XReal.from_int(0, p)) for pw in rho_pows]
    rho1_x = XReal.from_fraction(rho1, p)

    inv_hp = XReal.from_fraction(1 / hp, p)
    smax = (K - 2) + max(M + 2, jstar) + 2
    for r in range(1, mgrp + 1):
        lam_exp = (J + r) * h
        lad = [_beta_x(d2 + 1, lam_exp + 1, p)]
        for s_ in range(smax):
            x = d2 + 1 + s_
            lad.append(lad[-1] * XReal.from_fraction(x / (x + lam_exp + 1), p))
        for k in range(2, K + 1):
            base = k - 2
            acc = XReal.from_int(0, p)
            err = XReal.from_int(0, p)
            for i in range(imax):
                t_i = XReal.from_int(0, p)
                for rp, co in enumerate(rho_pows[i]):
                    if co.value != 0 or co.err != 0:
                        t_i = t_i + co * lad[base + rp]
                acc = acc + t_i if i % 2 == 0 else acc - t_i
                # dropped positive coefficient mass of rho^i (complete sum is rho(1)^i)
                dropped = rho1_x.powi(i) - kept_sums[i]
                if dropped.hi() > 0:
                    err = err + XReal(dropped.hi(), p) * lad[base + M + 1]
            if rho1 != 0:
                err = err + rho1_x.powi(jstar) * lad[base + jstar]
            V[k] = V[k] + acc * inv_hp
            t_k = (err * inv_hp).hi()
            if t_k > 0:
                V[k] = V[k].widened(t_k)
                trunc[k] = gmpy2.context(precision=48, round=gmpy2.RoundUp).add(trunc[k], t_k)
    return V, trunc


_kernel_cache: dict[tuple[ProblemParams, int, int], tuple[dict, dict]] = {}


def _kernel_table(params: ProblemParams, K: int, tol=None) -> tuple[dict[int, XReal], dict[int, mpfr]]:
    """Cached V_k table meeting an absolute truncation tolerance (adaptive J)."""
    K_build = max(K, 16)
    p = params.precision
    target = mpfr(tol, 64) if tol is not None else _ctx_pow2(-(p // 2))
    J = 240
    while True:
        key = (params, K_build, J)
        got = _kernel_cache.get(key)
        if got is None:
            got = _kernel_moments(params, K_build, J)
            _kernel_cache[key] = got
        V, trunc = got
        worst = max(trunc.values())
        if worst <= target:
            return V, trunc
        if J >= 61440:
            raise PrecisionError(
                f"series truncation stalls at {worst} (target {target}) with J={J}"
            )
        J *= 4


def _ctx_pow2(e: int) -> mpfr:
    return gmpy2.context(precision=64).exp2(e)


def i_mn(m: int, n: int, params: ProblemParams, tol=None) -> XReal:
    """Certified interaction integral I_{m,n} (series value with tail radius)."""
    value, _tail = _i_entry(m, n, params, tol)
    return value


def _q_ball(params: ProblemParams, n: int) -> list[XReal]:
    return [XReal.from_fraction(c, params.precision) for c in q_poly(n, params).exact]


def _i_entry(m: int, n: int, params: ProblemParams, tol=None) -> tuple[XReal, mpfr]:
    if min(m, n) < 0:
        raise DomainError("interaction indices must be nonnegative")
    p = params.precision
    V, trunc = _kernel_table(params, m + n + 2, tol)
    s = _poly_mul_ball(_q_ball(params, m), _q_ball(params, n))
    pref = XReal.pi(p).pow_fraction(params.half_d) / log_gamma(params.half_d, p).exp()
    total = XReal.from_int(0, p)
    eu = gmpy2.context(precision=48, round=gmpy2.RoundUp)
    tail = mpfr(0)
    for k in range(2, len(s)):
        total = total + s[k] * V[k]
        tail = eu.add(tail, eu.mul(abs(mpfr(s[k].value, 48)), trunc[k]))
    return pref * total, eu.mul(mpfr(pref.hi(), 48), tail)


def i_matrix(params: ProblemParams, N: int, tol=None) -> IMatrix:
    """Interaction matrix I_{m,n} for 0 <= m, n < N, sharing one kernel table."""
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"matrix size N must be a positive integer, got {N!r}")
    _kernel_table(params, 2 * N, tol)  # warm the shared cache at full degree
    entries = [[None] * N for _ in range(N)]
    tails = [[None] * N for _ in range(N)]
    for m in range(N):
        for n in range(m, N):
            val, tail = _i_entry(m, n, params, tol)
            entries[m][n] = entries[n][m] = val
            tails[m][n] = tails[n][m] = tail
    return IMatrix(
        params=params,
        N=N,
        entries=tuple(tuple(row) for row in entries),
        tail_bound=tuple(tuple(row) for row in tails),
    )


# ---------------------------------------------------------------------------
# the matrix W(lambda) and the polynomial w(lambda)
# ---------------------------------------------------------------------------


def wa_entry(m: int, n: int, lam, scalars: BasisScalars, imatrix: IMatrix) -> XReal:
    """Entry W_{m,n}(lambda) in its rational form (away from the poles mu_j).

    W = I + sum_{j=0..N} c_j(lambda) u_j u_j^T with c_j = lambda sigma_j/(mu_j - lambda)
    and u_j = e_{j-1} - e_j, which expands to the five-term formula

        W_{m,n} = I_{m,n} + lam delta_{m,n} sigma_n / (mu_m - lam)
                  - lam delta_{m+1,n} sigma_n / (mu_{m+1} - lam)
                  - lam delta_{m,n+1} sigma_{n+1} / (mu_m - lam)
                  + lam delta_{m+1,n+1} sigma_{n+1} / (mu_{m+1} - lam).

    Raises PoleProximity when lambda is within the pole-exclusion radius
    2^(-precision/2) (relative) of mu_m or mu_{m+1}.
    """
    N = imatrix.N
    if not (0 <= m < N and 0 <= n < N):
        raise DomainError(f"indices ({m}, {n}) outside the {N} x {N} matrix")
    p = scalars.params.precision
    lam = XReal.coerce(lam, p)
    out = imatrix.entries[m][n]
    if abs(m - n) >= 2:
        return out

    def pole_gap(j: int) -> XReal:
        gap = scalars.mu(j) - lam
        tol = _ctx_pow2(-(p // 2))
        cu = gmpy2.context(precision=64, round=gmpy2.RoundUp)
        scale = cu.maxnum(mpfr(1), abs(mpfr(scalars.mu(j).value, 64)))
        if (not abs(gap.value) > gap.err) or abs(gap.value) < cu.mul(tol, scale):
            raise PoleProximity(
                f"lambda = {lam.value} is within the exclusion radius of mu_{j}"
            )
        return gap

    if m == n:
        out = out + lam * scalars.sigma(n) / pole_gap(m)
        out = out + lam * scalars.sigma(n + 1) / pole_gap(m + 1)
    elif n == m + 1:
        out = out - lam * scalars.sigma(n) / pole_gap(m + 1)
    else:  # n == m - 1
        out = out - lam * scalars.sigma(m) / pole_gap(m)
    return out


def _ball_det(M: Matrix) -> XReal:
    """Determinant by Gaussian elimination with midpoint partial pivoting."""
    n = len(M)
    p = min(x.precision for row in M for x in row)
    A = [list(row) for row in M]
    det = XReal.from_int(1, p)
    negate = False
    for c in range(n):
        piv_row = max(range(c, n), key=lambda r: abs(A[r][c].value))
        if piv_row != c:
            A[c], A[piv_row] = A[piv_row], A[c]
            negate = not negate
        pivot = A[c][c]
        det = det * pivot
        if c == n - 1:
            break
        try:
            inv_terms = [(r, A[r][c] / pivot) for r in range(c + 1, n) if A[r][c].value != 0 or A[r][c].err != 0]
        except PrecisionError as exc:
            raise PrecisionError(f"elimination pivot {c} cannot be certified nonzero: {exc}")
        for r, f in inv_terms:
            row_r, row_c = A[r], A[c]
            for k in range(c + 1, n):
                row_r[k] = row_r[k] - f * row_c[k]
    return -det if negate else det


def _w_eval_schur(lam: XReal, scalars: BasisScalars, imatrix: IMatrix) -> XReal:
    """w(lambda) = prod (mu_j - lambda) * det W(lambda); needs lambda off the poles."""
    N = imatrix.N
    p = scalars.params.precision
    W = [list(row) for row in imatrix.entries]
    prod = XReal.from_int(1, p)
    for j in range(N + 1):
        gap = scalars.mu(j) - lam
        prod = prod * gap
        c_j = lam * scalars.sigma(j) / gap  # raises PrecisionError at a pole
        if j >= 1:
            W[j - 1][j - 1] = W[j - 1][j - 1] + c_j
        if j < N:
            W[j][j] = W[j][j] + c_j
        if 1 <= j < N:
            W[j - 1][j] = W[j - 1][j] - c_j
            W[j][j - 1] = W[j][j - 1] - c_j
    return prod * _ball_det(W)


def _w_eval_block(lam: XReal, scalars: BasisScalars, imatrix: IMatrix) -> XReal:
    """Pole-free form: determinant of the (2N+1)-square block matrix
    [[I, -U], [lam S U^T, diag(mu_j - lambda)]], whose entries are linear in
    lambda; its determinant equals w(lambda) identically (Schur complement of
    the diagonal block), so poles never arise.
    """
    N = imatrix.N
    p = scalars.params.precision
    size = 2 * N + 1
    zero = XReal.from_int(0, p)
    Mb = [[zero] * size for _ in range(size)]
    for i in range(N):
        for j in range(N):
            Mb[i][j] = imatrix.entries[i][j]
    one = XReal.from_int(1, p)
    for j in range(N + 1):
        lam_sig = lam * scalars.sigma(j)
        if 1 <= j:
            if j - 1 < N:
                Mb[j - 1][N + j] = -one
                Mb[N + j][j - 1] = lam_sig
        if j < N:
            Mb[j][N + j] = one
            Mb[N + j][j] = -lam_sig
        Mb[N + j][N + j] = scalars.mu(j) - lam
    return _ball_det(Mb)


def w_eval(lam, params: ProblemParams, scalars: BasisScalars | None = None, imatrix: IMatrix | None = None) -> XReal:
    """Certified value of the degree-(N+1) polynomial w at lambda.

    Uses the fast rational (Schur) form away from the poles mu_j and the
    pole-free block determinant near them; both forms agree identically.
    """
    if scalars is None:
        scalars = scalars_for(params)
    if imatrix is None:
        raise DomainError("w_eval needs the interaction matrix (build it with i_matrix)")
    p = params.precision
    lam = XReal.coerce(lam, p)
    near_pole = False
    cu = gmpy2.context(precision=64, round=gmpy2.RoundUp)
    tol = _ctx_pow2(-max(32, p // 3))
    for j in range(imatrix.N + 1):
        mu_j = scalars.mu(j)
        gap = abs(mpfr(cu.sub(mpfr(lam.value, 64), mpfr(mu_j.value, 64)), 64))
        scale = cu.maxnum(mpfr(1), abs(mpfr(mu_j.value, 64)))
        if gap < cu.mul(tol, scale):
            near_pole = True
            break
    if not near_pole:
        try:
            return _w_eval_schur(lam, scalars, imatrix)
        except PrecisionError:
            pass
    return _w_eval_block(lam, scalars, imatrix)


# ---------------------------------------------------------------------------
# root isolation
# ---------------------------------------------------------------------------


def _chebyshev_seeds(evaluate, lam_hi: mpfr, degree: int, oversample: int = 0) -> list[float]:
    """Float seeds for the roots of a degree-``degree`` polynomial on (0, inf).

    The polynomial is interpolated exactly (up to rounding) at Chebyshev nodes
    on [0, lam_hi]; the colleague-matrix roots of the interpolant are then the
    roots of w itself, including any beyond lam_hi.
    """
    import numpy as np
    from numpy.polynomial import chebyshev as ncheb

    npts = degree + 1 + oversample
    ks = np.arange(npts)
    xs = np.cos(np.pi * (2 * ks + 1) / (2 * npts))
    lam_f = float(lam_hi)
    vals = [evaluate((float(x) + 1.0) * lam_f / 2.0) for x in xs]
    scale = max(abs(v) for v in vals)
    if scale == 0:
        return []
    y = np.array([float(v / scale) for v in vals])
    coef = ncheb.chebfit(xs, y, degree)
    roots = ncheb.chebroots(coef)
    seeds = []
    for r in np.atleast_1d(roots):
        if abs(complex(r).imag) < 1e-6:
            lam_seed = (complex(r).real + 1.0) * lam_f / 2.0
            if lam_seed > 0:
                seeds.append(lam_seed)
    return sorted(seeds)


def _certified_sign(x: XReal) -> int | None:
    try:
        return x.sign()
    except PrecisionError:
        return None


def _newton_polish(seed: mpfr, evaluate_mid, p: int, lo: mpfr, hi: mpfr) -> mpfr:
    """Refine a root of the midpoint polynomial by damped Newton with secant slope."""
    saved = gmpy2.get_context()
    gmpy2.set_context(gmpy2.context(precision=p + 32))
    try:
        x = mpfr(seed)
        for _ in range(80):
            f = evaluate_mid(x)
            step_h = max(abs(x), mpfr(1)) * mpfr(2) ** (-(p // 2))
            fp = (evaluate_mid(x + step_h) - f) / step_h
            if fp == 0:
                break
            nxt = x - f / fp
            if not lo < nxt < hi:
                nxt = (x + (hi if nxt >= hi else lo)) / 2
            if abs(nxt - x) <= abs(x) * mpfr(2) ** (-(p - 8)):
                return nxt
            x = nxt
        return x
    finally:
        gmpy2.set_context(saved)


def w_roots(params: ProblemParams, scalars: BasisScalars | None = None, imatrix: IMatrix | None = None) -> list[XReal]:
    """All N+1 roots of w, certified: each enclosure comes from a sign-change
    bracket of certified evaluations, the k-th root in the k-th bracket.

    Raises RootCountMismatch if N+1 pairwise-disjoint sign-change brackets
    cannot be produced even after refining the interpolation grid and doubling
    the search scale.
    """
    if scalars is None:
        scalars = scalars_for(params)
    if imatrix is None:
        raise DomainError("w_roots needs the interaction matrix (build it with i_matrix)")
    N = imatrix.N
    p = params.precision
    degree = N + 1

    ub = upper_bounds(params, N)
    two_mu = 2 * scalars.mu(N + 1)
    lam_hi_x = two_mu
    alt = XReal.from_fraction(Fraction(11, 10), p) * ub.values[N - 1]
    if alt.value > lam_hi_x.value:
        lam_hi_x = alt

    def evaluate(t) -> XReal:
        return w_eval(t, params, scalars, imatrix)

    def evaluate_mid(t) -> mpfr:
        return evaluate(t).value

    last_error = "no attempt"
    for attempt, (oversample, widen) in enumerate([(0, 1), (degree, 1), (0, 2), (degree, 2)]):
        lam_hi = mpfr(lam_hi_x.value, p) * widen
        seeds = _chebyshev_seeds(evaluate_mid, lam_hi, degree, oversample)
        if len(seeds) != degree:
            last_error = f"interpolant produced {len(seeds)} real positive roots, wanted {degree}"
            continue
        enclosures = _certify_roots(seeds, evaluate, evaluate_mid, p)
        if enclosures is not None:
            return enclosures
        last_error = "bracket certification failed between close seeds"
    raise RootCountMismatch(
        f"could not isolate {degree} roots for N={N}, d={params.d}, alpha={params.alpha}: {last_error}"
    )


def _certify_roots(seeds: list[float], evaluate, evaluate_mid, p: int) -> list[XReal] | None:
    """Turn sorted float seeds into disjoint certified sign-change enclosures."""
    degree = len(seeds)
    # probe points separating the seeds; w(0) > 0 anchors the left end
    probes: list[mpfr] = [mpfr(0)]
    for a, b in zip(seeds, seeds[1:]):
        probes.append(mpfr((a + b) / 2))
    last_gap = seeds[-1] - (seeds[-2] if degree > 1 else 0)
    probes.append(mpfr(seeds[-1] + max(last_gap, seeds[-1] * 0.5)))

    signs: list[int] = []
    for idx, pt in enumerate(probes):
        s = _certified_sign(evaluate(pt))
        if s is None or s == 0:
            # nudge within the space between neighbouring seeds
            lo_lim = seeds[idx - 1] if idx > 0 else 0.0
            hi_lim = seeds[idx] if idx < degree else float(pt) * 1.5
            for frac in (0.3, 0.7, 0.45, 0.55, 0.2, 0.8):
                cand = mpfr(lo_lim + (hi_lim - lo_lim) * frac)
                s = _certified_sign(evaluate(cand))
                if s is not None and s != 0:
                    probes[idx] = cand
                    break
            else:
                return None
        signs.append(s)
    if any(sa * sb >= 0 for sa, sb in zip(signs, signs[1:])):
        return None  # a gap holds zero or two roots; caller refines seeds

    out: list[XReal] = []
    for k in range(degree):
        a, b = probes[k], probes[k + 1]
        sa = signs[k]
        x = _newton_polish(mpfr(seeds[k], p), evaluate_mid, p, a, b)
        enclosure = None
        for shift in (p - 24, p - 48, 3 * p // 4, p // 2, p // 3):
            delta = max(abs(x), mpfr(1)) * mpfr(2) ** (-shift)
            lo_pt, hi_pt = x - delta, x + delta
            if not a < lo_pt < hi_pt < b:
                continue
            s_lo = _certified_sign(evaluate(lo_pt))
            s_hi = _certified_sign(evaluate(hi_pt))
            if s_lo == sa and s_hi == -sa:
                enclosure = XReal(mpfr(x, p), p).widened(delta)
                break
        if enclosure is None:
            enclosure = _bisect_certified(a, b, sa, evaluate, p)
            if enclosure is None:
                return None
        out.append(enclosure)
    return out


def _bisect_certified(a: mpfr, b: mpfr, sign_a: int, evaluate, p: int) -> XReal | None:
    """Certified bisection fallback: shrink [a, b] keeping definite opposite signs."""
    width_target = max(abs(a), abs(b), mpfr(1)) * mpfr(2) ** (-(p // 2))
    lo, hi = mpfr(a, p + 16), mpfr(b, p + 16)
    for _ in range(2 * p):
        if hi - lo <= width_target:
            break
        mid = (lo + hi) / 2
        s = _certified_sign(evaluate(mid))
        if s is None or s == 0:
            # try a lopsided split before giving up
            mid = lo + (hi - lo) / 3
            s = _certified_sign(evaluate(mid))
            if s is None or s == 0:
                return None
        if s == sign_a:
            lo = mid
        else:
            hi = mid
    center = (lo + hi) / 2
    return XReal(mpfr(center, p), p).widened((hi - lo) / 2)


# ---------------------------------------------------------------------------
# assembled lower bounds
# ---------------------------------------------------------------------------


def lower_bounds(params: ProblemParams, N: int, length: int = 10, tol=None) -> LowerBounds:
    """Certified lower bounds for the first ``length`` radial eigenvalues.

    The sequence is the nondecreasing merge of the N+1 roots of w with the
    base scalars mu_n for n >= N+1; for N = 0 it is mu_n directly.  The merge
    order matters: a root may exceed later mu values and the merged sequence
    is what bounds the eigenvalues entrywise.
    """
    if not isinstance(N, int) or N < 0:
        raise DomainError(f"block size N must be a nonnegative integer, got {N!r}")
    if not isinstance(length, int) or length < 1:
        raise DomainError(f"length must be a positive integer, got {length!r}")

    def attempt(p: int) -> LowerBounds:
        pp = params.with_precision(p)
        table = scalars_for(pp)
        if N == 0:
            vals = tuple(table.mu(n) for n in range(length))
            return LowerBounds(params=params, N=0, values=vals, roots=(), merged_tail=vals)
        imat = i_matrix(pp, N, tol)
        roots = w_roots(pp, table, imat)
        tail = [table.mu(n) for n in range(N + 1, N + 1 + length)]
        merged = sorted(roots + tail, key=lambda x: x.value)[:length]
        return LowerBounds(
            params=params,
            N=N,
            values=tuple(merged),
            roots=tuple(roots),
            merged_tail=tuple(tail),
        )

    return escalate(attempt, params.precision)
