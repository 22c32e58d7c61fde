"""Extended-precision ball arithmetic and the special functions behind every formula.

The workhorse type is :class:`XReal`: an MPFR floating-point value together with
a certified absolute error radius, so the exact quantity is always contained in
``[value - err, value + err]``.  All arithmetic propagates the radius outward
(error arithmetic is done in a small upward-rounding context), which lets the
bound modules report numbers that remain true bounds after every rounding step.

MPFR primitives are correctly rounded (error <= 0.5 ulp), so a fresh result at
precision p carries a rounding radius of at most |value| * 2^(1-p).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar, Union

import gmpy2
from gmpy2 import mpfr, mpq

MIN_PRECISION = 64
MAX_PRECISION = 4096
ESCALATION_STEP = 64

# Error radii never need many digits, only a sound magnitude; they are kept at a
# small fixed precision and *always* rounded upward.
_ERR_PRECISION = 48

Real = Union["XReal", int, float, Fraction, mpfr]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PrecisionError(ArithmeticError):
    """A certified result could not be produced, even at the precision cap."""


# ---------------------------------------------------------------------------
# rounding contexts
# ---------------------------------------------------------------------------

_context_cache: dict[tuple[int, int], gmpy2.context] = {}


def _ctx(precision: int, mode: int = gmpy2.RoundToNearest) -> gmpy2.context:
    key = (precision, mode)
    ctx = _context_cache.get(key)
    if ctx is None:
        ctx = gmpy2.context(precision=precision, round=mode)
        _context_cache[key] = ctx
    return ctx


def _up(precision: int) -> gmpy2.context:
    return _ctx(precision, gmpy2.RoundUp)


def _down(precision: int) -> gmpy2.context:
    return _ctx(precision, gmpy2.RoundDown)


_EU = _ctx(_ERR_PRECISION, gmpy2.RoundUp)  # error arithmetic, rounded up
_ED = _ctx(_ERR_PRECISION, gmpy2.RoundDown)

_ZERO = mpfr(0)


# NOTE: bare Python operators on mpfr (-x, abs(x), x * y, ...) round through
# gmpy2's ambient thread context (53 bits by default) and silently destroy
# precision.  Everything below therefore goes through explicit contexts; the
# two helpers give |v| rounded in a chosen direction at the error precision.


def _abs_up(v: mpfr) -> mpfr:
    return _EU.maxnum(_EU.minus(v), _EU.add(v, _ZERO))


def _abs_down(v: mpfr) -> mpfr:
    return _ED.maxnum(_ED.minus(v), _ED.add(v, _ZERO))


def _norm_err(err) -> mpfr:
    """Coerce an error radius to the error precision, rounding upward."""
    if isinstance(err, mpfr):
        return _EU.add(err, _ZERO)
    if isinstance(err, (int, float, Fraction, mpq)):
        return _EU.add(_ZERO, mpq(err))
    raise DomainError(f"cannot use {type(err).__name__} as an error radius")


def _validate_precision(precision: int) -> int:
    if not isinstance(precision, int) or precision < MIN_PRECISION:
        raise DomainError(f"precision must be an integer >= {MIN_PRECISION} bits, got {precision!r}")
    if precision > MAX_PRECISION:
        raise DomainError(f"precision must be <= {MAX_PRECISION} bits, got {precision!r}")
    return precision


def _rounding_radius(value: mpfr, precision: int) -> mpfr:
    # |fl(x) - x| <= 0.5 ulp(fl(x)) <= |fl(x)| * 2^-precision; a factor-2 guard
    # keeps the bound sound without reasoning about exponent edge cases.
    if value == 0:
        return _ZERO
    return _EU.mul(_abs_up(value), _EU.exp2(1 - precision))


def _exact_op(precision: int, name: str, *args) -> tuple[mpfr, mpfr]:
    """Run one correctly rounded operation and report (result, rounding radius).

    The radius is 0 whenever MPFR's sticky inexact flag stays clear, i.e. the
    result is the exact real number; integer matrices then factor exactly.
    """
    c = _ctx(precision)
    c.clear_flags()
    v = getattr(c, name)(*args)
    rad = _rounding_radius(v, precision) if c.inexact else _ZERO
    return v, rad


class XReal:
    """A real number enclosure: ``value`` with certified absolute radius ``err``.

    Instances are immutable by convention.  ``precision`` is the working MPFR
    precision for the midpoint; ``err`` is a nonnegative upper bound on the
    distance between ``value`` and the exact quantity.
    """

    __slots__ = ("value", "precision", "err")

    def __init__(self, value: mpfr, precision: int, err=_ZERO):
        _validate_precision(precision)
        err = _norm_err(err)
        if gmpy2.is_nan(value):
            raise DomainError("XReal value must not be NaN")
        if err < 0 or (gmpy2.is_finite(value) and not gmpy2.is_finite(err)):
            raise DomainError("XReal err must be finite and nonnegative")
        self.value = value
        self.precision = precision
        self.err = err

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_int(n: int, precision: int) -> "XReal":
        v = mpfr(n, _validate_precision(precision))
        e = _ZERO if mpq(v) == n else _rounding_radius(v, precision)
        return XReal(v, precision, e)

    @staticmethod
    def from_fraction(q, precision: int) -> "XReal":
        """Convert an exact rational; err is 0 whenever the value is exactly representable."""
        q = mpq(q)
        v = mpfr(q, _validate_precision(precision))
        e = _ZERO if gmpy2.is_finite(v) and mpq(v) == q else _rounding_radius(v, precision)
        return XReal(v, precision, e)

    @staticmethod
    def from_float(x: float, precision: int) -> "XReal":
        # Python floats are exact binary rationals; no radius needed.
        return XReal(mpfr(x, _validate_precision(precision)), precision)

    @staticmethod
    def pi(precision: int) -> "XReal":
        v = _ctx(_validate_precision(precision)).const_pi()
        return XReal(v, precision, _rounding_radius(v, precision))

    @staticmethod
    def coerce(x: Real, precision: int) -> "XReal":
        if isinstance(x, XReal):
            return x
        if isinstance(x, bool):
            raise DomainError("bool is not a real number here")
        if isinstance(x, int):
            return XReal.from_int(x, precision)
        if isinstance(x, Fraction) or isinstance(x, mpq):
            return XReal.from_fraction(x, precision)
        if isinstance(x, float):
            return XReal.from_float(x, precision)
        if isinstance(x, mpfr):
            v = mpfr(x, precision)
            e = _ZERO if v == x else _rounding_radius(v, precision)
            return XReal(v, precision, e)
        raise DomainError(f"cannot interpret {type(x).__name__} as a real number")

    # -- enclosure queries ----------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.err == 0

    def lo(self) -> mpfr:
        """Certified lower endpoint (rounded downward)."""
        return _down(self.precision).sub(self.value, self.err)

    def hi(self) -> mpfr:
        """Certified upper endpoint (rounded upward)."""
        return _up(self.precision).add(self.value, self.err)

    def width(self) -> mpfr:
        return _EU.mul(self.err, mpfr(2))

    def contains(self, q: Real) -> bool:
        q = mpq(q) if isinstance(q, (int, Fraction)) else mpq(mpfr(q))
        return mpq(self.lo()) <= q <= mpq(self.hi())

    def definitely_positive(self) -> bool:
        return self.lo() > 0

    def definitely_negative(self) -> bool:
        return self.hi() < 0

    def sign(self) -> int:
        """-1, 0 or +1 when the enclosure has a definite sign, else raise."""
        if self.definitely_positive():
            return 1
        if self.definitely_negative():
            return -1
        if self.is_exact and self.value == 0:
            return 0
        raise PrecisionError("enclosure straddles zero; sign is not certified")

    def definitely_less(self, other: "XReal") -> bool:
        return self.hi() < other.lo()

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"XReal({self.value!r} +- {self.err!r}, {self.precision}b)"

    # -- arithmetic -----------------------------------------------------------

    def _peer(self, other: Real) -> "XReal":
        return XReal.coerce(other, self.precision)

    def __add__(self, other: Real) -> "XReal":
        o = self._peer(other)
        p = min(self.precision, o.precision)
        v, rad = _exact_op(p, "add", self.value, o.value)
        e = _EU.add(_EU.add(self.err, o.err), rad)
        return XReal(v, p, e)

    __radd__ = __add__

    def __sub__(self, other: Real) -> "XReal":
        o = self._peer(other)
        p = min(self.precision, o.precision)
        v, rad = _exact_op(p, "sub", self.value, o.value)
        e = _EU.add(_EU.add(self.err, o.err), rad)
        return XReal(v, p, e)

    def __rsub__(self, other: Real) -> "XReal":
        return self._peer(other).__sub__(self)

    def __mul__(self, other: Real) -> "XReal":
        o = self._peer(other)
        p = min(self.precision, o.precision)
        v, rad = _exact_op(p, "mul", self.value, o.value)
        if self.err == 0 and o.err == 0:
            return XReal(v, p, rad)
        # |ab - a'b'| <= |a'| eb + |b'| ea + ea eb, then the rounding of a'b'.
        e = _EU.add(
            _EU.add(_EU.mul(_abs_up(self.value), o.err), _EU.mul(_abs_up(o.value), self.err)),
            _EU.add(_EU.mul(self.err, o.err), rad),
        )
        return XReal(v, p, e)

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> "XReal":
        o = self._peer(other)
        if not _abs_down(o.value) > o.err:
            raise PrecisionError("division by an enclosure containing zero")
        p = min(self.precision, o.precision)
        v, rad = _exact_op(p, "div", self.value, o.value)
        if self.err == 0 and o.err == 0:
            return XReal(v, p, rad)
        # |a/b - a'/b'| <= (ea |b'| + eb |a'|) / (|b'| (|b'| - eb)).
        num = _EU.add(_EU.mul(self.err, _abs_up(o.value)), _EU.mul(o.err, _abs_up(self.value)))
        den = _ED.mul(_abs_down(o.value), _ED.sub(_abs_down(o.value), o.err))
        e = _EU.add(_EU.div(num, den), rad)
        return XReal(v, p, e)

    def __rtruediv__(self, other: Real) -> "XReal":
        return self._peer(other).__truediv__(self)

    def __neg__(self) -> "XReal":
        # sign flip at the operand's own precision is exact
        return XReal(_ctx(self.precision).minus(self.value), self.precision, self.err)

    def __abs__(self) -> "XReal":
        v = self.value
        if v < 0:
            v = _ctx(self.precision).minus(v)
        return XReal(v, self.precision, self.err)

    def _monotone(self, name: str, lo_domain: mpfr | None = None) -> "XReal":
        """Apply a monotone increasing MPFR function by directed endpoint evaluation."""
        p = self.precision
        lo, hi = self.lo(), self.hi()
        if lo_domain is not None and not lo >= lo_domain:
            raise DomainError(f"{name} applied to an enclosure leaving its domain (lo={lo})")
        v = getattr(_ctx(p), name)(self.value)
        fhi = getattr(_up(p), name)(hi)
        flo = getattr(_down(p), name)(lo)
        e = _EU.maxnum(_EU.sub(fhi, v), _EU.sub(v, flo))
        return XReal(v, p, _EU.maxnum(e, _ZERO))

    def sqrt(self) -> "XReal":
        """Square root; an enclosure straddling zero from below is clipped to [0, hi].

        Clipping is sound whenever the enclosed quantity is nonnegative by
        construction (sums of squares whose midpoint rounds below the radius);
        an enclosure certainly below zero still raises DomainError.
        """
        lo, hi = self.lo(), self.hi()
        if hi < 0:
            raise DomainError(f"sqrt of an enclosure certainly negative (hi={hi})")
        if lo >= 0:
            return self._monotone("sqrt", _ZERO)
        p = self.precision
        mid = self.value if self.value > 0 else _ZERO
        v = _ctx(p).sqrt(mid)
        fhi = _up(p).sqrt(hi)
        e = _EU.maxnum(_EU.sub(fhi, v), _EU.add(v, _ZERO))
        return XReal(v, p, e)

    def exp(self) -> "XReal":
        return self._monotone("exp")

    def log(self) -> "XReal":
        if not self.lo() > 0:
            raise DomainError("log of an enclosure not strictly positive")
        return self._monotone("log")

    def powi(self, k: int) -> "XReal":
        """Integer power by repeated squaring (k may be negative)."""
        if k == 0:
            return XReal.from_int(1, self.precision)
        if k < 0:
            return XReal.from_int(1, self.precision) / self.powi(-k)
        acc = None
        base = self
        while k:
            if k & 1:
                acc = base if acc is None else acc * base
            base = base * base
            k >>= 1
        return acc

    def root(self, q: int) -> "XReal":
        """q-th root of a positive enclosure (q >= 1), by directed endpoints."""
        if q == 1:
            return self
        if not self.lo() >= 0:
            raise DomainError("root of an enclosure not nonnegative")
        p = self.precision
        v = _ctx(p).rootn(self.value, q)
        fhi = _up(p).rootn(self.hi(), q)
        flo = _down(p).rootn(self.lo(), q)
        e = _EU.maxnum(_EU.sub(fhi, v), _EU.sub(v, flo))
        return XReal(v, p, _EU.maxnum(e, _ZERO))

    def pow_fraction(self, c) -> "XReal":
        """x**c for rational c and positive x, via exact root-then-integer-power."""
        c = Fraction(c)
        if not self.lo() > 0:
            raise DomainError("pow_fraction needs a strictly positive enclosure")
        return self.root(c.denominator).powi(c.numerator)

    def widened(self, extra) -> "XReal":
        return XReal(self.value, self.precision, _EU.add(self.err, _norm_err(extra)))


# ---------------------------------------------------------------------------
# gamma-family special functions
# ---------------------------------------------------------------------------


def _abs_digamma_bound(lo: mpfr, hi: mpfr, precision: int) -> mpfr:
    """Certified upper bound for sup |psi| on [lo, hi] with lo > 0.

    psi is increasing on (0, oo) (its derivative, the trigamma function, is a
    sum of positive terms), so the supremum of |psi| is attained at an endpoint.
    """
    cu, cd = _up(precision), _down(precision)
    candidates = [
        _abs_up(cu.digamma(lo)),
        _abs_up(cd.digamma(lo)),
        _abs_up(cu.digamma(hi)),
        _abs_up(cd.digamma(hi)),
    ]
    return _EU.maxnum(_EU.maxnum(candidates[0], candidates[1]), _EU.maxnum(candidates[2], candidates[3]))


def log_gamma(x: Real, precision: int = 256) -> XReal:
    """ln Gamma(x) for x > 0, with a certified error radius.

    The MPFR log-gamma is correctly rounded; an inexact argument is propagated
    through the certified bound |ln Gamma(a) - ln Gamma(b)| <= sup|psi| * |a - b|.
    """
    _validate_precision(precision)
    x = XReal.coerce(x, precision)
    lo = x.lo()
    if not (gmpy2.is_finite(x.value) and lo > 0):
        raise DomainError(f"log_gamma requires a strictly positive finite argument, got {x!r}")
    v, _sign = _ctx(precision).lgamma(x.value)
    e = _rounding_radius(v, precision)
    if not x.is_exact:
        e = _EU.add(e, _EU.mul(x.err, _abs_digamma_bound(lo, x.hi(), precision)))
    return XReal(v, precision, e)


def gamma_ratio(a: Real, b: Real, precision: int = 256) -> XReal:
    """Gamma(a) / Gamma(b) for a, b > 0, evaluated as exp(lnGamma(a) - lnGamma(b))."""
    return (log_gamma(a, precision) - log_gamma(b, precision)).exp()


def _nearest_nonpositive_integer_distance(v: mpfr) -> tuple[int, mpfr]:
    k = int(gmpy2.rint(v))
    if k > 0:
        k = 0
    diff = _up(v.precision).sub(v, mpfr(k, v.precision))
    if diff < 0:
        diff = _up(v.precision).minus(diff)
    return k, diff


def recip_gamma(x: Real, precision: int = 256) -> XReal:
    """1 / Gamma(x) for any finite real x (an entire function).

    Returns exactly 0 at nonpositive integers.  Exact rational arguments are
    pole-tested with exact arithmetic; inexact arguments use an integrality
    tolerance of 2^(-precision/2), under which an ambiguous argument is treated
    as the pole (the caller's escalation protocol re-runs at higher precision).
    """
    _validate_precision(precision)
    if isinstance(x, bool):
        raise DomainError("bool is not a real number here")
    if isinstance(x, (int, Fraction)) or isinstance(x, mpq):
        q = Fraction(x) if not isinstance(x, mpq) else Fraction(int(mpq(x).numerator), int(mpq(x).denominator))
        if q <= 0 and q.denominator == 1:
            return XReal(_ZERO, precision)
        xb = XReal.from_fraction(q, precision)
    else:
        xb = XReal.coerce(x, precision)
        if not gmpy2.is_finite(xb.value):
            raise DomainError("recip_gamma requires a finite argument")
        k, dist = _nearest_nonpositive_integer_distance(xb.value)
        if xb.value <= 0.5 and dist <= _ctx(precision).exp2(-(precision // 2)):
            return XReal(_ZERO, precision)

    if xb.lo() > 0:
        return (-log_gamma(xb, precision)).exp()

    # Negative non-integer argument: 1/Gamma(x) = sign * exp(-ln|Gamma(x)|).
    v, sign = _ctx(precision).lgamma(xb.value)
    e = _rounding_radius(v, precision)
    if not xb.is_exact:
        # d/dx ln|Gamma(x)| = psi(x).  On a pole-free interval around x < 0,
        # psi(x) = psi(1 - x) - pi/tan(pi x), and |1/tan(pi t)| <= 1/(pi dist)
        # where dist is the distance to the nearest integer (tan t >= t).
        lo, hi = xb.lo(), xb.hi()
        if int(gmpy2.floor(lo)) != int(gmpy2.floor(hi)):
            raise PrecisionError("recip_gamma enclosure spans a pole of Gamma")
        dist = _ED.minnum(_ED.sub(lo, gmpy2.floor(lo)), _ED.sub(gmpy2.ceil(hi), hi))
        if not dist > 0:
            raise PrecisionError("recip_gamma enclosure touches a pole of Gamma")
        refl_lo = _down(precision).sub(mpfr(1), hi)
        refl_hi = _up(precision).sub(mpfr(1), lo)
        psi_bound = _EU.add(_abs_digamma_bound(refl_lo, refl_hi, precision), _EU.div(mpfr(1), dist))
        e = _EU.add(e, _EU.mul(xb.err, psi_bound))
    lg = XReal(v, precision, e)
    out = (-lg).exp()
    return out if sign > 0 else -out


def log_beta(a: Real, b: Real, precision: int = 256) -> XReal:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b), for a, b > 0."""
    ab = XReal.coerce(a, precision) + XReal.coerce(b, precision)
    return log_gamma(a, precision) + log_gamma(b, precision) - log_gamma(ab, precision)


# ---------------------------------------------------------------------------
# radial polynomials
# ---------------------------------------------------------------------------


class RadialPolynomial:
    """A polynomial in t = |x|^2 on [0, 1], with exact rational coefficients.

    Coefficients are carried internally as exact fractions (the hypergeometric
    coefficients are rational for rational alpha), and rendered to XReal at the
    stored working precision on demand via :attr:`coeffs`.
    """

    __slots__ = ("exact", "precision")

    def __init__(self, exact: Sequence[Fraction], precision: int):
        _validate_precision(precision)
        self.exact = tuple(Fraction(c) for c in exact)
        if not self.exact:
            raise DomainError("a polynomial needs at least one coefficient")
        self.precision = precision

    @property
    def coeffs(self) -> list[XReal]:
        return [XReal.from_fraction(c, self.precision) for c in self.exact]

    @property
    def degree(self) -> int:
        return len(self.exact) - 1

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        return f"RadialPolynomial({[str(c) for c in self.exact]}, {self.precision}b)"


def radial_poly(n: int, d: int, alpha, precision: int = 256) -> RadialPolynomial:
    """Degree-n radial basis polynomial in t = |x|^2.

    Coefficients follow the terminating hypergeometric series with parameters
    (-n, (d + alpha)/2 + n; d/2): c_0 = 1 and
    c_{k+1} = c_k * (k - n) * ((d + alpha)/2 + n + k) / ((d/2 + k) * (k + 1)).
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"index n must be a nonnegative integer, got {n!r}")
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"dimension d must be a positive integer, got {d!r}")
    alpha = Fraction(alpha)
    if not (0 < alpha <= 2):
        raise DomainError(f"alpha must lie in (0, 2], got {alpha}")
    half_d = Fraction(d, 2)
    upper = Fraction(d + alpha, 2) + n
    coeffs = [Fraction(1)]
    for k in range(n):
        coeffs.append(coeffs[-1] * (k - n) * (upper + k) / ((half_d + k) * (k + 1)))
    return RadialPolynomial(coeffs, precision)


def poly_eval(p: RadialPolynomial | Sequence[Real], t: Real, precision: int | None = None) -> XReal:
    """Horner evaluation of a polynomial in t, with propagated error radius."""
    if isinstance(p, RadialPolynomial):
        prec = precision or p.precision
        coeffs = [XReal.from_fraction(c, prec) for c in p.exact]
    else:
        coeffs = list(p)
        if not coeffs:
            raise DomainError("a polynomial needs at least one coefficient")
        prec = precision or max(
            (c.precision for c in coeffs if isinstance(c, XReal)), default=256
        )
        coeffs = [XReal.coerce(c, prec) for c in coeffs]
    t = XReal.coerce(t, prec)
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


# ---------------------------------------------------------------------------
# precision escalation
# ---------------------------------------------------------------------------

T = TypeVar("T")


def escalate(step: Callable[[int], T], precision: int, p_max: int = MAX_PRECISION) -> T:
    """Run ``step(p)`` at increasing precision until it stops raising PrecisionError.

    The ladder is p, p + 64, p + 128, ... doubling the increment, capped at
    ``p_max``; the final failure is re-raised with the attempted ladder attached.
    """
    _validate_precision(precision)
    attempts = []
    p = precision
    bump = ESCALATION_STEP
    while True:
        try:
            return step(p)
        except PrecisionError as exc:
            attempts.append((p, str(exc)))
            if p >= p_max:
                raise PrecisionError(
                    f"could not certify the result at any precision up to {p_max} bits; "
                    f"attempts: {attempts}"
                ) from exc
            p = min(p + bump, p_max)
            bump *= 2
