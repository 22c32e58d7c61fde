"""Frozen oracle values and shared assertion helpers for the test suite.

Every constant below was computed independently (45-digit arithmetic via
mpmath, or closed forms evaluated by hand) and frozen here *before* the
library code was written; tests compare library enclosures against these
strings rather than against anything the library itself produced.
"""

from fractions import Fraction

from gmpy2 import mpfr

# --- gamma family ----------------------------------------------------------
LN_SQRT_PI = "0.572364942924700087071713675676529355823647406"  # ln Gamma(1/2)
LN_GAMMA_4_5 = "2.45373657084244222050414250343571615733182351"  # ln Gamma(9/2)
SQRT_PI = "1.77245385090551602729816748334114518279754946"
PI = "3.14159265358979323846264338327950288419716940"

# --- problem-specific anchors (d, alpha as noted) ---------------------------
I_D1_A1 = "10.5498519738462531435919534332256724350610055"  # 64/15 + 2*pi
PI_OVER_16 = "0.196349540849362077403915211454968930262323087"
UPPER0_D1_A1 = "1.15779551343500980063412903247085762267235487"  # 45 pi (33 - sqrt(417)) / 1536
LAMBDA_RELAXED_D1_A1 = "1.19650501455080015918010831980371691878603131"
PI_HALF_SQ = "2.46740110027233965470862274996903778382842485"  # (pi/2)^2
BESSEL_J0_1_SQ = "5.78318596294678452117599575845580703507144181"  # j_{0,1}^2
BESSEL_J35_1_SQ = "48.8311936436191988767343935418"  # j_{7/2,1}^2  (d = 9)
BESSEL_J05_1_SQ = "9.86960440108935861883449099988"  # j_{1/2,1}^2 = pi^2  (d = 3)
BESSEL_J0_4_SQ = "139.040284426459849001591423516"  # j_{0,4}^2  (d = 2, fourth radial)

# d = 2, alpha = 2: smallest distinct squared Bessel zeros j_{l,k}^2 with
# angular multiplicities (1 for l = 0, else 2).
D2_ALPHA2_LEVELS = [
    ("5.78318596294678452117599575845580703507144", 1),
    ("14.6819706421238932572197777686301069896816", 2),
    ("26.3746164271633907701130803553306595088702", 2),
    ("30.4712623436620863990781631750227558484208", 1),
    ("40.7064658182003197420524327044411168927892", 2),
    ("49.2184563216946036702670828463881389324254", 2),
]


def to_mpfr(s: str, precision: int = 400) -> mpfr:
    return mpfr(s, precision)


def assert_tight(x, decimal: str, rel: float = 1e-40, max_err: float = 1e-45):
    """Assert an XReal enclosure agrees with a frozen 45-digit decimal.

    The frozen strings are truncated at ~45 significant digits, so exact
    containment cannot be demanded; instead the midpoint must match to ``rel``
    and the certified radius must itself be small (``max_err`` absolute,
    loose enough for 256-bit arithmetic, tight enough to catch blown bounds).
    """
    oracle = to_mpfr(decimal)
    scale = abs(oracle) if oracle != 0 else mpfr(1)
    assert abs(x.value - oracle) <= rel * scale + x.err, (
        f"midpoint {x.value} vs oracle {decimal}"
    )
    assert x.err <= max_err * scale, f"error radius too large: {x.err}"


def assert_contains_fraction(x, q):
    q = Fraction(q)
    assert x.contains(q), f"{x!r} does not contain {q}"
