"""fraclap: certified two-sided eigenvalue bounds for the fractional Laplacian
on the unit ball with Dirichlet exterior condition.

The library computes, for the operator (-Delta)^(alpha/2) on the unit ball in
R^d, enclosures [lower, upper] of the radial Dirichlet eigenvalues: upper
bounds by a Rayleigh-Ritz projection onto weighted polynomial trial functions,
lower bounds by an intermediate-operator (Aronszajn-type) construction.  All
floating-point work is done in certified ball arithmetic, so reported bounds
hold with rounding errors accounted for.
"""

from fraclap.specfun import (
    DomainError,
    PrecisionError,
    RadialPolynomial,
    XReal,
    gamma_ratio,
    log_gamma,
    poly_eval,
    radial_poly,
    recip_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "PrecisionError",
    "RadialPolynomial",
    "XReal",
    "__version__",
    "gamma_ratio",
    "log_gamma",
    "poly_eval",
    "radial_poly",
    "recip_gamma",
]
