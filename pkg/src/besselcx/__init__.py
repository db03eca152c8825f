"""besselcx: Bessel kernels of complex order over the complex plane.

Evaluates the classical Bessel family (J, H, I, K, Kummer M) at complex
order and branch-tracked complex argument, the two-variable Bessel
kernel built from conjugate products, and verifies the exponential
integral identities tying the kernel to its Fourier and radial-Laplace
transforms, alongside an exact combinatorial certificate suite.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .combinatorics import (
    BigRational,
    Certificate,
    RationalPolynomial,
    a_coeff,
    b_coeff,
    binomial,
    d_coeff,
    p_poly,
    s_k_direct,
    s_k_simplified,
    s_kl,
)
from .complexbessel import (
    GFValue,
    NormalizedDirection,
    OrderPair,
    bold_j,
    bold_j_asymptotic,
    bold_j_grid,
    bold_j_integral_rep,
    bold_j_sq,
    bold_j_sq_grid,
    f_function,
    g_function,
    h_pair,
    j_pair,
    ode_residual,
)
from .quadrature import (
    QuadratureResult,
    RegularizationSchedule,
    integrate_de,
    integrate_periodic,
    j_exp_gauss_integral,
    kummer_via_integral,
    oscillatory_fourier_integral,
    radial_bessel_integral,
)
from .special import (
    bessel_i,
    bessel_i_derivative,
    bessel_j,
    bessel_k,
    bessel_k_derivative,
    gamma,
    hankel_h1,
    hankel_h2,
    kummer_m,
)
from .types import DEFAULT_CONFIG, EvalConfig, EvaluationError, PolarPoint

__all__ = [
    "__version__",
    "kernel_backend",
    "PolarPoint",
    "EvalConfig",
    "DEFAULT_CONFIG",
    "EvaluationError",
    "OrderPair",
    "NormalizedDirection",
    "GFValue",
    "gamma",
    "bessel_j",
    "hankel_h1",
    "hankel_h2",
    "bessel_i",
    "bessel_k",
    "bessel_i_derivative",
    "bessel_k_derivative",
    "kummer_m",
    "j_pair",
    "bold_j",
    "bold_j_sq",
    "bold_j_grid",
    "bold_j_sq_grid",
    "h_pair",
    "bold_j_asymptotic",
    "bold_j_integral_rep",
    "ode_residual",
    "g_function",
    "f_function",
    "QuadratureResult",
    "RegularizationSchedule",
    "integrate_de",
    "integrate_periodic",
    "radial_bessel_integral",
    "oscillatory_fourier_integral",
    "j_exp_gauss_integral",
    "kummer_via_integral",
    "BigRational",
    "RationalPolynomial",
    "Certificate",
    "binomial",
    "d_coeff",
    "b_coeff",
    "a_coeff",
    "p_poly",
    "s_kl",
    "s_k_direct",
    "s_k_simplified",
]
