"""Hot evaluation kernels with a compiled core and a NumPy fallback.

The compiled Cython extension (``_fast``) and the NumPy reference
(``_ref``) implement the same three array kernels with identical
term-by-term semantics:

    j_series_eval(r, ang, coeffs, tol)        power series of J_nu
    hankel_asym_eval(sign, r, ang, nu, acoeffs, tol)   large-|z| H^(1,2)
    k_asym_eval(r, ang, acoeffs, tol)         large-|z| K_nu

Backend choice happens once at import: the compiled core when available,
else the reference, overridable with BESSELCX_BACKEND=python|compiled.
Order-dependent coefficient tables are built here (cold path) so the
kernels stay pure arithmetic.
"""

import os

import numpy as np
from scipy.special import gammaln, loggamma

_choice = os.environ.get("BESSELCX_BACKEND", "auto")
if _choice not in ("auto", "python", "compiled"):
    raise RuntimeError(f"BESSELCX_BACKEND must be auto|python|compiled, got {_choice!r}")

if _choice == "python":
    from . import _ref as impl

    BACKEND = "python"
else:
    try:
        from . import _fast as impl

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _ref as impl

        BACKEND = "python"

j_series_eval = impl.j_series_eval
hankel_asym_eval = impl.hankel_asym_eval
k_asym_eval = impl.k_asym_eval


def get_backend(name="auto"):
    """Return the kernel module for an explicit backend name (benchmarks)."""
    if name in ("auto", BACKEND):
        return impl
    if name == "python":
        from . import _ref

        return _ref
    if name == "compiled":
        from . import _fast

        return _fast
    raise ValueError(f"unknown backend {name!r}")


def series_coefficients(nu, nmax):
    """c[n] = 1 / (n! * Gamma(nu + n + 1)) for the J power series.

    Built through loggamma so no intermediate overflows; entries where
    Gamma sits exactly on a pole (nu + n + 1 a nonpositive integer) are 0,
    which reproduces J_{-n} = (-1)^n J_n without special-casing.
    """
    n = np.arange(nmax, dtype=np.float64)
    a = nu + 1.0 + n
    with np.errstate(all="ignore"):
        c = np.exp(-loggamma(a) - gammaln(n + 1.0))
    if nu.imag == 0.0:
        on_pole = (a.real == np.rint(a.real)) & (a.real < 0.5)
        c[on_pole] = 0.0
    c[~np.isfinite(c)] = 0.0
    return np.ascontiguousarray(c, dtype=np.complex128)


def hankel_coefficients(nu, kmax):
    """a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (8^k k!), a_0 = 1.

    Shared by the H^(1), H^(2) and K large-argument expansions.
    """
    a = np.empty(kmax, dtype=np.complex128)
    a[0] = 1.0
    four_nu2 = 4.0 * nu * nu
    for k in range(1, kmax):
        a[k] = a[k - 1] * (four_nu2 - (2 * k - 1) ** 2) / (8.0 * k)
    return a
