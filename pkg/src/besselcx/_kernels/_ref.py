"""NumPy reference implementation of the hot kernels.

Same per-element term recurrences and stopping rules as the compiled
backend; vectorized with an active mask so elements stop independently.
"""

import numpy as np

_SQRT_2_OVER_PI = 0.7978845608028654
_SQRT_PI_OVER_2 = 1.2533141373155003
_QUARTER_PI = 0.7853981633974483
_TINY = 1e-290


def j_series_eval(r, ang, nu, coeffs, tol):
    """Power series (z/2)^nu * sum_n c_n * (-(z/2)^2)^n on the branch of ang.

    coeffs must come from series_coefficients(nu, nmax).
    Returns (values, all_converged).
    """
    r = np.asarray(r, dtype=np.float64)
    ang = np.broadcast_to(np.asarray(ang, dtype=np.float64), r.shape)
    logz2 = np.log(0.5 * r) + 1j * ang
    q = -np.exp(2.0 * logz2)
    acc = np.full(r.shape, coeffs[0], dtype=np.complex128)
    qn = np.ones(r.shape, dtype=np.complex128)
    active = np.ones(r.shape, dtype=bool)
    nmax = len(coeffs)
    n = 1
    while n < nmax and active.any():
        qn = qn * q
        t = qn * coeffs[n]
        np.add(acc, np.where(active, t, 0.0), out=acc)
        if n >= 4:
            aacc = np.abs(acc)
            done = (np.abs(t) <= tol * (aacc + _TINY)) & (aacc > 0.0)
            active &= ~done
        n += 1
    return np.exp(nu * logz2) * acc, not active.any()


def hankel_asym_eval(sign, r, ang, nu, acoeffs, tol):
    """Large-|z| Hankel expansion, sign=+1 for H^(1), -1 for H^(2).

    H = sqrt(2/(pi z)) exp(sign*i*(z - nu pi/2 - pi/4)) * sum a_k (sign*i/z)^k
    summed to the smallest term (optimal truncation) or tol.
    """
    r = np.asarray(r, dtype=np.float64)
    ang = np.broadcast_to(np.asarray(ang, dtype=np.float64), r.shape)
    z = r * np.exp(1j * ang)
    rot = (1j * sign) / z
    acc = np.ones(r.shape, dtype=np.complex128)
    zk = np.ones(r.shape, dtype=np.complex128)
    prev = np.full(r.shape, np.inf)
    active = np.ones(r.shape, dtype=bool)
    for k in range(1, len(acoeffs)):
        zk = zk * rot
        t = acoeffs[k] * zk
        at = np.abs(t)
        take = active & (at < prev)
        np.add(acc, np.where(take, t, 0.0), out=acc)
        active = take & (at > tol * (np.abs(acc) + _TINY))
        prev = at
        if not active.any():
            break
    phase = np.exp(1j * sign * (z - 0.5 * np.pi * nu - _QUARTER_PI))
    pref = _SQRT_2_OVER_PI * np.exp(-0.5 * (np.log(r) + 1j * ang))
    return pref * phase * acc


def k_asym_eval(r, ang, acoeffs, tol):
    """Large-|z| expansion sqrt(pi/(2z)) e^(-z) sum a_k / z^k."""
    r = np.asarray(r, dtype=np.float64)
    ang = np.broadcast_to(np.asarray(ang, dtype=np.float64), r.shape)
    z = r * np.exp(1j * ang)
    zinv = 1.0 / z
    acc = np.ones(r.shape, dtype=np.complex128)
    zk = np.ones(r.shape, dtype=np.complex128)
    prev = np.full(r.shape, np.inf)
    active = np.ones(r.shape, dtype=bool)
    for k in range(1, len(acoeffs)):
        zk = zk * zinv
        t = acoeffs[k] * zk
        at = np.abs(t)
        take = active & (at < prev)
        np.add(acc, np.where(take, t, 0.0), out=acc)
        active = take & (at > tol * (np.abs(acc) + _TINY))
        prev = at
        if not active.any():
            break
    pref = _SQRT_PI_OVER_2 * np.exp(-0.5 * (np.log(r) + 1j * ang))
    return pref * np.exp(-z) * acc
