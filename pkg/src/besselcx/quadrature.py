"""Quadrature engines and the kernel-specific integral evaluators.

Generic engines:

* ``integrate_de``       tanh-sinh / exp-sinh with endpoint exponents
* ``integrate_periodic`` doubling trapezoid on [0, 2*pi) (spectral)
* ``gauss_panels``       frequency-aware composite Gauss-Legendre
* ``accelerated_oscillatory_tail``  half-period partial sums + Wynn epsilon
* ``extrapolate_to_zero``           polynomial extrapolation of an
                                    epsilon-damped family to epsilon = 0

Kernel-facing integrals:

* ``radial_bessel_integral``      kernel against exp(-2 pi c x)
* ``oscillatory_fourier_integral``  kernel against e(-2 x y cos(phi+theta)),
  Abel-regularized and extrapolated.  The angular integral is done by
  splitting the kernel into its finitely many angular harmonics (FFT) and
  pairing them with the exact harmonics (-i)^p J_p(4 pi x y) of the
  Fourier factor: a plain product rule would need O(x y) angular nodes,
  the split needs O(sqrt(x)).
* ``j_exp_gauss_integral``        J_nu(xy) against x exp(-c x^2)
* ``kummer_via_integral``         Euler-type integral for M(a;b;z)

All integrand callbacks are vectorized (ndarray in, ndarray out) and all
node sums run through NumPy's pairwise summation in construction order,
so results are reproducible across runs and thread counts.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc

from .complexbessel import GFValue, bold_j_grid
from .types import (
    DEFAULT_CONFIG,
    ConvergenceError,
    DomainError,
    EvalConfig,
    ExtrapolationError,
    OrderPair,
    require_finite,
)

__all__ = [
    "QuadratureResult",
    "RegularizationSchedule",
    "integrate_de",
    "integrate_periodic",
    "gauss_panels",
    "accelerated_oscillatory_tail",
    "extrapolate_to_zero",
    "radial_bessel_integral",
    "oscillatory_fourier_integral",
    "oscillatory_fourier_integral_multi",
    "j_exp_gauss_integral",
    "kummer_via_integral",
]

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.evaluations <= 0:
            raise DomainError("evaluations must be positive")


@dataclass(frozen=True)
class RegularizationSchedule:
    """Decreasing damping exponents and the extrapolation degree."""

    epsilons: tuple
    extrapolation_order: int = 2

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
            raise DomainError("epsilons must be positive and strictly decreasing")
        if self.extrapolation_order < 1:
            raise DomainError("extrapolation_order must be >= 1")
        if len(eps) < self.extrapolation_order + 1:
            raise DomainError("need at least extrapolation_order + 1 epsilons")


DEFAULT_SCHEDULE = RegularizationSchedule((0.2, 0.1, 0.05, 0.025), 2)


# ---------------------------------------------------------------------------
# generic engines


def _de_nodes(a, b, exponents, level, t0=None):
    """Abscissae/weights of the double-exponential map at a given level."""
    alo = max(exponents[0], -0.95)
    if b == math.inf:
        gamma = 1.0 + alo
        T = math.asinh(42.0 / (0.5 * math.pi * gamma))
        n = 24 * 2**level + 1
        t = np.linspace(-T, T, n)
        ex = 0.5 * math.pi * np.sinh(t)
        with np.errstate(over="ignore"):
            x = a + np.exp(ex)
            w = 0.5 * math.pi * np.cosh(t) * np.exp(ex)
        h = 2.0 * T / (n - 1)
        keep = np.isfinite(x)
        off = np.exp(ex)
        return x[keep], w[keep], h, off[keep], np.full(keep.sum(), math.inf)
    gamma = 1.0 + min(alo, max(exponents[1], -0.95))
    T = math.asinh(42.0 / (math.pi * gamma))
    n = 24 * 2**level + 1
    t = np.linspace(-T, T, n)
    u = 0.5 * math.pi * np.sinh(t)
    half = 0.5 * (b - a)
    # distance to the nearer endpoint, computed cancellation-free
    eu = np.exp(-2.0 * np.abs(u))
    off = half * 2.0 * eu / (1.0 + eu)
    x = np.where(t < 0, a + off, b - off)
    w = half * 0.5 * math.pi * np.cosh(t) * 4.0 * eu / (1.0 + eu) ** 2
    h = 2.0 * T / (n - 1)
    keep = off > 0
    lo_off = np.where(t < 0, off, (b - a) - off)
    hi_off = np.where(t < 0, (b - a) - off, off)
    return x[keep], w[keep], h, lo_off[keep], hi_off[keep]


def integrate_de(f, a, b, endpoint_exponents=(0.0, 0.0), tol=1e-12,
                 max_level=9, config: EvalConfig = DEFAULT_CONFIG,
                 wants_offsets=False):
    """Double-exponential quadrature on (a, b), b possibly inf.

    ``endpoint_exponents`` declares algebraic behavior f ~ (x-a)^alpha
    (and (b-x)^beta for finite b); alpha, beta > -1.  The map absorbs the
    singularity, the exponents only widen the node window.

    With ``wants_offsets`` the integrand is called f(x, lo, hi) where lo
    and hi are the exact distances to the endpoints, so (b-x)^beta can be
    formed without cancellation.
    """
    if endpoint_exponents[0] <= -1 or (b != math.inf and endpoint_exponents[1] <= -1):
        raise DomainError("endpoint exponents must be > -1 for integrability")
    prev = None
    total = None
    evals = 0
    for level in range(max_level + 1):
        x, w, h, lo, hi = _de_nodes(a, b, endpoint_exponents, level)
        with np.errstate(all="ignore"):
            fx = f(x, lo, hi) if wants_offsets else f(x)
            g = np.asarray(fx, dtype=np.complex128) * w
        g[~np.isfinite(g)] = 0.0
        total = h * np.sum(g)
        evals += len(x)
        if prev is not None:
            err = abs(total - prev)
            if err <= tol * (1.0 + abs(total)):
                return QuadratureResult(complex(total), float(err), evals)
        prev = total
    raise ConvergenceError(
        f"integrate_de did not converge to {tol} within {max_level} levels"
    )


def integrate_periodic(f, tol=1e-12, n0=16, nmax=1 << 17):
    """Trapezoid on [0, 2*pi), doubling nodes; spectrally accurate for
    smooth periodic integrands."""
    n = n0
    prev = None
    evals = 0
    while n <= nmax:
        phi = np.arange(n) * (_TWO_PI / n)
        vals = np.asarray(f(phi), dtype=np.complex128)
        total = np.sum(vals) * (_TWO_PI / n)
        evals += n
        if prev is not None:
            err = abs(total - prev)
            if err <= tol * (1.0 + abs(total)):
                return QuadratureResult(complex(total), float(err), evals)
        prev = total
        n *= 2
    raise ConvergenceError(f"integrate_periodic did not converge within {nmax} nodes")


def _gl_rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gauss_panels(f, a, b, omega, points_per_period=6.0, order=24):
    """Composite Gauss-Legendre with panel length tied to the local
    angular frequency ``omega(t)`` (radians per unit length)."""
    xs, ws = _gl_rule(order)
    periods_per_panel = order / points_per_period
    nodes = []
    weights = []
    t = a
    while t < b:
        om = max(float(omega(t)), 1e-9)
        dt = min(b - t, periods_per_panel * _TWO_PI / om, 0.25 * (b - a) + 1e-12)
        om2 = max(float(omega(t + dt)), om)
        dt = min(dt, periods_per_panel * _TWO_PI / om2)
        half = 0.5 * dt
        nodes.append(t + half + half * xs)
        weights.append(half * ws)
        t += dt
    tn = np.concatenate(nodes)
    tw = np.concatenate(weights)
    vals = np.asarray(f(tn), dtype=np.complex128)
    return complex(np.sum(vals * tw)), len(tn)


def _wynn_epsilon(s):
    """Best even-column Wynn-epsilon estimate of lim s_n, with a spread."""
    prev = [0.0 + 0.0j] * (len(s) + 1)
    cur = [complex(v) for v in s]
    best = cur[-1]
    best_hist = [best]
    col = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(cur[i + 1])
            else:
                nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            best = cur[-1]
            best_hist.append(best)
    spread = abs(best_hist[-1] - best_hist[-2]) if len(best_hist) > 1 else math.inf
    return best, spread


def accelerated_oscillatory_tail(f, start, half_period, tol=1e-10, max_panels=320,
                                 config: EvalConfig = DEFAULT_CONFIG):
    """sum of half-period Gauss panels of an oscillatory decaying tail,
    accelerated with the Wynn epsilon algorithm."""
    xs, ws = _gl_rule(16)
    sums = []
    total = 0.0 + 0.0j
    evals = 0
    for k in range(max_panels):
        lo = start + k * half_period
        hi = lo + half_period
        half = 0.5 * (hi - lo)
        t = lo + half + half * xs
        vals = np.asarray(f(t), dtype=np.complex128)
        total += complex(np.sum(vals * (half * ws)))
        evals += len(t)
        sums.append(total)
        if k >= 11 and k % 4 == 3:
            best, spread = _wynn_epsilon(sums[-min(len(sums), 28):])
            if spread <= tol * (1.0 + abs(best)):
                return QuadratureResult(best, float(spread), evals)
    best, spread = _wynn_epsilon(sums[-28:])
    return QuadratureResult(best, float(spread), evals)


def extrapolate_to_zero(epsilons, values, order):
    """Neville extrapolation of (eps, value) pairs to eps = 0.

    Returns (limit, spread between the last two extrapolation degrees).
    """
    eps = [float(e) for e in epsilons]
    vals = [complex(v) for v in values]
    n = len(vals)
    order = min(order, n - 1)
    tbl = list(vals)
    diag = [tbl[-1]]
    for k in range(1, order + 1):
        for i in range(n - 1, k - 1, -1):
            tbl[i] = tbl[i] + (tbl[i] - tbl[i - 1]) * eps[i] / (eps[i - k] - eps[i])
        diag.append(tbl[-1])
    spread = abs(diag[-1] - diag[-2]) if len(diag) > 1 else math.inf
    return diag[-1], spread


# ---------------------------------------------------------------------------
# kernel angular treatment


def _fft_size_for(x_max, m):
    width = _FOUR_PI * math.sqrt(max(x_max, 1e-12)) * 1.06 + 18.0 + abs(m)
    n = 64
    while n < 2.15 * width:
        n *= 2
    return n


def _pairing_chunk(order, x, y, thetas, config):
    """Harmonic-split phi-integral on one chunk sharing an FFT size.

    The kernel is analytic in phi with bandwidth ~ 4 pi sqrt(x), so the
    FFT size from max(x) captures every harmonic above machine noise;
    the Fourier factor contributes the exact harmonics (-i)^p J_p(4pi x y).
    """
    nfft = _fft_size_for(float(x.max()), order.m)
    mat = np.empty((len(x), nfft), dtype=np.complex128)
    for j in range(nfft):
        mat[:, j] = bold_j_grid(order, x, _TWO_PI * j / nfft, config)
    h = np.fft.fft(mat, axis=1) / nfft
    pmax = min(int(_FOUR_PI * math.sqrt(float(x.max())) * 1.05) + 14 + abs(order.m),
               nfft // 2 - 1)
    p = np.arange(pmax + 1)
    jp = sc.jv(p[None, :], (_FOUR_PI * y) * x[:, None])
    ipow = (-1j) ** p
    negidx = (-p[1:]) % nfft
    out = []
    for theta in thetas:
        ph = np.exp(-1j * p * theta)
        terms = h[:, : pmax + 1] * (ipow * ph)[None, :]
        terms[:, 1:] += h[:, negidx] * (ipow[1:] * np.conj(ph[1:]))[None, :]
        out.append(_TWO_PI * np.sum(terms * jp, axis=1))
    return out


_CHUNK = 192


def _angular_pairing(order, x, y, thetas, config):
    """phi-integral of kernel * e(-2 x y cos(phi+theta)) for each theta.

    Splits the node set by needed FFT size (so small x stays cheap) and
    into fixed-size chunks to bound the working matrices.
    """
    x = np.asarray(x, dtype=np.float64)
    sizes = np.array([_fft_size_for(v, order.m) for v in x])
    out = [np.empty(len(x), dtype=np.complex128) for _ in thetas]
    for size in np.unique(sizes):
        idx = np.nonzero(sizes == size)[0]
        for lo in range(0, len(idx), _CHUNK):
            sel = idx[lo : lo + _CHUNK]
            got = _pairing_chunk(order, x[sel], y, thetas, config)
            for o, g in zip(out, got):
                o[sel] = g
    return out


# ---------------------------------------------------------------------------
# kernel-facing integrals


def radial_bessel_integral(order: OrderPair, c, config: EvalConfig = DEFAULT_CONFIG):
    """int_0^2pi int_0^inf kernel(x e^{i phi}) exp(-2 pi c x) dx dphi."""
    c = complex(c)
    order = order.normalized()
    if order.m % 2 != 0:
        raise DomainError("radial integral needs even m")
    if abs(order.mu.real) >= 0.5:
        raise DomainError("radial integral needs |Re mu| < 1/2")
    if c.real <= 0:
        raise DomainError("need Re c > 0 (|arg c| < pi/2)")
    x_hi = 46.0 / (_TWO_PI * c.real)
    state = {"evals": 0}

    def mean_phi(x):
        n = _fft_size_for(float(x.max()), order.m)
        acc = np.zeros(len(x), dtype=np.complex128)
        for j in range(n):
            acc += bold_j_grid(order, x, _TWO_PI * j / n, config)
        state["evals"] += n * len(x)
        return acc * (_TWO_PI / n)

    def outer(x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(all="ignore"):
            damp = np.exp(-_TWO_PI * c * x)
        live = np.isfinite(damp) & (np.abs(damp) > 1e-22) & (x > 0)
        vals = np.zeros(len(x), dtype=np.complex128)
        if live.any():
            vals[live] = mean_phi(x[live]) * damp[live]
        return vals

    alpha = -2.0 * abs(order.mu.real)
    res = integrate_de(outer, 0.0, x_hi, endpoint_exponents=(alpha, 0.0),
                       tol=5e-11, config=config)
    # x > x_hi contributes below exp(-46) of scale
    return QuadratureResult(res.value, res.abs_error_estimate, state["evals"])


def _panel_grid(y, t_end, t_start):
    """Frequency-aware Gauss-Legendre panel nodes on [t_start, t_end]."""
    xs, ws = _gl_rule(24)
    periods_per_panel = 4.0
    nodes = []
    weights = []
    t = t_start
    while t < t_end:
        om = 8.0 * math.pi * (1.0 + (t + 0.5) * y)
        dt = min(t_end - t, periods_per_panel * _TWO_PI / om)
        om2 = 8.0 * math.pi * (1.0 + (t + dt) * y)
        dt = min(dt, periods_per_panel * _TWO_PI / om2)
        half = 0.5 * dt
        nodes.append(t + half + half * xs)
        weights.append(half * ws)
        t += dt
    return np.concatenate(nodes), np.concatenate(weights)


def oscillatory_fourier_integral_multi(order: OrderPair, y, thetas, schedule=None,
                                       config: EvalConfig = DEFAULT_CONFIG, x_cap=None):
    """Abel-regularized Fourier transform of the kernel for several
    rotation angles at once (the heavy node work is theta-independent).

    For each epsilon of the schedule computes
        int_0^2pi int_0^inf kernel(x e^{i phi}) e(-2 x y cos(phi+theta))
                           e^{-eps x} dx dphi
    (absolutely convergent), then extrapolates to eps = 0.
    """
    if schedule is None:
        schedule = DEFAULT_SCHEDULE
    order = order.normalized()
    if order.m % 2 != 0:
        raise DomainError("needs even m")
    if abs(order.mu.real) >= 0.5:
        raise DomainError("needs |Re mu| < 1/2")
    if y <= 0:
        raise DomainError("y must be > 0")
    eps_list = schedule.epsilons
    # beyond x = 20/eps the damped oscillatory tail is ~1e-12 of scale
    xmaxes = [20.0 / e for e in eps_list]
    if x_cap is not None:
        xmaxes = [min(v, x_cap) for v in xmaxes]
    x_big = max(xmaxes)
    t_big = math.sqrt(x_big)

    # singular head in t = sqrt(x): integrand ~ t^(1 +- 4 Re mu)
    t_head = min(0.3, 0.25 * t_big)
    evals = {"n": 0}

    def phi_vals(x):
        evals["n"] += len(np.atleast_1d(x))
        return _angular_pairing(order, x, y, thetas, config)

    # head via fixed DE refinement, shared across thetas and epsilons
    head_sets = None
    lvl_prev = None
    for level in range(7):
        tt, ww, hh, _, _ = _de_nodes(0.0, t_head, (1.0 - 4.0 * abs(order.mu.real), 0.0), level)
        vals = phi_vals(tt * tt)
        head_sets = (tt, ww, hh, vals)
        cur = hh * np.sum(vals[0] * 2.0 * tt * ww)
        if lvl_prev is not None and abs(cur - lvl_prev) <= 1e-11 * (1.0 + abs(cur)):
            break
        lvl_prev = cur
    tt_h, ww_h, hh_h, vals_h = head_sets

    # oscillatory body on shared panels up to the largest cutoff
    tn, tw = _panel_grid(y, t_big, t_head)
    vals_body = phi_vals(tn * tn)

    results = []
    for ith in range(len(thetas)):
        per_eps = []
        for e, xm in zip(eps_list, xmaxes):
            head = hh_h * np.sum(vals_h[ith] * 2.0 * tt_h * np.exp(-e * tt_h**2) * ww_h)
            mask = tn * tn <= xm
            body = np.sum(vals_body[ith][mask] * 2.0 * tn[mask] * np.exp(-e * tn[mask] ** 2) * tw[mask])
            per_eps.append(head + body)
        limit, spread = extrapolate_to_zero(eps_list, per_eps, schedule.extrapolation_order)
        if not (math.isfinite(limit.real) and math.isfinite(limit.imag)):
            raise ExtrapolationError("regularization extrapolation produced non-finite value")
        results.append(GFValue(complex(limit), float(spread)))
    return results


def oscillatory_fourier_integral(order: OrderPair, y, theta, schedule=None,
                                 config: EvalConfig = DEFAULT_CONFIG, x_cap=None):
    return oscillatory_fourier_integral_multi(order, y, [theta], schedule, config, x_cap)[0]


def j_exp_gauss_integral(nu, y, c, config: EvalConfig = DEFAULT_CONFIG):
    """int_0^inf J_nu(x y) exp(-c x^2) x dx, Re nu > -2, |arg c| < pi/2."""
    from .special import bessel_j_grid

    nu = complex(nu)
    c = complex(c)
    if nu.real <= -2:
        raise DomainError("need Re nu > -2")
    if c.real <= 0:
        raise DomainError("need Re c > 0")
    if not y > 0:
        raise DomainError("need y > 0")

    def f(x):
        vals = np.zeros(len(x), dtype=np.complex128)
        pos = x > 0
        vals[pos] = bessel_j_grid(nu, x[pos] * y, 0.0, config)
        return vals * np.exp(-c * x * x) * x

    return integrate_de(f, 0.0, math.inf, endpoint_exponents=(nu.real + 1.0, 0.0),
                        tol=1e-12, config=config)


def kummer_via_integral(a, b, z, config: EvalConfig = DEFAULT_CONFIG):
    """Gamma(b)/(Gamma(a)Gamma(b-a)) int_0^1 e^{zv} v^{a-1} (1-v)^{b-a-1} dv."""
    from .special import gamma

    a, b, z = complex(a), complex(b), complex(z)
    if not (b.real > a.real > 0):
        raise DomainError("need Re b > Re a > 0")

    def f(v, lo, hi):
        # hi is the exact distance 1 - v, safe for Re(b-a) < 1
        return np.exp(z * v + (a - 1.0) * np.log(lo) + (b - a - 1.0) * np.log(hi))

    res = integrate_de(f, 0.0, 1.0, endpoint_exponents=(a.real - 1.0, (b - a).real - 1.0),
                       tol=1e-13, config=config, wants_offsets=True)
    pref = gamma(b, config) / (gamma(a, config) * gamma(b - a, config))
    return QuadratureResult(require_finite(pref * res.value, "Kummer integral"),
                            abs(pref) * res.abs_error_estimate, res.evaluations)
