"""The two-variable Bessel kernel over the complex plane.

Central objects:

* ``j_pair``       J_{-2mu-m/2}(z) * J_{-2mu+m/2}(conj z)
* ``bold_j``       the normalized kernel (even m), argument z
* ``bold_j_sq``    the kernel at a squared argument, any integer m
* ``h_pair``       Hankel-product building blocks
* ``bold_j_asymptotic``  two-term large-|z| form
* ``bold_j_integral_rep`` polar integral representation (|Re mu| < 1/8)
* ``ode_residual`` annihilating-operator residuals (Wirtinger stencil)
* ``g_function`` / ``f_function``  regularized Fourier-type transforms

Evaluation of the kernel picks between three equivalent forms by
conditioning: the defining sin/cos combination of series products (small
argument), the same combination with stable Hankel factors (small
argument but e^(2|Im w|) would eat the difference), and a fused product
of large-argument Hankel expansions whose exponentials cancel
analytically (so nothing under/overflows at any angle).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import special
from ._kernels import hankel_coefficients, j_series_eval, series_coefficients
from .types import (
    DEFAULT_CONFIG,
    DomainError,
    EvalConfig,
    OrderPair,
    PolarPoint,
    require_finite,
)

__all__ = [
    "OrderPair",
    "NormalizedDirection",
    "GFValue",
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
]

_FOUR_PI = 4.0 * math.pi
_IM_COLLAPSE = 4.0  # |Im w| beyond which the series difference is rebuilt from H-factors


@dataclass(frozen=True)
class NormalizedDirection:
    """Y = |w + 1/w| and the unit direction E = (w + 1/w)/Y."""

    Y: float
    E: complex

    @staticmethod
    def from_source(w):
        w = complex(w)
        if w == 0:
            raise DomainError("direction undefined at w = 0")
        s = w + 1.0 / w
        y = abs(s)
        if y == 0.0:
            raise DomainError(f"direction undefined: w + 1/w = 0 at w = {w}")
        return NormalizedDirection(y, s / y)


@dataclass(frozen=True)
class GFValue:
    """A regularized-integral value with its extrapolation spread."""

    value: complex
    regularization_error: float


def j_pair(order: OrderPair, z: PolarPoint, config: EvalConfig = DEFAULT_CONFIG):
    """J_{-2mu-m/2}(z) * J_{-2mu+m/2}(conj z); well defined modulo 2*pi in
    the angle because the two branch factors cancel."""
    nu1 = -2.0 * order.mu - 0.5 * order.m
    nu2 = -2.0 * order.mu + 0.5 * order.m
    return special.bessel_j(nu1, z, config) * special.bessel_j(nu2, z.conj(), config)


def _mu_shifted(order, eps):
    return OrderPair(order.mu + eps, order.m), OrderPair(order.mu - eps, order.m)


def _nu_max(order):
    return 2.0 * abs(order.mu) + 0.5 * abs(order.m)


def _bold_switch_radius(order, config):
    return max(11.0, config.switch_radius_factor * _nu_max(order) ** 2)


def _bold_series_scalar(order, w: PolarPoint, config):
    """Defining combination with series J factors (generic order)."""
    mu, m = order.mu, order.m
    jp = j_pair(order, w, config)
    jm = j_pair(OrderPair(-mu, -m), w, config)
    if m % 2 == 0:
        return 2.0 * math.pi**2 / cmath.sin(2.0 * math.pi * mu) * (jp - jm)
    return 2.0j * math.pi**2 / cmath.cos(2.0 * math.pi * mu) * (jp + jm)


def _bold_hankel_scalar(order, w: PolarPoint, config):
    """pi^2 i (e^{2 pi i mu} H1 H1~ + (-1)^{m+1} e^{-2 pi i mu} H2 H2~).

    Each factor comes out of the stable Hankel router, so this survives
    the e^(2|Im w|) regime where the series difference collapses.
    """
    mu, m = order.mu, order.m
    nua = 2.0 * mu + 0.5 * m
    nub = 2.0 * mu - 0.5 * m
    wc = w.conj()
    h11 = special.hankel_h1(nua, w, config) * special.hankel_h1(nub, wc, config)
    h22 = special.hankel_h2(nua, w, config) * special.hankel_h2(nub, wc, config)
    return math.pi**2 * 1j * (
        cmath.exp(2j * math.pi * mu) * h11
        + (-1.0) ** (m + 1) * cmath.exp(-2j * math.pi * mu) * h22
    )


def _hankel_sum_grid(sign, wr, ang, acoeffs, tol):
    """sum_k a_k (sign*i/z)^k with optimal truncation (no prefactor)."""
    z = wr * np.exp(1j * ang)
    rot = (1j * sign) / z
    acc = np.ones(wr.shape, dtype=np.complex128)
    zk = np.ones(wr.shape, dtype=np.complex128)
    prev = np.full(wr.shape, np.inf)
    active = np.ones(wr.shape, dtype=bool)
    for k in range(1, len(acoeffs)):
        zk = zk * rot
        t = acoeffs[k] * zk
        at = np.abs(t)
        take = active & (at < prev)
        np.add(acc, np.where(take, t, 0.0), out=acc)
        active = take & (at > tol * (np.abs(acc) + 1e-290))
        prev = at
        if not active.any():
            break
    return acc


def _bold_asym_grid(order, wr, ang, config):
    """Fused Hankel-product expansion at w = (wr, ang); exact phase
    cancellation keeps everything O(1)."""
    mu, m = order.mu, order.m
    ca = hankel_coefficients(complex(2.0 * mu + 0.5 * m), 46)
    cb = hankel_coefficients(complex(2.0 * mu - 0.5 * m), 46)
    tol = config.series_tol
    s1 = _hankel_sum_grid(1, wr, ang, ca, tol) * _hankel_sum_grid(1, wr, -ang, cb, tol)
    s2 = _hankel_sum_grid(-1, wr, ang, ca, tol) * _hankel_sum_grid(-1, wr, -ang, cb, tol)
    phase = np.exp(2j * wr * np.cos(ang))  # e^{i(w + conj w)}, unit modulus
    sign = (-1.0) ** m
    return (2.0 * math.pi / wr) * (phase * s1 + sign * np.conj(phase) * s2)


def _bold_series_grid(order, wr, ang, config):
    """Defining sin/cos combination with vectorized series factors."""
    mu, m = order.mu, order.m
    orders = (
        -2.0 * mu - 0.5 * m,
        -2.0 * mu + 0.5 * m,
        2.0 * mu + 0.5 * m,
        2.0 * mu - 0.5 * m,
    )
    tol = config.series_tol
    nmax = config.max_terms
    vals = []
    for nu, a in zip(orders, (ang, -ang, ang, -ang)):
        v, ok = j_series_eval(wr, a, complex(nu), series_coefficients(complex(nu), nmax), tol)
        if not ok:
            raise DomainError("series did not converge in bold_j grid")
        vals.append(v)
    jp = vals[0] * vals[1]
    jm = vals[2] * vals[3]
    if m % 2 == 0:
        return 2.0 * math.pi**2 / cmath.sin(2.0 * math.pi * mu) * (jp - jm)
    return 2.0j * math.pi**2 / cmath.cos(2.0 * math.pi * mu) * (jp + jm)


def _bold_from_w_grid(order, wr, ang, config):
    """Kernel over broadcast arrays of |w| and angle (generic order)."""
    wr, ang = np.broadcast_arrays(np.asarray(wr, dtype=np.float64),
                                  np.asarray(ang, dtype=np.float64))
    out = np.empty(wr.shape, dtype=np.complex128)
    rs = _bold_switch_radius(order, config)
    big = wr >= rs
    if big.any():
        out[big] = _bold_asym_grid(order, wr[big], ang[big], config)
    small = ~big
    if small.any():
        out[small] = _bold_series_grid(order, wr[small], ang[small], config)
    return out


def _bold_from_w_scalar(order, w: PolarPoint, config):
    """Kernel at a single w with the conditioning-aware route choice."""
    if w.radius >= _bold_switch_radius(order, config):
        return complex(
            _bold_asym_grid(order, np.array([w.radius]), w.angle, config)[0]
        )
    if abs(w.imag) > _IM_COLLAPSE:
        return _bold_hankel_scalar(order, w, config)
    return _bold_series_scalar(order, w, config)


def _bold_eval(order, w: PolarPoint, config):
    order = order.normalized()
    if order.needs_limit():
        eps = 1e-5 * max(1.0, abs(order.mu))
        hi, lo = _mu_shifted(order, eps)
        return 0.5 * (_bold_from_w_scalar(hi, w, config) + _bold_from_w_scalar(lo, w, config))
    return _bold_from_w_scalar(order, w, config)


def bold_j(order: OrderPair, z: PolarPoint, config: EvalConfig = DEFAULT_CONFIG):
    """The normalized kernel at z (even m only; odd m needs bold_j_sq)."""
    if order.m % 2 != 0:
        raise DomainError("bold_j is defined for even m only; use bold_j_sq")
    w = PolarPoint(_FOUR_PI * math.sqrt(z.radius), 0.5 * z.angle)
    return require_finite(_bold_eval(order, w, config), "bold_j")


def bold_j_sq(order: OrderPair, w: PolarPoint, config: EvalConfig = DEFAULT_CONFIG):
    """Kernel at the squared argument w^2, with sqrt(w^2) := w.

    Well defined for every integer m; for odd m the value depends on w,
    not only on w^2.
    """
    arg = PolarPoint(_FOUR_PI * w.radius, w.angle)
    return require_finite(_bold_eval(order, arg, config), "bold_j_sq")


def bold_j_grid(order: OrderPair, x, phi, config: EvalConfig = DEFAULT_CONFIG):
    """Kernel at z = x e^{i phi} for an array of radii x >= 0 (even m).

    The hot path of every double integral; series/expansion split happens
    per element.  x == 0 entries return the x -> 0 limit 0 only when the
    kernel vanishes there; callers keep x > 0.
    """
    if order.m % 2 != 0:
        raise DomainError("bold_j_grid needs even m")
    order = order.normalized()
    x = np.asarray(x, dtype=np.float64)
    wr = _FOUR_PI * np.sqrt(x)
    ang = 0.5 * phi
    if order.needs_limit():
        eps = 1e-5 * max(1.0, abs(order.mu))
        hi, lo = _mu_shifted(order, eps)
        return 0.5 * (
            _bold_from_w_grid(hi, wr, ang, config) + _bold_from_w_grid(lo, wr, ang, config)
        )
    return _bold_from_w_grid(order, wr, ang, config)


def bold_j_sq_grid(order: OrderPair, w_radii, w_angles, config: EvalConfig = DEFAULT_CONFIG):
    """Kernel at squared arguments for broadcast arrays of w (any m)."""
    order = order.normalized()
    wr = _FOUR_PI * np.asarray(w_radii, dtype=np.float64)
    ang = np.asarray(w_angles, dtype=np.float64)
    if order.needs_limit():
        eps = 1e-5 * max(1.0, abs(order.mu))
        hi, lo = _mu_shifted(order, eps)
        return 0.5 * (
            _bold_from_w_grid(hi, wr, ang, config) + _bold_from_w_grid(lo, wr, ang, config)
        )
    return _bold_from_w_grid(order, wr, ang, config)


def h_pair(kind, order: OrderPair, z: PolarPoint, config: EvalConfig = DEFAULT_CONFIG):
    """H^(kind)_{2mu+m/2}(z) * H^(kind)_{2mu-m/2}(conj z)."""
    if kind not in (1, 2):
        raise DomainError("kind must be 1 or 2")
    nua = 2.0 * order.mu + 0.5 * order.m
    nub = 2.0 * order.mu - 0.5 * order.m
    h = special.hankel_h1 if kind == 1 else special.hankel_h2
    return h(nua, z, config) * h(nub, z.conj(), config)


def bold_j_asymptotic(order: OrderPair, z: PolarPoint, config: EvalConfig = DEFAULT_CONFIG):
    """Two-term large-|z| form; absolute error O(|z|^{-3/2}).

    The corrections carry the factor orders 2mu +- m/2 against the full
    argument 4 pi sqrt(z) (the expansion of the Hankel-product form).
    """
    if z.radius < 10.0:
        raise DomainError("asymptotic form needs |z| >= 10")
    mu, m = order.mu, order.m
    sq = z.sqrt()
    sqc = complex(sq.to_complex())
    sqb = sqc.conjugate()
    nua = 2.0 * mu + 0.5 * m
    nub = 2.0 * mu - 0.5 * m
    total = 0.0 + 0.0j
    for s in (1.0, -1.0):
        lead = (s**m) / (2.0 * math.sqrt(z.radius)) * cmath.exp(
            2j * math.pi * s * 2.0 * (sqc + sqb)
        )
        c1 = (1.0 - 4.0 * nua**2) / (8j * _FOUR_PI * sqc)
        c2 = (1.0 - 4.0 * nub**2) / (8j * _FOUR_PI * sqb)
        total += lead * (1.0 + s * c1 + s * c2)
    return total


def bold_j_integral_rep(order: OrderPair, x, phi, config: EvalConfig = DEFAULT_CONFIG):
    """Polar integral representation (absolutely convergent, |Re mu| < 1/8):

        4 pi i^m  int_0^inf y^{4mu-1} E(y e^{i phi/2})^{-m}
                  J_m(4 pi sqrt(x) Y(y e^{i phi/2})) dy
    """
    from . import quadrature  # lazy: quadrature imports this module

    import scipy.special as sc

    mu, m = order.mu, order.m
    if m % 2 != 0:
        raise DomainError("integral representation needs even m")
    if abs(mu.real) >= 0.125:
        raise DomainError("absolute convergence needs |Re mu| < 1/8")
    if not x > 0:
        raise DomainError("x must be > 0")
    half = cmath.exp(0.5j * phi)
    sx = _FOUR_PI * math.sqrt(x)

    def integrand(y, conj_dir=False):
        y = np.asarray(y, dtype=np.float64)
        w = y * (half.conjugate() if conj_dir else half)
        s = w + 1.0 / w
        ys = np.abs(s)
        e = s / ys
        return np.exp((4.0 * mu - 1.0) * np.log(y)) * e ** (-m) * sc.jv(m, sx * ys)

    inner = quadrature.integrate_de(
        integrand, 0.0, 1.0, endpoint_exponents=(4.0 * mu.real - 1.0, 0.0), config=config
    )
    # mapped tail: int_1^inf f(y) dy = int_0^1 u^{-1-4mu} E(u e^{-i phi/2})^{-m}
    #                                   J_m(...) du, evaluated as oscillatory panels
    tail = quadrature.accelerated_oscillatory_tail(
        lambda y: integrand(y, conj_dir=False),
        start=1.0,
        half_period=max(0.5 / sx * math.pi, 1e-3),
        config=config,
    )
    val = _FOUR_PI * (1j**m) * (inner.value + tail.value)
    return require_finite(complex(val), "integral representation")


def _wirtinger_stencil(f, z0, h):
    """f and its Wirtinger derivatives at z0 from a 3x3 central stencil."""
    vals = {}
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            vals[(dx, dy)] = f(z0 + h * (dx + 1j * dy))
    f0 = vals[(0, 0)]
    fx = (vals[(1, 0)] - vals[(-1, 0)]) / (2 * h)
    fy = (vals[(0, 1)] - vals[(0, -1)]) / (2 * h)
    fxx = (vals[(1, 0)] - 2 * f0 + vals[(-1, 0)]) / h**2
    fyy = (vals[(0, 1)] - 2 * f0 + vals[(0, -1)]) / h**2
    fxy = (vals[(1, 1)] - vals[(1, -1)] - vals[(-1, 1)] + vals[(-1, -1)]) / (4 * h**2)
    fz = 0.5 * (fx - 1j * fy)
    fzb = 0.5 * (fx + 1j * fy)
    fzz = 0.25 * (fxx - fyy - 2j * fxy)
    fzbzb = 0.25 * (fxx - fyy + 2j * fxy)
    return f0, fz, fzb, fzz, fzbzb


def ode_residual(order: OrderPair, w: PolarPoint, h, config: EvalConfig = DEFAULT_CONFIG):
    """Residuals of the two annihilating operators on f(z) = kernel(z^2/16pi^2).

    Wirtinger derivatives by central differences of step h on the (Re, Im)
    grid; both residuals vanish identically for the exact kernel.
    """
    if not 1e-4 <= h <= 1e-2:
        raise DomainError("step h must lie in [1e-4, 1e-2]")
    z0 = complex(w.to_complex())
    if z0.real < 0 and abs(z0.imag) < 4 * h:
        raise DomainError("stencil would straddle the negative-real branch seam")

    def f(z):
        p = PolarPoint.from_complex(z / _FOUR_PI)
        return bold_j_sq(order, p, config)

    f0, fz, fzb, fzz, fzbzb = _wirtinger_stencil(f, z0, h)
    nua = 2.0 * order.mu + 0.5 * order.m
    nub = 2.0 * order.mu - 0.5 * order.m
    zb = z0.conjugate()
    r1 = z0**2 * fzz + z0 * fz + (z0**2 - nua**2) * f0
    r2 = zb**2 * fzbzb + zb * fzb + (zb**2 - nub**2) * f0
    return r1, r2


def ode_residual_scale(order: OrderPair, w: PolarPoint, h, config: EvalConfig = DEFAULT_CONFIG):
    """Magnitude scale of the operator terms, for relative residuals."""
    z0 = complex(w.to_complex())

    def f(z):
        p = PolarPoint.from_complex(z / _FOUR_PI)
        return bold_j_sq(order, p, config)

    f0, fz, fzb, fzz, fzbzb = _wirtinger_stencil(f, z0, h)
    nua = 2.0 * order.mu + 0.5 * order.m
    nub = 2.0 * order.mu - 0.5 * order.m
    zb = z0.conjugate()
    s1 = abs(z0**2 * fzz) + abs(z0 * fz) + abs((z0**2 - nua**2) * f0)
    s2 = abs(zb**2 * fzbzb) + abs(zb * fzb) + abs((zb**2 - nub**2) * f0)
    return s1, s2


def g_function(order: OrderPair, y, theta, config: EvalConfig = DEFAULT_CONFIG, schedule=None):
    """Regularized double-integral transform of the kernel.

    G(y e^{i theta}) = 2 * int int kernel(x e^{i phi})
                       e(-2 x cos(phi - theta)/y) dx dphi
    evaluated through the epsilon-damped machinery; the schedule is scaled
    to the stationary radius y^2 when y is large.
    """
    from . import quadrature

    if not 0.05 <= y <= 50.0:
        raise DomainError("g_function supports y in [0.05, 50]")
    if order.m % 2 != 0:
        raise DomainError("g_function needs even m")
    if abs(order.mu.real) >= 0.5:
        raise DomainError("g_function needs |Re mu| < 1/2")
    if schedule is None:
        # keep eps * x0 <= 0.1 at the stationary radius x0 = y^2
        scale = min(1.0, 0.5 / (y * y))
        schedule = quadrature.RegularizationSchedule(
            epsilons=tuple(e * scale for e in (0.2, 0.1, 0.05, 0.025)),
            extrapolation_order=2,
        )
    x_cap = 9.0 * y * y + 50.0
    g = quadrature.oscillatory_fourier_integral(
        order, 1.0 / y, -theta, schedule, config=config, x_cap=x_cap
    )
    return GFValue(2.0 * g.value, 2.0 * g.regularization_error)


def f_function(order: OrderPair, y, theta, config: EvalConfig = DEFAULT_CONFIG, schedule=None):
    """F(y e^{i theta}) = (2/y) e(-y cos theta) G(y e^{i theta})."""
    g = g_function(order, y, theta, config, schedule)
    factor = (2.0 / y) * cmath.exp(-2j * math.pi * y * math.cos(theta))
    return GFValue(factor * g.value, abs(factor) * g.regularization_error)
