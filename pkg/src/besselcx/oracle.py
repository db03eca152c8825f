"""Extended-precision series oracles (test support only).

Every production function has a slow mpmath twin here that goes through
the raw power series alone, with working precision raised by the known
cancellation budget (~0.44 digits per unit radius for J, plus the product
collapse e^(2|Im w|) for the kernel assembly).  Nothing in the production
path imports this module.
"""

from __future__ import annotations

import mpmath as mp

from .types import DEFAULT_CONFIG, OrderPair, PolarPoint

__all__ = [
    "oracle_gamma",
    "oracle_j",
    "oracle_i",
    "oracle_k",
    "oracle_h",
    "oracle_kummer",
    "oracle_j_pair",
    "oracle_bold_j_sq",
    "oracle_bold_j",
]


def _digits(config):
    return config.oracle_precision_digits


def oracle_gamma(z, config=DEFAULT_CONFIG):
    with mp.workdps(_digits(config) + 10):
        return complex(mp.gamma(mp.mpmathify(complex(z))))


def _j_series_mp(nu, r, angle, dps):
    """Raw series at current precision caller has already raised."""
    nu = mp.mpmathify(nu)
    logz2 = mp.log(mp.mpf(r) / 2) + 1j * mp.mpf(angle)
    q = mp.e ** (2 * logz2)
    term = mp.e ** (nu * logz2) / mp.gamma(nu + 1)
    acc = mp.mpf(0)
    thresh = mp.mpf(10) ** (-(dps + 12))
    n = 0
    while n < 40000:
        acc += term
        term = -term * q / ((n + 1) * (nu + n + 1))
        n += 1
        if n > 4 and abs(term) < thresh * max(1, abs(acc)):
            return +acc
    raise RuntimeError("oracle series did not converge")


def _near_negative_integer(nu):
    return abs(nu.imag) < 1e-18 and abs(nu.real - round(nu.real)) < 1e-18 and nu.real < -0.5


def oracle_j(nu, z: PolarPoint, config=DEFAULT_CONFIG):
    nu = complex(nu)
    dps = _digits(config)
    extra = int(0.45 * z.radius) + 25
    with mp.workdps(dps + extra):
        if _near_negative_integer(nu):
            n = int(round(-nu.real))
            return complex((-1) ** n * _j_series_mp(n, z.radius, z.angle, dps))
        return complex(_j_series_mp(nu, z.radius, z.angle, dps))


def oracle_i(nu, z: PolarPoint, config=DEFAULT_CONFIG):
    nu = complex(nu)
    dps = _digits(config)
    extra = int(0.45 * z.radius) + 25
    with mp.workdps(dps + extra):
        rot = mp.e ** (-0.5j * mp.pi * mp.mpmathify(nu))
        if _near_negative_integer(nu):
            n = int(round(-nu.real))
            val = _j_series_mp(n, z.radius, z.angle + float(mp.pi) / 2, dps)
            return complex(rot * (-1) ** n * val)
        val = _j_series_mp(nu, z.radius, z.angle + float(mp.pi) / 2, dps)
        return complex(rot * val)


def _shift_off_integer(nu):
    # series-only limit: nudge by 10^-30 and work with >=60 extra digits
    if abs(nu.imag) < 1e-25 and abs(nu.real - round(nu.real)) < 1e-25:
        return nu + mp.mpf(10) ** -30
    if abs(mp.sin(mp.pi * mp.mpmathify(nu))) < mp.mpf(10) ** -25:
        return nu + mp.mpf(10) ** -30
    return mp.mpmathify(nu)


def oracle_k(nu, z: PolarPoint, config=DEFAULT_CONFIG):
    dps = _digits(config)
    extra = int(1.0 * z.radius) + 80
    with mp.workdps(dps + extra):
        nu_s = _shift_off_integer(complex(nu))
        ip = mp.e ** (-0.5j * mp.pi * nu_s) * _j_series_mp(
            nu_s, z.radius, z.angle + float(mp.pi) / 2, dps + extra - 20
        )
        im_ = mp.e ** (0.5j * mp.pi * nu_s) * _j_series_mp(
            -nu_s, z.radius, z.angle + float(mp.pi) / 2, dps + extra - 20
        )
        return complex(0.5 * mp.pi * (im_ - ip) / mp.sin(mp.pi * nu_s))


def oracle_h(kind, nu, z: PolarPoint, config=DEFAULT_CONFIG):
    dps = _digits(config)
    extra = int(1.0 * z.radius) + 80
    with mp.workdps(dps + extra):
        nu_s = _shift_off_integer(complex(nu))
        jp = _j_series_mp(nu_s, z.radius, z.angle, dps + extra - 20)
        jm = _j_series_mp(-nu_s, z.radius, z.angle, dps + extra - 20)
        s = mp.sin(mp.pi * nu_s)
        if kind == 1:
            return complex((jm - mp.e ** (-1j * mp.pi * nu_s) * jp) / (1j * s))
        return complex((mp.e ** (1j * mp.pi * nu_s) * jp - jm) / (1j * s))


def oracle_kummer(a, b, z, config=DEFAULT_CONFIG):
    dps = _digits(config)
    with mp.workdps(dps + int(0.9 * abs(complex(z))) + 25):
        a, b, z = mp.mpmathify(complex(a)), mp.mpmathify(complex(b)), mp.mpmathify(complex(z))
        term = mp.mpf(1)
        acc = mp.mpf(0)
        thresh = mp.mpf(10) ** (-(dps + 10))
        for n in range(20000):
            acc += term
            term = term * (a + n) * z / ((b + n) * (n + 1))
            if n > 2 and abs(term) < thresh * max(1, abs(acc)):
                return complex(acc)
        raise RuntimeError("oracle Kummer series did not converge")


def oracle_j_pair(order: OrderPair, z: PolarPoint, config=DEFAULT_CONFIG):
    dps = _digits(config)
    extra = int(0.45 * z.radius) + 30
    nu1 = -2.0 * order.mu - 0.5 * order.m
    nu2 = -2.0 * order.mu + 0.5 * order.m
    with mp.workdps(dps + extra):
        return complex(
            _j_series_mp(nu1, z.radius, z.angle, dps + extra - 15)
            * _j_series_mp(nu2, z.radius, -z.angle, dps + extra - 15)
        )


def _bold_j_mp(order: OrderPair, w_radius, w_angle, dps):
    """Kernel at argument w = 4 pi sqrt(z); caller already raised precision."""
    mu = mp.mpmathify(order.mu)
    m = order.m
    if order.needs_limit():
        mu = mu + mp.mpf(10) ** -30
    def pair(mu_, m_):
        return _j_series_mp(-2 * mu_ - mp.mpf(m_) / 2, w_radius, w_angle, dps) * _j_series_mp(
            -2 * mu_ + mp.mpf(m_) / 2, w_radius, -w_angle, dps
        )
    if m % 2 == 0:
        return (2 * mp.pi**2 / mp.sin(2 * mp.pi * mu)) * (pair(mu, m) - pair(-mu, -m))
    return (2j * mp.pi**2 / mp.cos(2 * mp.pi * mu)) * (pair(mu, m) + pair(-mu, -m))


def oracle_bold_j_sq(order: OrderPair, w: PolarPoint, config=DEFAULT_CONFIG):
    """Kernel at the squared argument; w is the square root the caller picked."""
    dps = _digits(config)
    wr = 4.0 * float(mp.pi) * w.radius
    extra = int(1.1 * wr) + 80
    with mp.workdps(dps + extra):
        wr_mp = 4 * mp.pi * mp.mpf(w.radius)
        return complex(_bold_j_mp(order, wr_mp, w.angle, dps + extra - 30))


def oracle_bold_j(order: OrderPair, z: PolarPoint, config=DEFAULT_CONFIG):
    if order.m % 2 != 0:
        raise ValueError("oracle_bold_j needs even m; use oracle_bold_j_sq")
    return oracle_bold_j_sq(order, z.sqrt(), config)
