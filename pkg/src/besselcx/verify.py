"""Identity verification suites.

Each suite evaluates both sides of one of the exponential integral
identities (or a family of structural properties) and emits a
:class:`VerificationReport`.  Sub-evaluation failures are recorded
per case and do not abort a suite.
"""

from __future__ import annotations

import cmath
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import combinatorics as comb
from . import complexbessel as cb
from . import quadrature as qd
from . import special
from .report import CaseResult, VerificationReport
from .types import DEFAULT_CONFIG, EvalConfig, EvaluationError, OrderPair, PolarPoint

__all__ = [
    "verify_theorem2",
    "verify_theorem1",
    "verify_weber",
    "verify_corollary",
    "verify_asymptotics",
    "verify_ode",
    "verify_combinatorics",
    "run_suites",
    "SUITE_NAMES",
]

_MU_GRID = (0.1, 0.3, 0.05 + 0.2j, 0.45)
_M_GRID = (0, 2, 4, 6)


def thread_count():
    raw = os.environ.get("BESSELCX_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    """Map preserving order; thread pool when BESSELCX_THREADS > 1."""
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _scaled_schedule(y, base=None):
    """Keep eps times the stationary radius 1/y^2 at or below ~0.1."""
    if base is None:
        base = qd.DEFAULT_SCHEDULE
    scale = min(1.0, 0.5 * y * y)
    return qd.RegularizationSchedule(
        tuple(e * scale for e in base.epsilons), base.extrapolation_order
    )


# ---------------------------------------------------------------------------


def theorem2_rhs(mu, m, c, config=DEFAULT_CONFIG):
    """(4 pi i^m / c) K_{2 mu}(4 pi / c) I_{m/2}(4 pi / c)."""
    c = complex(c)
    arg = PolarPoint(abs(4.0 * math.pi / c), -cmath.phase(c))
    return (
        4.0 * math.pi * (1j**m) / c
        * special.bessel_k(2.0 * mu, arg, config)
        * special.bessel_i(0.5 * m, arg, config)
    )


def verify_theorem2(mu, m, c_list=(1.0, 2.0, 1 + 0.5j), tol=1e-6,
                    config: EvalConfig = DEFAULT_CONFIG):
    """Radial exponential integral against the K*I closed form."""
    mu = complex(mu)
    t0 = time.perf_counter()
    order = OrderPair(mu, m)

    def one(c):
        inputs = {"mu": mu, "m": m, "c": complex(c)}
        try:
            lhs = qd.radial_bessel_integral(order, c, config)
            rhs = theorem2_rhs(mu, m, c, config)
            return CaseResult.compare(inputs, lhs.value, rhs, tol)
        except EvaluationError as exc:
            return CaseResult.flag(inputs, False, note=f"evaluation failed: {exc}")

    cases = _ordered_map(one, list(c_list))
    rep = VerificationReport("theorem2", cases, {"mu": _c(mu), "m": m, "tol": tol})
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def theorem1_rhs(mu, m, y, theta, config=DEFAULT_CONFIG):
    """(1/4y) e(cos theta / y) * kernel*(1/(16 y^2 e^{2 i theta}))."""
    w = PolarPoint(1.0 / (4.0 * y), -theta)
    half = OrderPair(0.5 * complex(mu), m // 2)
    return (
        (1.0 / (4.0 * y))
        * cmath.exp(2j * math.pi * math.cos(theta) / y)
        * cb.bold_j_sq(half, w, config)
    )


def verify_theorem1(mu, m, grid=None, schedule=None, config: EvalConfig = DEFAULT_CONFIG):
    """Fourier-kernel exponential integral against the quarter-order kernel."""
    mu = complex(mu)
    t0 = time.perf_counter()
    if grid is None:
        grid = [(y, th) for y in (0.5, 1.0, 2.0) for th in (0.0, math.pi / 3.0, math.pi)]
    order = OrderPair(mu, m)
    ys = sorted({y for y, _ in grid})

    def per_y(y):
        thetas = [th for yy, th in grid if yy == y]
        sched = schedule if schedule is not None else _scaled_schedule(y)
        try:
            gvals = qd.oscillatory_fourier_integral_multi(order, y, thetas, sched, config)
        except EvaluationError as exc:
            return [
                CaseResult.flag({"mu": _c(mu), "m": m, "y": y, "theta": th}, False,
                                note=f"evaluation failed: {exc}")
                for th in thetas
            ]
        rows = []
        for th, g in zip(thetas, gvals):
            rhs = theorem1_rhs(mu, m, y, th, config)
            tol = max(1e-3, 3.0 * g.regularization_error / max(abs(rhs), 1e-280))
            rows.append(
                CaseResult.compare(
                    {"mu": _c(mu), "m": m, "y": y, "theta": th},
                    g.value,
                    rhs,
                    tol,
                    note=f"regularization_error={g.regularization_error:.3e}",
                )
            )
        return rows

    cases = [row for rows in _ordered_map(per_y, ys) for row in rows]
    rep = VerificationReport(
        "theorem1", cases,
        {"mu": _c(mu), "m": m, "schedule": list((schedule or qd.DEFAULT_SCHEDULE).epsilons),
         "tol_rule": "max(1e-3, 3*regularization_error)"},
    )
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def weber_lhs(nu, y, sign, schedule=None, config: EvalConfig = DEFAULT_CONFIG):
    """int_0^inf x^{-1/2} J_nu(4 pi sqrt x) e(sign * x y) dx via x = t^2 and
    Gaussian Abel damping extrapolated to zero."""
    nu = complex(nu)
    if schedule is None:
        schedule = _scaled_schedule(math.sqrt(y))  # eps/y <= 0.1 at t0^2 = 1/y
    eps_list = schedule.epsilons
    t_big = math.sqrt(20.0 / eps_list[-1])

    xs, ws = np.polynomial.legendre.leggauss(24)
    nodes = []
    weights = []
    t = 0.0
    while t < t_big:
        om = 8.0 * math.pi + 4.0 * math.pi * y * t
        dt = min(t_big - t, 4.0 * 2.0 * math.pi / om)
        half = 0.5 * dt
        nodes.append(t + half + half * xs)
        weights.append(half * ws)
        t += dt
    tn = np.concatenate(nodes)
    tw = np.concatenate(weights)
    jt = special.bessel_j_grid(nu, 4.0 * math.pi * tn, 0.0, config)
    base = 2.0 * jt * np.exp(sign * 2j * math.pi * y * tn * tn)
    vals = [complex(np.sum(base * np.exp(-e * tn * tn) * tw)) for e in eps_list]
    limit, spread = qd.extrapolate_to_zero(eps_list, vals, schedule.extrapolation_order)
    return limit, spread


def weber_rhs(nu, y, sign):
    nu = complex(nu)
    phase = cmath.exp(-sign * 2j * math.pi * (1.0 / (2.0 * y) - nu / 8.0 - 0.125))
    return phase / math.sqrt(2.0 * y) * special.bessel_j(0.5 * nu, PolarPoint(math.pi / y, 0.0))


def verify_weber(nu, y_list=(1.0, 2.0), sign=1, tol=1e-4,
                 config: EvalConfig = DEFAULT_CONFIG):
    nu = complex(nu)
    t0 = time.perf_counter()

    def one(y):
        inputs = {"nu": _c(nu), "y": y, "sign": sign}
        try:
            lhs, spread = weber_lhs(nu, y, sign, config=config)
            rhs = weber_rhs(nu, y, sign)
            return CaseResult.compare(inputs, lhs, rhs, tol, note=f"spread={spread:.2e}")
        except EvaluationError as exc:
            return CaseResult.flag(inputs, False, note=f"evaluation failed: {exc}")

    cases = _ordered_map(one, list(y_list))
    rep = VerificationReport("weber", cases, {"nu": _c(nu), "sign": sign, "tol": tol})
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def gaussian_fourier_transform(sigma):
    """Closed transform of exp(-pi |z/sigma|^2) under e(-Tr(u z)) with
    measure i dz^dzbar: 2 sigma^2 exp(-4 pi sigma^2 |u|^2)."""
    s2 = sigma * sigma

    def fhat(u_abs2):
        return 2.0 * s2 * np.exp(-4.0 * math.pi * s2 * u_abs2)

    return fhat


def verify_corollary(mu, m, gaussian_width=1.0, tol=1e-3,
                     config: EvalConfig = DEFAULT_CONFIG):
    """Both sides of the Fourier-pairing identity with a Gaussian test
    function f(u) = exp(-pi |u/sigma|^2).

    LHS: the (y, theta) integral closes to the Gaussian transform, leaving
    sigma^2 * int int kernel(x e^{i phi}) exp(-4 pi sigma^2 x^2) dx dphi.
    RHS: absolutely convergent against the quarter-order kernel.
    """
    mu = complex(mu)
    sigma = float(gaussian_width)
    t0 = time.perf_counter()
    order = OrderPair(mu, m)
    inputs = {"mu": _c(mu), "m": m, "sigma": sigma}
    try:
        fhat = gaussian_fourier_transform(sigma)

        def mean_phi(x):
            n = 128
            while n < 2.3 * (4.0 * math.pi * math.sqrt(float(x.max())) + 16 + abs(m)):
                n *= 2
            acc = np.zeros(len(x), dtype=np.complex128)
            for j in range(n):
                acc += cb.bold_j_grid(order, x, 2.0 * math.pi * j / n, config)
            return acc * (2.0 * math.pi / n)

        def lhs_integrand(x):
            return mean_phi(x) * 0.5 * fhat(x * x)

        alpha = -2.0 * abs(mu.real)
        x_hi = math.sqrt(46.0 / (4.0 * math.pi * sigma * sigma))
        lhs = qd.integrate_de(lhs_integrand, 0.0, x_hi, endpoint_exponents=(alpha, 0.0),
                              tol=1e-10, config=config).value

        half = OrderPair(0.5 * mu, m // 2)

        def rhs_theta_integral(s_vals):
            out = np.empty(len(s_vals), dtype=np.complex128)
            for i, s in enumerate(s_vals):
                n = 64
                while n < 2.3 * (s + 16 + abs(m)):
                    n *= 2
                th = np.arange(n) * (2.0 * math.pi / n)
                wr = np.full(n, 0.25 * s)
                kern = cb.bold_j_sq_grid(half, wr, -th, config)
                vals = np.exp(2j * math.pi * s * np.cos(th)) * kern
                out[i] = np.sum(vals) * (2.0 * math.pi / n)
            return out

        def rhs_integrand(s):
            # y = 1/s substitution of the radial variable
            return rhs_theta_integral(s) * np.exp(-math.pi * (1.0 / (sigma * s)) ** 2) / (s * s)

        body = qd.integrate_de(rhs_integrand, 1e-3, 40.0, tol=1e-9, config=config).value
        tail = qd.accelerated_oscillatory_tail(rhs_integrand, 40.0, 0.5, tol=1e-9,
                                               config=config).value
        rhs = 0.25 * (body + tail)
        cases = [CaseResult.compare(inputs, lhs, rhs, tol)]
    except EvaluationError as exc:
        cases = [CaseResult.flag(inputs, False, note=f"evaluation failed: {exc}")]
    rep = VerificationReport("corollary", cases, {"mu": _c(mu), "m": m, "sigma": sigma, "tol": tol})
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def verify_asymptotics(mu, m, y_list=(10.0, 20.0, 40.0), radii=(25.0, 100.0, 400.0),
                       theta=0.3, config: EvalConfig = DEFAULT_CONFIG):
    """Large-argument behavior: the limit of the regularized transform and
    the decay exponent of the two-term kernel expansion."""
    mu = complex(mu)
    t0 = time.perf_counter()
    order = OrderPair(mu, m)
    cases = []
    try:
        devs = []
        for y in y_list:
            g = cb.g_function(order, y, theta, config)
            limit = cmath.exp(4j * math.pi * y * math.cos(theta)) + (-1.0) ** (m // 2)
            devs.append(abs(g.value - limit))
        for i, (y, d) in enumerate(zip(y_list, devs)):
            ok = i == 0 or d < devs[i - 1]
            cases.append(
                CaseResult.flag({"mu": _c(mu), "m": m, "y": y, "deviation": d}, ok,
                                note="limit deviation must decrease", measure=d)
            )
    except EvaluationError as exc:
        cases.append(CaseResult.flag({"mu": _c(mu), "m": m, "check": "limit"}, False,
                                     note=f"evaluation failed: {exc}"))
    try:
        errs = []
        for r in radii:
            z = PolarPoint(r, theta)
            errs.append(abs(cb.bold_j(order, z, config) - cb.bold_j_asymptotic(order, z, config)))
        logs_r = np.log(np.asarray(radii))
        logs_e = np.log(np.asarray(errs))
        slope = -np.polyfit(logs_r, logs_e, 1)[0]
        ok = 1.3 <= slope <= 1.7
        cases.append(
            CaseResult.flag({"mu": _c(mu), "m": m, "radii": list(radii), "slope": float(slope)},
                            ok, note="fitted decay exponent target 1.5", measure=float(slope))
        )
    except EvaluationError as exc:
        cases.append(CaseResult.flag({"mu": _c(mu), "m": m, "check": "decay"}, False,
                                     note=f"evaluation failed: {exc}"))
    rep = VerificationReport("asymptotics", cases, {"mu": _c(mu), "m": m, "theta": theta})
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def verify_ode(mu, m, h=1e-3, config: EvalConfig = DEFAULT_CONFIG):
    """Annihilating-operator residuals on a polar grid, for the order
    itself and the halved order (the transform side of the identity),
    plus the factor-4 residual drop under h halving."""
    mu = complex(mu)
    t0 = time.perf_counter()
    cases = []
    for label, od in (("base", OrderPair(mu, m)), ("half", OrderPair(0.5 * mu, m // 2))):
        for r in (1.5, 2.5, 4.0, 6.0, 9.0):
            for ang in (-2.2, -1.0, 0.0, 1.1, 2.4):
                w = PolarPoint(r, ang)
                inputs = {"order": label, "mu": _c(od.mu), "m": od.m, "r": r, "angle": ang}
                try:
                    r1, r2 = cb.ode_residual(od, w, h, config)
                    s1, s2 = cb.ode_residual_scale(od, w, h, config)
                    rel = max(abs(r1) / s1, abs(r2) / s2)
                    cases.append(CaseResult.flag(inputs, rel <= 1e-5, measure=rel,
                                                 tolerance=1e-5))
                except EvaluationError as exc:
                    cases.append(CaseResult.flag(inputs, False, note=f"failed: {exc}"))
    try:
        od = OrderPair(mu, m)
        w = PolarPoint(3.0, 0.4)
        big = max(abs(v) for v in cb.ode_residual(od, w, 2.0 * h, config))
        small = max(abs(v) for v in cb.ode_residual(od, w, h, config))
        ratio = big / small if small else float("inf")
        cases.append(
            CaseResult.flag({"mu": _c(mu), "m": m, "check": "h-halving", "ratio": ratio},
                            2.5 <= ratio <= 6.5, measure=ratio,
                            note="second-order stencil: expect ~4x")
        )
    except EvaluationError as exc:
        cases.append(CaseResult.flag({"check": "h-halving"}, False, note=f"failed: {exc}"))
    rep = VerificationReport("ode", cases, {"mu": _c(mu), "m": m, "h": h})
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


def verify_combinatorics(n_max=40, k_max=40, l_max=12, roundtrip_sequences=1000,
                         config: EvalConfig = DEFAULT_CONFIG):
    """All exact certificates plus the numeric vanishing sweeps."""
    t0 = time.perf_counter()
    certs = [
        comb.check_inversion(n_max, roundtrip_sequences=roundtrip_sequences, seq_len=64),
        comb.check_b_identity(n_max),
        comb.check_a_alternating(k_max),
        comb.check_a_recurrences(k_max),
        comb.check_pqr(k_max, l_max),
        comb.check_i_recurrence_lemmas(min(8, n_max), config=config),
        comb.check_recursion_prop(min(6, k_max), config=config),
    ]
    cases = [
        CaseResult.flag({"lemma": c.lemma, "ranges": c.ranges}, c.ok,
                        note="; ".join(str(x) for x in c.counterexamples[:3]))
        for c in certs
    ]
    rep = VerificationReport(
        "combinatorics", cases,
        {"n_max": n_max, "k_max": k_max, "l_max": l_max,
         "roundtrip_sequences": roundtrip_sequences},
    )
    rep.elapsed_ms = 1000 * (time.perf_counter() - t0)
    return rep


# ---------------------------------------------------------------------------


def _c(z):
    z = complex(z)
    return z if z.imag else z.real


SUITE_NAMES = ("theorem1", "theorem2", "weber", "corollary", "combinatorics",
               "asymptotics", "ode", "all")


def run_suites(names, mu=0.1, m=2, tol=None, schedule=None, kmax=40,
               config: EvalConfig = DEFAULT_CONFIG, quick=False):
    """Run named suites on their default grids; returns list of reports."""
    if "all" in names:
        names = ["theorem2", "theorem1", "weber", "corollary", "combinatorics",
                 "asymptotics", "ode"]
    reports = []
    for name in names:
        if name == "theorem2":
            mus = (mu,) if quick else (0.1, 0.3, 0.05 + 0.2j)
            ms = (m,) if quick else (0, 2, 4)
            for mui in mus:
                for mi in ms:
                    reports.append(
                        verify_theorem2(mui, mi, tol=tol or 1e-6, config=config)
                    )
        elif name == "theorem1":
            mus = (mu,) if quick else (0.1, 0.2 + 0.3j)
            ms = (m,) if quick else (0, 2, 4)
            grid = [(1.0, 0.0)] if quick else None
            for mui in mus:
                for mi in ms:
                    reports.append(
                        verify_theorem1(mui, mi, grid=grid, schedule=schedule, config=config)
                    )
        elif name == "weber":
            for nu in ((1.0,) if quick else (1.0, 3.0, 0.5)):
                for sign in ((1,) if quick else (1, -1)):
                    reports.append(
                        verify_weber(nu, (1.0, 2.0), sign, tol=tol or 1e-4, config=config)
                    )
        elif name == "corollary":
            for mi in ((m,) if quick else (0, 2)):
                reports.append(verify_corollary(0.1, mi, tol=tol or 1e-3, config=config))
        elif name == "combinatorics":
            reports.append(
                verify_combinatorics(k_max=kmax, n_max=kmax,
                                     roundtrip_sequences=50 if quick else 1000,
                                     config=config)
            )
        elif name == "asymptotics":
            reports.append(
                verify_asymptotics(mu, m, y_list=(10.0,) if quick else (10.0, 20.0, 40.0),
                                   config=config)
            )
        elif name == "ode":
            reports.append(verify_ode(mu, m, config=config))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return reports
