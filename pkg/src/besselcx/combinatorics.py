"""Exact combinatorial layer and the vanishing-sum numerics.

Everything in the first half is integer/rational arithmetic (Python ints
and ``fractions.Fraction``) with the conventions

    C(n, r) = 0          if r < 0 or 0 <= n < r,
    C(-s, p)             generalized value, kept in a separate function
                         used only by test oracles.

The second half evaluates the alternating modified-Bessel sums whose
identical vanishing encodes the radial exponential integral formula, plus
their recursion.  Certificates are plain data suitable for JSON reports.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import special
from .types import DEFAULT_CONFIG, DomainError, EvalConfig, PolarPoint

__all__ = [
    "BigRational",
    "RationalPolynomial",
    "Certificate",
    "binomial",
    "generalized_binomial",
    "d_coeff",
    "b_coeff",
    "a_coeff",
    "check_inversion",
    "check_b_identity",
    "check_a_alternating",
    "check_a_recurrences",
    "p_poly",
    "poly_derivative",
    "check_pqr",
    "s_kl",
    "s_k_direct",
    "s_k_simplified",
    "check_i_recurrence_lemmas",
    "check_recursion_prop",
]

BigRational = Fraction


@dataclass(frozen=True)
class Certificate:
    """Outcome of one exact or numeric identity sweep."""

    lemma: str
    ranges: dict
    status: str
    counterexamples: list = field(default_factory=list)
    elapsed_ms: float | None = None

    @property
    def ok(self):
        return self.status == "pass"

    def as_dict(self, with_timing=False):
        return {
            "lemma": self.lemma,
            "ranges": self.ranges,
            "status": self.status,
            "counterexamples": self.counterexamples,
            "elapsed_ms": self.elapsed_ms if with_timing else None,
        }


def _certify(lemma, ranges, counterexamples, t0):
    return Certificate(
        lemma=lemma,
        ranges=ranges,
        status="pass" if not counterexamples else "fail",
        counterexamples=counterexamples[:16],
        elapsed_ms=1000.0 * (time.perf_counter() - t0),
    )


# ---------------------------------------------------------------------------
# coefficients


def binomial(n, r):
    """C(n, r) with the zero conventions: 0 for r < 0 or n < r, and the
    empty product C(n, 0) = 1 for every n.

    A signed value for negative upper index lives in
    generalized_binomial and is used only by test oracles.
    """
    if r < 0:
        return 0
    if r == 0:
        return 1
    if n < r:
        return 0
    return math.comb(n, r)


def generalized_binomial(n, r):
    """C(n, r) = n(n-1)...(n-r+1)/r! for any integer n (test oracle use)."""
    if r < 0:
        return 0
    num = 1
    for j in range(r):
        num *= n - j
    return num // math.factorial(r) if num % math.factorial(r) == 0 else Fraction(num, math.factorial(r))


def d_coeff(n, r):
    """D_n^r = (-1)^r (C(n-r, r) + C(n-r-1, r-1))."""
    return (-1) ** (r & 1) * (binomial(n - r, r) + binomial(n - r - 1, r - 1))


def b_coeff(l, n, r):
    """B_{l,n}^r = C(l+r, r) C(n-r, n-l-r) - C(l+r-1, r-1) C(n-r-1, n-l-r-1)."""
    return binomial(l + r, r) * binomial(n - r, n - l - r) - binomial(l + r - 1, r - 1) * binomial(
        n - r - 1, n - l - r - 1
    )


def a_coeff(k, l, r):
    """A_{k,l}^r = C(l+r-1, r-1) C(2k-l-1, k-l-r-1) + C(l+r, r) C(2k-l-1, k-l-r).

    The C conventions make it vanish outside 0 <= r <= k - l.
    """
    return binomial(l + r - 1, r - 1) * binomial(2 * k - l - 1, k - l - r - 1) + binomial(
        l + r, r
    ) * binomial(2 * k - l - 1, k - l - r)


# ---------------------------------------------------------------------------
# exact certificates


def check_inversion(n_max, roundtrip_sequences=25, seq_len=32, seed=20240601):
    """delta identity sum_r C(n,r) D_{n-2r}^{s-r} = [s == 0], plus the
    sequence-inversion roundtrip on random rationals."""
    if n_max > 200:
        raise DomainError("n_max capped at 200")
    t0 = time.perf_counter()
    bad = []
    for n in range(n_max + 1):
        for s in range(n // 2 + 1):
            total = sum(binomial(n, r) * d_coeff(n - 2 * r, s - r) for r in range(s + 1))
            if total != (1 if s == 0 else 0):
                bad.append({"n": n, "s": s, "value": str(total)})
    rng = random.Random(seed)
    for trial in range(roundtrip_sequences):
        f = [Fraction(rng.randint(-99, 99), rng.randint(1, 99)) for _ in range(seq_len)]
        g = [
            sum(d_coeff(n, r) * f[n - 2 * r] for r in range(n // 2 + 1))
            for n in range(seq_len)
        ]
        back = [
            sum(binomial(n, r) * g[n - 2 * r] for r in range(n // 2 + 1))
            for n in range(seq_len)
        ]
        if back != f:
            bad.append({"roundtrip_trial": trial})
    return _certify(
        "inversion",
        {"n_max": n_max, "roundtrip_sequences": roundtrip_sequences, "seq_len": seq_len},
        bad,
        t0,
    )


def check_b_identity(n_max):
    """sum_r C(n,r) B_{l, n-2r}^{s-r} = C(n,l) C(n-l,s) and the mirror
    symmetry B_{l,n}^r = B_{l,n}^{n-l-r}."""
    if n_max > 120:
        raise DomainError("n_max capped at 120")
    t0 = time.perf_counter()
    bad = []
    for n in range(n_max + 1):
        for l in range(n + 1):
            for s in range(n - l + 1):
                lhs = sum(binomial(n, r) * b_coeff(l, n - 2 * r, s - r) for r in range(s + 1))
                if lhs != binomial(n, l) * binomial(n - l, s):
                    bad.append({"n": n, "l": l, "s": s})
            for r in range(n - l + 1):
                if b_coeff(l, n, r) != b_coeff(l, n, n - l - r):
                    bad.append({"symmetry": [l, n, r]})
    return _certify("homogeneous-part", {"n_max": n_max}, bad, t0)


def check_a_alternating(k_max):
    """sum_{n=l+r}^k (-1)^n C(2k, k-n) B_{l,n}^r = (-1)^{l+r} A_{k,l}^r,
    plus vanishing of A outside 0 <= r <= k-l."""
    if k_max > 100:
        raise DomainError("k_max capped at 100")
    t0 = time.perf_counter()
    bad = []
    for k in range(1, k_max + 1):
        for l in range(k + 1):
            for r in range(k - l + 1):
                lhs = sum(
                    (-1) ** (n & 1) * binomial(2 * k, k - n) * b_coeff(l, n, r)
                    for n in range(l + r, k + 1)
                )
                if lhs != (-1) ** ((l + r) & 1) * a_coeff(k, l, r):
                    bad.append({"k": k, "l": l, "r": r})
        for l in range(k + 2):
            for r in (-2, -1, k - l + 1, k - l + 2):
                if a_coeff(k, l, r) != 0:
                    bad.append({"vanishing": [k, l, r]})
    return _certify("alternating-sum", {"k_max": k_max}, bad, t0)


def check_a_recurrences(k_max):
    """The recurrence family for A_{k,l}^r (Pascal level, l = 1 level and
    the three general-l relations)."""
    if k_max > 100:
        raise DomainError("k_max capped at 100")
    t0 = time.perf_counter()
    bad = []
    for k in range(1, k_max + 1):
        # l = 0 ladder
        if a_coeff(k + 1, 0, 0) != 2 * a_coeff(k, 0, 0) + a_coeff(k, 0, 1):
            bad.append({"rel": "l0-r0", "k": k})
        if a_coeff(k + 1, 0, 1) != 2 * a_coeff(k, 0, 0) + 2 * a_coeff(k, 0, 1) + a_coeff(k, 0, 2):
            bad.append({"rel": "l0-r1", "k": k})
        for r in range(2, k + 3):
            if a_coeff(k + 1, 0, r) != a_coeff(k, 0, r - 1) + 2 * a_coeff(k, 0, r) + a_coeff(
                k, 0, r + 1
            ):
                bad.append({"rel": "l0", "k": k, "r": r})
        # l = 1 ladder
        if a_coeff(k + 1, 1, 0) != (k + 1) * (2 * a_coeff(k, 0, 0) - a_coeff(k, 0, 1)):
            bad.append({"rel": "l1-r0", "k": k})
        for r in range(1, k + 2):
            if a_coeff(k + 1, 1, r) != (k + 1) * (a_coeff(k, 0, r) - a_coeff(k, 0, r + 1)):
                bad.append({"rel": "l1", "k": k, "r": r})
        if a_coeff(k + 1, 1, 0) - (
            2 * a_coeff(k, 0, 0) - a_coeff(k, 0, 1) + a_coeff(k, 1, 0) + a_coeff(k, 1, 1)
        ) != 0:
            bad.append({"rel": "l1-pascal-r0", "k": k})
        for r in range(1, k + 2):
            if a_coeff(k + 1, 1, r) - (
                a_coeff(k, 0, r)
                - a_coeff(k, 0, r + 1)
                + a_coeff(k, 1, r - 1)
                + 2 * a_coeff(k, 1, r)
                + a_coeff(k, 1, r + 1)
            ) != 0:
                bad.append({"rel": "l1-pascal", "k": k, "r": r})
        # general l >= 2
        for l in range(2, k + 2):
            for r in range(-1, k - l + 2):
                lhs0 = (k - 1) * (l - 1) * l * a_coeff(k + 1, l, r) - (k - 1) * (k + 1) * (
                    k - l + 2
                ) * a_coeff(k, l - 2, r + 1)
                rhs0 = -(k + 1) * (2 * k - l) * (2 * k - l + 1) * a_coeff(k - 1, l - 2, r + 1)
                if lhs0 != rhs0:
                    bad.append({"rel": "gl-0", "k": k, "l": l, "r": r})
                lhs1 = l * a_coeff(k + 1, l, r) - (k - l + 2) * (
                    a_coeff(k, l - 2, r + 1) + a_coeff(k, l - 1, r) - a_coeff(k, l - 1, r + 1)
                )
                if lhs1 != -(2 * k - l) * a_coeff(k - 1, l - 2, r + 1):
                    bad.append({"rel": "gl-1", "k": k, "l": l, "r": r})
                lhs2 = a_coeff(k + 1, l, r) - (
                    a_coeff(k, l - 1, r)
                    - a_coeff(k, l - 1, r + 1)
                    + a_coeff(k, l, r - 1)
                    + 2 * a_coeff(k, l, r)
                    + a_coeff(k, l, r + 1)
                )
                if lhs2 != a_coeff(k - 1, l - 2, r + 1):
                    bad.append({"rel": "gl-2", "k": k, "l": l, "r": r})
    return _certify("coefficient-recurrences", {"k_max": k_max}, bad, t0)


# ---------------------------------------------------------------------------
# exact polynomials


class RationalPolynomial:
    """Dense polynomial over Fraction in one variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def __eq__(self, other):
        return isinstance(other, RationalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    def scale(self, factor):
        return RationalPolynomial([Fraction(factor) * c for c in self.coeffs])

    def derivative(self):
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, v):
        acc = 0.0 if not isinstance(v, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + (float(c) if not isinstance(v, Fraction) else c)
        return acc

    def is_zero(self):
        return not self.coeffs

    def __repr__(self):
        return f"RationalPolynomial({list(self.coeffs)!r})"


_V = RationalPolynomial([0, 1])
_Q_POLY = RationalPolynomial([0, 1, -1])        # v(1-v)
_R_POLY = RationalPolynomial([1, -3])           # 1 - 3v


def p_poly(k):
    """P_k(v) = v^k (1-v)^{k-1}, k >= 1."""
    if k < 1:
        raise DomainError("P_k defined for k >= 1")
    one_minus = RationalPolynomial([1, -1])
    out = RationalPolynomial([1])
    for _ in range(k):
        out = out * _V
    for _ in range(k - 1):
        out = out * one_minus
    return out


def poly_derivative(p, l):
    """l-th derivative; l = 0 returns p itself."""
    if l < 0:
        raise DomainError("derivative order must be >= 0")
    for _ in range(l):
        p = p.derivative()
    return p


def check_pqr(k_max, l_max):
    """Both derivative transfer identities between P_{k+1}, P_k, P_{k-1}."""
    if k_max > 60:
        raise DomainError("k_max capped at 60")
    t0 = time.perf_counter()
    bad = []
    zero = RationalPolynomial([])
    for k in range(1, k_max + 1):
        pk = p_poly(k)
        pk1 = p_poly(k + 1)
        pkm = p_poly(k - 1) if k >= 2 else None
        derivs = {0: pk}
        for l in range(1, l_max + 3):
            derivs[l] = derivs[l - 1].derivative()
        d1 = {0: pk1}
        for l in range(1, l_max + 1):
            d1[l] = d1[l - 1].derivative()
        dm = None
        if pkm is not None:
            dm = {0: pkm}
            for l in range(1, l_max + 1):
                dm[l] = dm[l - 1].derivative()
        for l in range(0, l_max + 1):
            lhs = d1[l].scale(k - l + 2)
            rhs = derivs[l] * _Q_POLY
            rhs = rhs.scale(k + 2)
            if l >= 1:
                rhs = rhs + (derivs[l - 1] * _R_POLY).scale(l)
            if l >= 2:
                rhs = rhs + derivs[l - 2].scale((k - 1) * (l - 1) * l)
            if lhs != rhs:
                bad.append({"identity": 1, "k": k, "l": l})
            if pkm is not None:
                lhs2 = dm[l].scale((k - 1) * k * (k - l))
                rhs2 = (derivs[l + 2] * _Q_POLY).scale(k - 2)
                rhs2 = rhs2 + (derivs[l + 1] * _R_POLY).scale(2 * k - l - 2)
                rhs2 = rhs2 + derivs[l].scale((k + 1) * (2 * k - l - 2) * (2 * k - l - 1))
                if lhs2 != rhs2:
                    bad.append({"identity": 2, "k": k, "l": l})
        if p_poly(k + 1) != pk * _Q_POLY:
            bad.append({"identity": "base", "k": k})
        _ = zero
    return _certify("derivative-transfer", {"k_max": k_max, "l_max": l_max}, bad, t0)


# ---------------------------------------------------------------------------
# the vanishing sums


def _i_int(n, z, config):
    """I_n(z) for integer n and complex z (principal polar form)."""
    n = abs(int(n))
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    return special.bessel_i(float(n), PolarPoint.from_complex(z), config)


def s_kl(k, l, z, config: EvalConfig = DEFAULT_CONFIG):
    """S_{k,l}(z) = sum_{r=0}^{k-l} (-1)^r A_{k,l}^r I_{l+2r}(z)."""
    if l < 0 or l > k:
        return 0.0 + 0.0j
    z = complex(z)
    acc = 0.0 + 0.0j
    for r in range(k - l + 1):
        acc += (-1) ** (r & 1) * a_coeff(k, l, r) * _i_int(l + 2 * r, z, config)
    return acc


def _s_k_direct_terms(k, v, a, config):
    """value and magnitude scale of the alternating derivative sum."""
    a = complex(a)
    if a == 0:
        raise DomainError("a must be nonzero")
    if not 0 < v <= 1:
        raise DomainError("v must lie in (0, 1]")
    pk = p_poly(k)
    pderiv = {0: pk}
    for j in range(1, 2 * k + 1):
        pderiv[j] = pderiv[j - 1].derivative()
    total = 0.0 + 0.0j
    scale = 0.0
    for n in range(k + 1):
        cn = (-1) ** (n & 1) * binomial(2 * k, k - n)
        for r in range(n // 2 + 1):
            j = n - 2 * r
            # d^j/dv^j (I_n(a v) P_k(v)) by Leibniz with exact P-derivatives
            dv = 0.0 + 0.0j
            for i in range(j + 1):
                dv += (
                    math.comb(j, i)
                    * a**i
                    * special.bessel_i_derivative(float(n), i, PolarPoint.from_complex(a * v), config)
                    * pderiv[j - i](v)
                )
            term = cn * (2.0 / a) ** j * d_coeff(n, r) * dv
            total += term
            scale += abs(term)
    return total, scale


def s_k_direct(k, v, a, config: EvalConfig = DEFAULT_CONFIG):
    """The alternating derivative sum; identically zero in exact arithmetic."""
    if k > 12:
        raise DomainError("k capped at 12")
    return _s_k_direct_terms(k, v, a, config)[0]


def s_k_direct_scale(k, v, a, config: EvalConfig = DEFAULT_CONFIG):
    """Sum of term magnitudes (the natural normalization of the zero)."""
    return _s_k_direct_terms(k, v, a, config)[1]


def s_k_simplified(k, v, a, config: EvalConfig = DEFAULT_CONFIG):
    """sum_l (-2/a)^l P_k^(l)(v) S_{k,l}(a v)."""
    if k > 12:
        raise DomainError("k capped at 12")
    a = complex(a)
    pk = p_poly(k)
    acc = 0.0 + 0.0j
    pd = pk
    for l in range(k + 1):
        if l > 0:
            pd = pd.derivative()
        acc += (-2.0 / a) ** l * pd(v) * s_kl(k, l, a * v, config)
    return acc


def check_i_recurrence_lemmas(n_max, samples=4, seed=20240602, config: EvalConfig = DEFAULT_CONFIG):
    """Numeric spot checks of the inversion applied to I and K derivative
    ladders, and of the general-l ladder."""
    if n_max > 12:
        raise DomainError("n_max capped at 12")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        nu = complex(rng.uniform(0.2, 1.6), rng.uniform(-0.4, 0.4))
        zc = complex(rng.uniform(0.6, 2.4), rng.uniform(-0.5, 0.5))
        z = PolarPoint.from_complex(zc)
        for n in range(n_max + 1):
            # sum_r D_n^r 2^{n-2r} I^{(n-2r)} = I_{nu-n} + I_{nu+n} (n>=1)
            acc = sum(
                d_coeff(n, r) * 2.0 ** (n - 2 * r) * special.bessel_i_derivative(nu, n - 2 * r, z, config)
                for r in range(n // 2 + 1)
            )
            want = (
                special.bessel_i(nu, z, config)
                if n == 0
                else special.bessel_i(nu - n, z, config) + special.bessel_i(nu + n, z, config)
            )
            scale = abs(want) + 1.0
            if abs(acc - want) > 1e-9 * scale:
                bad.append({"which": "I", "n": n, "rel": abs(acc - want) / scale})
            acck = sum(
                d_coeff(n, r) * (-2.0) ** (n - 2 * r) * special.bessel_k_derivative(nu, n - 2 * r, z, config)
                for r in range(n // 2 + 1)
            )
            wantk = (
                special.bessel_k(nu, z, config)
                if n == 0
                else special.bessel_k(nu - n, z, config) + special.bessel_k(nu + n, z, config)
            )
            scalek = abs(wantk) + 1.0
            if abs(acck - wantk) > 1e-9 * scalek:
                bad.append({"which": "K", "n": n, "rel": abs(acck - wantk) / scalek})
            for l in range(n + 1):
                lhs = sum(
                    d_coeff(n, r)
                    * 2.0 ** (n - 2 * r)
                    * binomial(n - 2 * r, l)
                    * special.bessel_i_derivative(nu, n - l - 2 * r, z, config)
                    for r in range((n - l) // 2 + 1)
                )
                rhs = 2.0**l * sum(
                    b_coeff(l, n, s) * special.bessel_i(nu - n + l + 2 * s, z, config)
                    for s in range(n - l + 1)
                )
                scale2 = abs(rhs) + 1.0
                if abs(lhs - rhs) > 1e-9 * scale2:
                    bad.append({"which": "general-l", "n": n, "l": l, "rel": abs(lhs - rhs) / scale2})
    return _certify(
        "derivative-ladders", {"n_max": n_max, "samples": samples}, bad, t0
    )


def check_recursion_prop(k_max, samples=3, seed=20240603, h=1e-3,
                         config: EvalConfig = DEFAULT_CONFIG):
    """Residual of the three-term recursion tying S_{k+1}, S_k, S_{k-1}.

    All members are numerically zero, so this is a magnitude-consistency
    audit: the residual must stay at the same rounding level as the term
    magnitudes themselves.
    """
    if k_max > 8:
        raise DomainError("k_max capped at 8")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        v = rng.uniform(0.25, 0.75)
        a = complex(rng.uniform(1.0, 4.0), rng.uniform(-1.0, 1.0))
        for k in range(1, k_max + 1):
            sk = lambda vv: s_k_simplified(k, vv, a, config)
            s0 = sk(v)
            d1 = (sk(v + h) - sk(v - h)) / (2 * h)
            d2 = (sk(v + h) - 2 * s0 + sk(v - h)) / (h * h)
            skp = s_k_simplified(k + 1, v, a, config)
            # the (k-1)k factor kills the k = 1 term, where P_0 is undefined
            skm = s_k_simplified(k - 1, v, a, config) if k >= 2 else 0.0
            q = v * (1 - v)
            rr = 1 - 3 * v
            resid = a * a * skp + 4.0 * (
                q * (d2 - a * a * s0) + rr * d1 + (k * k - 1) * s0 - (k - 1) * k * skm
            )
            scale = s_k_direct_scale(k, v, a, config) * (abs(a) ** 2 + 8.0 / h)
            if abs(resid) > 1e-6 * scale:
                bad.append({"k": k, "v": v, "resid": abs(resid), "scale": scale})
    return _certify("vanishing-sum-recursion", {"k_max": k_max, "samples": samples}, bad, t0)
