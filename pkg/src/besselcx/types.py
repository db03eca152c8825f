"""Shared domain types: branch-carrying polar points, orders, configuration.

Complex scalars are plain Python ``complex`` / NumPy ``complex128``
throughout; the one structured scalar is :class:`PolarPoint`, which keeps
the *unreduced* angle so that every power ``z**nu`` is taken on the branch
the caller chose.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "EvaluationError",
    "GammaPoleError",
    "ConvergenceError",
    "BranchAngleError",
    "DomainError",
    "LimitEvaluationError",
    "ExtrapolationError",
    "PolarPoint",
    "EvalConfig",
    "OrderPair",
    "DEFAULT_CONFIG",
    "require_finite",
]

MAX_BRANCH_ANGLE = 8.0 * math.pi


class EvaluationError(Exception):
    """Base class for all evaluation failures."""


class GammaPoleError(EvaluationError):
    """Gamma requested at a nonpositive integer."""


class ConvergenceError(EvaluationError):
    """A series or refinement loop exceeded its term/level budget."""


class BranchAngleError(EvaluationError):
    """Polar angle beyond +-8*pi; almost certainly a caller bug."""


class DomainError(EvaluationError):
    """Input outside the validity range of the requested operation."""


class LimitEvaluationError(EvaluationError):
    """The nongeneric (integer-order) limit could not be evaluated."""


class ExtrapolationError(EvaluationError):
    """The regularization extrapolation did not settle."""


def require_finite(value, what="value"):
    """Reject NaN/Inf instead of silently propagating it."""
    if isinstance(value, complex):
        ok = math.isfinite(value.real) and math.isfinite(value.imag)
    else:
        ok = math.isfinite(value)
    if not ok:
        raise EvaluationError(f"non-finite {what}: {value!r}")
    return value


@dataclass(frozen=True)
class PolarPoint:
    """A nonzero complex point as (radius, unreduced angle).

    The angle is deliberately *not* reduced modulo 2*pi: it fixes the
    branch of every power through ``z**nu = exp(nu*(log radius + i*angle))``.
    """

    radius: float
    angle: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be finite and > 0, got {self.radius}")
        if not math.isfinite(self.angle):
            raise DomainError(f"angle must be finite, got {self.angle}")

    @staticmethod
    def from_complex(z, angle_hint=None):
        """Principal-argument polar form; ``angle_hint`` picks the 2*pi sheet
        closest to the hint instead."""
        r = abs(z)
        if r == 0.0:
            raise DomainError("cannot represent 0 as a PolarPoint")
        a = cmath.phase(z)
        if angle_hint is not None:
            a += 2.0 * math.pi * round((angle_hint - a) / (2.0 * math.pi))
        return PolarPoint(r, a)

    def to_complex(self):
        return self.radius * cmath.exp(1j * self.angle)

    def conj(self):
        return PolarPoint(self.radius, -self.angle)

    def sqrt(self):
        """Principal square root on this branch: (sqrt(r), angle/2)."""
        return PolarPoint(math.sqrt(self.radius), 0.5 * self.angle)

    def scaled(self, factor):
        if not factor > 0:
            raise DomainError("scale factor must be > 0")
        return PolarPoint(factor * self.radius, self.angle)

    def log(self):
        return complex(math.log(self.radius), self.angle)

    def power(self, exponent):
        """z**exponent on this branch."""
        return cmath.exp(exponent * self.log())

    @property
    def imag(self):
        return self.radius * math.sin(self.angle)

    @property
    def real(self):
        return self.radius * math.cos(self.angle)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation knobs shared by the whole numerical layer.

    series_tol: relative truncation tolerance of power series.
    max_terms: series term budget before ConvergenceError.
    switch_radius_factor: series/asymptotic handoff at
        r = max(12, factor*|nu|^2).
    oracle_precision_digits: working digits of the extended-precision
        series oracle (test support).
    """

    series_tol: float = 1e-15
    max_terms: int = 400
    switch_radius_factor: float = 1.0
    oracle_precision_digits: int = 50

    def __post_init__(self):
        if not self.series_tol > 0:
            raise DomainError("series_tol must be > 0")
        if self.max_terms < 16:
            raise DomainError("max_terms must be >= 16")
        if self.oracle_precision_digits < 30:
            raise DomainError("oracle_precision_digits must be >= 30")

    def switch_radius(self, nu):
        return max(12.0, self.switch_radius_factor * abs(nu) ** 2)


DEFAULT_CONFIG = EvalConfig()

# Orders closer than this to a nongeneric point are evaluated by the
# two-sided epsilon limit instead of the raw formula.
NONGENERIC_WINDOW = 1e-4


@dataclass(frozen=True)
class OrderPair:
    """The order (mu, m) of the two-variable Bessel kernel.

    Generic means 4*mu is not in 2Z + m; only nongeneric orders need the
    limit form of the defining formula.
    """

    mu: complex
    m: int

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        if not isinstance(self.m, int):
            raise DomainError("m must be an integer")
        require_finite(self.mu, "mu")

    def nongeneric_distance(self):
        """Distance from 4*mu to the lattice 2Z + m (complex distance)."""
        w = 4.0 * self.mu - self.m
        nearest = 2.0 * round(w.real / 2.0)
        return abs(w - nearest)

    def is_generic(self):
        return self.nongeneric_distance() > 0.0

    def needs_limit(self):
        return self.nongeneric_distance() < NONGENERIC_WINDOW

    def normalized(self):
        """Canonical representative of {(mu, m), (-mu, -m)}.

        The kernel is invariant under simultaneous negation, so both map
        to the same code path.
        """
        if self.m < 0:
            return OrderPair(-self.mu, -self.m)
        if self.m == 0:
            key = (self.mu.real, self.mu.imag)
            if key < (-self.mu.real, -self.mu.imag):
                return OrderPair(-self.mu, 0)
        return self

    def factor_orders(self):
        """Orders (2*mu + m/2, 2*mu - m/2) of the two classical factors."""
        return 2.0 * self.mu + 0.5 * self.m, 2.0 * self.mu - 0.5 * self.m
