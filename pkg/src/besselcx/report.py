"""Structured verification reports with deterministic serialization.

Reports are canonical: keys sorted, floats through repr (shortest
round-trip), complex values as [re, im] pairs, and no volatile fields
(wall time is included only when explicitly requested), so a rerun with
any thread count produces byte-identical JSON.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

CONVENTION_HEADER = (
    "measure i dz^dzbar = 2 dx dy; e(x) = exp(2 pi i x); Tr(z) = z + conj(z)"
)


def _num(z):
    if isinstance(z, complex):
        return [z.real, z.imag]
    return z


@dataclass(frozen=True)
class CaseResult:
    inputs: dict
    lhs: complex
    rhs: complex
    abs_diff: float
    rel_diff: float
    tolerance: float
    status: str
    note: str = ""

    @staticmethod
    def compare(inputs, lhs, rhs, tolerance, note="", zero_floor=1e-12):
        """pass iff rel_diff <= tol, or abs_diff <= tol when the reference
        side vanishes (|rhs| below zero_floor counts as zero)."""
        lhs = complex(lhs)
        rhs = complex(rhs)
        abs_diff = abs(lhs - rhs)
        if abs(rhs) <= zero_floor:
            ok = abs_diff <= tolerance
            rel = float("inf") if abs_diff else 0.0
        else:
            rel = abs_diff / abs(rhs)
            ok = rel <= tolerance
        return CaseResult(
            inputs=dict(inputs),
            lhs=lhs,
            rhs=rhs,
            abs_diff=abs_diff,
            rel_diff=rel,
            tolerance=tolerance,
            status="pass" if ok else "fail",
            note=note,
        )

    @staticmethod
    def flag(inputs, ok, note="", tolerance=0.0, measure=0.0):
        """A boolean check (trend tests, certificates)."""
        return CaseResult(
            inputs=dict(inputs),
            lhs=complex(measure),
            rhs=0.0,
            abs_diff=float(measure),
            rel_diff=float(measure),
            tolerance=tolerance,
            status="pass" if ok else "fail",
            note=note,
        )

    def as_dict(self):
        return {
            "inputs": {k: _num(v) for k, v in self.inputs.items()},
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "abs_diff": self.abs_diff,
            "rel_diff": None if self.rel_diff == float("inf") else self.rel_diff,
            "tolerance": self.tolerance,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    suite: str
    cases: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    @property
    def n_pass(self):
        return sum(1 for c in self.cases if c.status == "pass")

    @property
    def n_fail(self):
        return len(self.cases) - self.n_pass

    @property
    def ok(self):
        return self.n_fail == 0 and self.cases

    def as_dict(self, with_timing=False):
        return {
            "suite": self.suite,
            "convention_header": CONVENTION_HEADER,
            "cases": [c.as_dict() for c in self.cases],
            "summary": {"pass": self.n_pass, "fail": self.n_fail, "total": len(self.cases)},
            "metadata": dict(self.metadata),
            "elapsed_ms": self.elapsed_ms if with_timing else None,
        }


def reports_to_json(reports, with_timing=False):
    payload = {
        "convention_header": CONVENTION_HEADER,
        "reports": [r.as_dict(with_timing) for r in reports],
        "all_pass": all(r.ok for r in reports),
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def reports_to_csv(reports):
    out = io.StringIO()
    out.write("suite,case,lhs_re,lhs_im,rhs_re,rhs_im,abs_diff,rel_diff,tolerance,status\n")
    for r in reports:
        for i, c in enumerate(r.cases):
            rel = "" if c.rel_diff == float("inf") else repr(c.rel_diff)
            out.write(
                f"{r.suite},{i},{c.lhs.real!r},{c.lhs.imag!r},{c.rhs.real!r},"
                f"{c.rhs.imag!r},{c.abs_diff!r},{rel},{c.tolerance!r},{c.status}\n"
            )
    return out.getvalue()
