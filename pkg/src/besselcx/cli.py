"""Command-line interface: evaluate kernels, run verification suites,
emit value tables.

Exit codes: 0 all selected checks pass, 1 any failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from . import complexbessel as cb
from . import quadrature as qd
from .report import reports_to_csv, reports_to_json
from .types import DomainError, EvalConfig, OrderPair, PolarPoint
from .verify import SUITE_NAMES, run_suites, thread_count


def _parse_complex(text):
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _parse_polar(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected R,THETA, got {text!r}")
    return PolarPoint(float(parts[0]), float(parts[1]))


def _parse_grid(text):
    lo, hi, n = text.split(":")
    return np.linspace(float(lo), float(hi), int(n))


def load_config_file(path):
    """Flat key = value file (floats, ints, comma lists)."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: {raw.rstrip()}")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key] = val
    return values


def build_runtime(values):
    cfg_kwargs = {}
    for key, cast in (("series_tol", float), ("max_terms", int),
                      ("switch_radius_factor", float), ("oracle_precision_digits", int)):
        if key in values:
            cfg_kwargs[key] = cast(values[key])
    config = EvalConfig(**cfg_kwargs)
    schedule = None
    if "eps_schedule" in values:
        eps = tuple(float(s) for s in values["eps_schedule"].split(","))
        order = int(values.get("extrapolation_order", 2))
        schedule = qd.RegularizationSchedule(eps, order)
    return config, schedule


def _add_common(p):
    p.add_argument("--mu", type=_parse_complex, default=complex(0.1),
                   help="order parameter mu as RE or RE,IM")
    p.add_argument("--m", type=int, default=2, help="integer order parameter m")
    p.add_argument("--config", help="key=value config file")


def make_parser():
    ap = argparse.ArgumentParser(prog="besselcx",
                                 description="complex Bessel kernel evaluation and identity verification")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate the kernel at a point")
    _add_common(pe)
    pe.add_argument("--z", type=_parse_polar, required=True, help="point as R,THETA")
    pe.add_argument("--form", choices=("bold", "pair", "sq"), default="bold")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=SUITE_NAMES)
    _add_common(pv)
    pv.add_argument("--tol", type=float, default=None, help="override tolerance")
    pv.add_argument("--eps-schedule", dest="eps_schedule",
                    help="comma list of damping exponents, e.g. 0.2,0.1,0.05,0.025")
    pv.add_argument("--report", help="write the report to this path")
    pv.add_argument("--format", choices=("json", "csv"), default="json")
    pv.add_argument("--kmax", type=int, default=40, help="combinatorics sweep bound")
    pv.add_argument("--quick", action="store_true", help="single-order smoke grids")
    pv.add_argument("--timing", action="store_true",
                    help="include wall time in reports (breaks byte-reproducibility)")

    pt = sub.add_parser("table", help="emit a CSV value table over a polar grid")
    _add_common(pt)
    pt.add_argument("--form", choices=("bold", "pair", "sq"), default="bold")
    pt.add_argument("--r-grid", dest="r_grid", type=_parse_grid, default=np.linspace(0.1, 2.0, 8),
                    help="radius grid as LO:HI:N")
    pt.add_argument("--theta-grid", dest="theta_grid", type=_parse_grid,
                    default=np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False),
                    help="angle grid as LO:HI:N")
    pt.add_argument("--out", help="output path (default stdout)")
    return ap


def _eval_point(args, config):
    order = OrderPair(args.mu, args.m)
    if args.form == "bold":
        return cb.bold_j(order, args.z, config)
    if args.form == "pair":
        return cb.j_pair(order, args.z, config)
    return cb.bold_j_sq(order, args.z, config)


def cli_main(argv=None):
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    values = load_config_file(args.config) if getattr(args, "config", None) else {}
    config, schedule = build_runtime(values)

    if args.command == "eval":
        val = _eval_point(args, config)
        print(f"{val.real!r} {val.imag!r}")
        return 0

    if args.command == "table":
        order = OrderPair(args.mu, args.m)
        lines = ["mu_re,mu_im,m,r,theta,value_re,value_im"]
        for r in args.r_grid:
            for th in args.theta_grid:
                z = PolarPoint(float(r), float(th))
                if args.form == "bold":
                    v = cb.bold_j(order, z, config)
                elif args.form == "pair":
                    v = cb.j_pair(order, z, config)
                else:
                    v = cb.bold_j_sq(order, z, config)
                lines.append(
                    f"{args.mu.real!r},{args.mu.imag!r},{args.m},{float(r)!r},"
                    f"{float(th)!r},{v.real!r},{v.imag!r}"
                )
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    # verify
    if args.eps_schedule:
        eps = tuple(float(s) for s in args.eps_schedule.split(","))
        schedule = qd.RegularizationSchedule(eps, schedule.extrapolation_order if schedule else 2)
    reports = run_suites([args.suite], mu=args.mu, m=args.m, tol=args.tol,
                         schedule=schedule, kmax=args.kmax, config=config,
                         quick=args.quick)
    payload = (reports_to_json(reports, with_timing=args.timing)
               if args.format == "json" else reports_to_csv(reports))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    all_ok = all(r.ok for r in reports)
    summary = "PASS" if all_ok else "FAIL"
    print(f"[besselcx] suites={args.suite} threads={thread_count()} result={summary}",
          file=sys.stderr)
    return 0 if all_ok else 1


def main():
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
