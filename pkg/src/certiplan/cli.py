"""``certiplan run``: certify a goal assignment for a scenario file.

Exit status is 0 when the assignment is certified optimal, 2 when the sample
cap is reached without a certificate and 1 on any error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .certifier import DriverParams, run
from .exceptions import CertiplanError
from .render import render_iteration_svg
from .scenario_io import bundled_scenario_path, load_scenario, write_report

log = logging.getLogger("certiplan")

EXIT_CERTIFIED = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="certiplan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the certification loop on a scenario")
    r.add_argument("--scenario", required=True, help="scenario JSON file, or 'bundled' for the packaged maze")
    r.add_argument("--n-min", type=int, default=1024)
    r.add_argument("--n-max", type=int, default=75000)
    r.add_argument("--alpha", type=float, default=4.0)
    r.add_argument("--zeta", type=float, default=0.1)
    r.add_argument("--eta", type=float, default=0.1)
    r.add_argument("--sampler", choices=["triangular", "sukharev", "random"], default="triangular")
    r.add_argument("--seed", type=int, default=None, help="RNG seed for the random sampler")
    r.add_argument("--report", type=Path, default=None, help="write the JSON report here")
    r.add_argument("--svg-dir", type=Path, default=None, help="write one SVG per iteration into this directory")
    r.add_argument("--no-euclid-floor", action="store_true", help="do not lift lower bounds to straight-line distances")
    r.add_argument("--boundary-as-obstacle", action="store_true", help="treat the workspace walls as obstacles")
    r.add_argument("--intervals", choices=["balanced", "threshold"], default="balanced", help="allowable interval construction")
    r.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the report")
    r.add_argument("-v", "--verbose", action="store_true")
    return p


def _run(args) -> int:
    path = bundled_scenario_path() if args.scenario == "bundled" else Path(args.scenario)
    scenario = load_scenario(path, boundary_is_obstacle=True if args.boundary_as_obstacle else None)
    params = DriverParams(
        n_min=args.n_min,
        n_max=args.n_max,
        alpha=args.alpha,
        zeta=args.zeta,
        eta=args.eta,
        scheme=args.sampler,
        seed=args.seed,
        euclid_floor=not args.no_euclid_floor,
        interval_mode=args.intervals,
    )
    report = run(scenario, params)
    if args.report is not None:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        write_report(report, args.report, include_timing=not args.no_timing)
    if args.svg_dir is not None:
        args.svg_dir.mkdir(parents=True, exist_ok=True)
        for k, rec in enumerate(report.iterations, start=1):
            render_iteration_svg(scenario, rec, args.svg_dir / f"iteration_{k:02d}.svg")
    for k, rec in enumerate(report.iterations, start=1):
        beta = "-" if rec.beta is None else f"{rec.beta:.3f}"
        delta = "-" if rec.delta is None else f"{rec.delta:.3f}"
        print(f"iteration {k}: n={rec.n_actual} D={rec.dispersion_bound:.3f} delta={delta} beta={beta} Q={str(rec.certificate).lower()}")
    if report.certified:
        print(f"certified: goal -> robot {list(report.assignment.task_to_agent)}")
        return EXIT_CERTIFIED
    print("not certified within n_max")
    return EXIT_UNCERTIFIED


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except CertiplanError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
