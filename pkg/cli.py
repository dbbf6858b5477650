"""
cli.py - Command-line entrypoint: check, render, sweep, oracle, gen.

Exit codes:
  0  certified-stable (oracle: all trials pass)
  1  invalid input or any error
  2  inconclusive
  3  hypotheses violated
Configure via environment variables (or a .env file):
  GITSTAB_JOBS       default worker count for sweep and check
  GITSTAB_LOG_LEVEL  logging level, default WARNING
"""

import argparse
import dataclasses
import logging
import os
import sys
from fractions import Fraction
from multiprocessing import Pool

import pandas as pd
from dotenv import load_dotenv

from errors import FiltrationError, GitStabError
from filtration_model import CERTIFIABLE_CASES, case_classify, validate
from rendering import FORMATS, render
from scenario_gen import ScenarioSpec, make_scenario
from scenario_io import (
    Scenario, build_report, dumps, dumps_report, format_rational, load,
    profile_data, report_to_dict,
)
from suites import run_suite, suite_names
from verdict import CERTIFIED, HYPOTHESES_VIOLATED, INCONCLUSIVE, INVALID, certify, find_thresholds

# Load environment variables from .env file (local dev)
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_CODES = {
    CERTIFIED: 0,
    INVALID: 1,
    INCONCLUSIVE: 2,
    HYPOTHESES_VIOLATED: 3,
}
GEN_KINDS = {"example1": "example1", "worst": "worst_candidate", "random": "random"}
SWEEP_COLUMNS = ["u", "v", "margin", "verdict"]


class UsageError(GitStabError):
    """Bad command-line arguments."""


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1 instead of 2."""

    def error(self, message):
        raise UsageError(message)


# ─── Helpers ──────────────────────────────────────────────────────────────────

def default_jobs() -> int:
    raw = os.getenv("GITSTAB_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring GITSTAB_JOBS=%r, not an integer", raw)
        return 1


def parse_range(text: str, flag: str) -> range:
    """Inclusive "A:B" (or a single "A") as a range of positive integers."""
    try:
        parts = [int(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"{flag} expects A:B, got {text!r}")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise UsageError(f"{flag} expects A:B, got {text!r}")
    low, high = parts
    if high < low or low < 1:
        raise UsageError(f"empty range {flag} {text}")
    return range(low, high + 1)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# ─── Commands ─────────────────────────────────────────────────────────────────

def cmd_check(args) -> int:
    scenario = load(args.scenario)
    doc = build_report(scenario, exact=args.exact, jobs=args.jobs)
    verdict = doc["report"]["verdict"]

    if args.thresholds and verdict != INVALID:
        f, lin = scenario.filtration, scenario.lin
        if case_classify(f.ctx, lin) in CERTIFIABLE_CASES and lin.epsilon > 0:
            report = certify(f, lin, scenario.u, scenario.v)
            report = dataclasses.replace(report, thresholds=find_thresholds(f, lin))
            doc["report"] = report_to_dict(report)

    _emit(dumps_report(doc), args.out)
    return EXIT_CODES[verdict]


def cmd_render(args) -> int:
    if args.format not in FORMATS:
        raise UsageError(f"unknown format {args.format!r}, expected one of {', '.join(FORMATS)}")
    scenario = load(args.scenario)
    problems = validate(scenario.filtration, scenario.lin)
    if problems:
        raise FiltrationError(f"invalid scenario: {problems[0]}")
    xf, vp = profile_data(scenario)
    title = f"u = {scenario.u}, v = {scenario.v}"
    figure = render(xf, vp, args.format, title)
    if args.format == "html":
        if not args.out:
            raise UsageError("--format html needs --out")
        figure.write_html(args.out, include_plotlyjs="cdn")
    else:
        _emit(figure, args.out)
    return 0


def _sweep_point(job) -> tuple:
    """Worker: certify one (u, v) grid point."""
    scenario, u, v = job
    report = certify(scenario.filtration, scenario.lin, u, v)
    margin = "" if report.margin is None else format_rational(report.margin)
    return u, v, margin, report.verdict


def sweep_rows(scenario: Scenario, u_range, v_range, jobs: int = 1) -> pd.DataFrame:
    """One row per (u, v) in grid order; identical for any worker count."""
    grid = [(scenario, u, v) for u in u_range for v in v_range]
    if jobs > 1 and len(grid) > 1:
        p = Pool(min(jobs, len(grid)))
        try:
            rows = p.map(_sweep_point, grid)
        finally:
            p.close()
            p.join()
    else:
        rows = [_sweep_point(job) for job in grid]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def cmd_sweep(args) -> int:
    scenario = load(args.scenario)
    if args.find_thresholds:
        f, lin = scenario.filtration, scenario.lin
        t = find_thresholds(f, lin)
        df = pd.DataFrame(
            [(t.u0, t.v0, t.gotzmann, "verified" if t.verified else "unverified")],
            columns=["u0", "v0", "gotzmann_v0", "status"],
        )
    else:
        if not args.u_range or not args.v_range:
            raise UsageError("sweep needs --u-range and --v-range, or --find-thresholds")
        u_range = parse_range(args.u_range, "--u-range")
        v_range = parse_range(args.v_range, "--v-range")
        df = sweep_rows(scenario, u_range, v_range, jobs=args.jobs)
    _emit(df.to_csv(index=False, lineterminator="\n"), args.out)
    return 0


def cmd_oracle(args) -> int:
    if args.suite not in suite_names():
        raise UsageError(f"unknown suite {args.suite!r}, expected one of {', '.join(suite_names())}")
    result = run_suite(args.suite, args.trials, args.seed)
    print(result.summary())
    return 0 if result.passed else 1


def cmd_gen(args) -> int:
    if args.kind not in GEN_KINDS:
        raise UsageError(f"unknown kind {args.kind!r}, expected one of {', '.join(GEN_KINDS)}")
    spec = ScenarioSpec(
        kind=GEN_KINDS[args.kind],
        g=args.g,
        n=args.n,
        nu=args.nu,
        N=args.N,
        seed=args.seed,
        epsilon=Fraction(args.epsilon) if args.epsilon else None,
    )
    lin, f = make_scenario(spec)
    _emit(dumps(Scenario(filtration=f, lin=lin, u=args.u, v=args.v)), args.out)
    return 0


COMMANDS = {
    "check": cmd_check,
    "render": cmd_render,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "gen": cmd_gen,
}


# ─── Parser ───────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gitstab", description="Exact GIT-stability bounds for one-parameter subgroups.")
    parser.add_argument("--log-level", default=os.getenv("GITSTAB_LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="cmd", required=True)

    check = sub.add_parser("check", help="certify a scenario and write the report")
    check.add_argument("scenario")
    check.add_argument("--out")
    check.add_argument("--exact", action="store_true", help="also compute oracle codimensions")
    check.add_argument("--thresholds", action="store_true", help="add u0, v0(u0) to the report")
    check.add_argument("--jobs", type=int, default=default_jobs())

    rend = sub.add_parser("render", help="draw the profile and virtual profile")
    rend.add_argument("scenario")
    rend.add_argument("--format", default="svg")
    rend.add_argument("--out")

    sweep = sub.add_parser("sweep", help="margins over a (u, v) grid as CSV")
    sweep.add_argument("scenario")
    sweep.add_argument("--u-range")
    sweep.add_argument("--v-range")
    sweep.add_argument("--find-thresholds", action="store_true")
    sweep.add_argument("--jobs", type=int, default=default_jobs())
    sweep.add_argument("--out")

    oracle = sub.add_parser("oracle", help="run a randomized property suite")
    oracle.add_argument("--suite", required=True)
    oracle.add_argument("--trials", type=int, default=500)
    oracle.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("gen", help="write a scenario file")
    gen.add_argument("--kind", required=True)
    gen.add_argument("--g", type=int, default=2)
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument("--nu", type=int, default=5)
    gen.add_argument("--N", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--epsilon", help='rational "p/q"')
    gen.add_argument("--u", type=int, default=3)
    gen.add_argument("--v", type=int, default=5)
    gen.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
            format="%(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.cmd](args)
    except (GitStabError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
