"""
suites.py - Randomized checks of the bound chain, run by `gitstab oracle`.

Each suite draws `trials` seeded instances and records every counterexample;
the smallest one is reported.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from discrepancy import delta_bounds, staircase_count, weighted_staircase_sum
from errors import GenerationError
from mult_filtration import build_tilde
from scenario_gen import random_admissible, random_context
from span_calculus import DivisorSeries, span_codim_oracle, span_codim_trace
from verdict import creep_check, tail_bound

logger = logging.getLogger(__name__)

MAX_ENTRY = 3
MAX_U = 40
MAX_DENOMINATOR = 60


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    failures: int
    example: str | None = None      # smallest failing datum

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = f"{self.name}: {status} ({self.trials} trials, {self.failures} failures)"
        return line if self.example is None else f"{line}\n  smallest counterexample: {self.example}"


# ─── Trials ───────────────────────────────────────────────────────────────────
# Each trial returns None on success or (size, description) on failure.

def _spans_trial(rng: np.random.Generator):
    q = int(rng.integers(1, 7))
    rows = rng.integers(0, MAX_ENTRY + 1, size=(q, q))
    for i in range(q):
        rows[i, i] = rows[:, i].min()
    series = [DivisorSeries(mult=tuple(int(x) for x in row), level=1) for row in rows]
    trace = span_codim_trace(series)
    oracle = span_codim_oracle(series)
    if trace != oracle:
        return q, f"mult={[s.mult for s in series]} trace={trace} oracle={oracle}"
    return None


def _random_fraction(rng: np.random.Generator, low: int, high: int) -> Fraction:
    """Rational in [low, high)."""
    denominator = int(rng.integers(1, MAX_DENOMINATOR + 1))
    return Fraction(int(rng.integers(low * denominator, high * denominator)), denominator)


def _identities_trial(rng: np.random.Generator):
    zeta = _random_fraction(rng, 0, 1)
    xi = _random_fraction(rng, 0, 1)
    u = int(rng.integers(1, MAX_U + 1))
    count = staircase_count(u, zeta, xi)
    weighted = weighted_staircase_sum(u, zeta, xi)
    if count.brute != count.corrected or weighted.brute != weighted.corrected:
        return u, f"u={u} zeta={zeta} xi={xi} count={count} weighted={weighted}"
    return None


def _random_filtration(rng: np.random.Generator):
    seed = int(rng.integers(0, 2**32))
    ctx, lin = random_context(seed)
    return lin, random_admissible(ctx, lin, seed)


def _creep_trial(rng: np.random.Generator):
    lin, f = _random_filtration(rng)
    result = creep_check(f, lin)
    if not result.holds:
        return f.ctx.N, f"filtration={f} lhs={result.lhs} rhs={result.rhs}"
    return None


def _tail_trial(rng: np.random.Generator):
    lin, f = _random_filtration(rng)
    result = tail_bound(f, lin)
    if not result.holds:
        return f.ctx.N, f"filtration={f} tail={result.tail} bound={result.bound}"
    return None


def _delta_trial(rng: np.random.Generator):
    lin, f = _random_filtration(rng)
    u = int(rng.integers(3, 16))
    v = int(rng.integers(5, 21))
    report = delta_bounds(build_tilde(f, u, v, check_gotzmann=False))
    if not report.holds:
        return f.ctx.N * u, f"filtration={f} u={u} v={v} delta={report.total} bound={report.total_bound}"
    return None


SUITES = {
    "spans": _spans_trial,
    "identities": _identities_trial,
    "creep": _creep_trial,
    "delta": _delta_trial,
    "tail": _tail_trial,
}


# ─── Runner ───────────────────────────────────────────────────────────────────

def run_suite(name: str, trials: int, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise GenerationError(f"invalid params: unknown suite {name!r}")
    if trials < 1:
        raise GenerationError("invalid params: trials must be positive")

    rng = np.random.default_rng(seed)
    trial = SUITES[name]
    failures = []
    for _ in range(trials):
        outcome = trial(rng)
        if outcome is not None:
            failures.append(outcome)

    example = None
    if failures:
        example = min(failures, key=lambda item: (item[0], len(item[1])))[1]
        logger.warning("suite %s: %d of %d trials failed", name, len(failures), trials)
    return SuiteResult(name=name, trials=trials, failures=len(failures), example=example)


def suite_names() -> list:
    return sorted(SUITES)

