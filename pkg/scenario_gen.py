"""
scenario_gen.py - Named scenarios and seeded random admissible filtrations.

  - example1:         three marked points with linearly decreasing weights
  - worst_candidate:  one base point, complete sublinear series, linear weights
  - random:           rejection-sampled admissible filtration from a seed
"""

import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from errors import FiltrationError, GenerationError
from filtration_model import (
    HALF, GeometricContext, LinearizationConfig, WeightedFiltration, default_epsilon,
    moduli_context, validate,
)

logger = logging.getLogger(__name__)

KINDS = ("example1", "worst_candidate", "random")
WEIGHT_CEILING = 10**4      # raw weights are drawn from 1..WEIGHT_CEILING
MAX_STAGES = 8
MAX_STEP = 3                # largest multiplicity increment per row
MAX_RETRIES = 100


# ─── Named Scenarios ──────────────────────────────────────────────────────────

def example1(ctx: GeometricContext, lin: LinearizationConfig) -> WeightedFiltration:
    """Three marked points losing weight 1/2, 1/3, 1/6 in turn."""
    if ctx.n < 3:
        raise GenerationError(f"invalid params: example1 needs n >= 3, got n = {ctx.n}")
    if ctx.N < 3:
        raise GenerationError(f"invalid params: example1 needs N >= 3, got N = {ctx.N}")
    return WeightedFiltration(
        ctx=dataclasses.replace(ctx, q=3),
        z=(1, 1, 1, ctx.N - 2),
        r=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 6), Fraction(0)),
        c=((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)),
        B=tuple(Fraction(x) for x in lin.b[:3]),
    )


def worst_candidate(ctx: GeometricContext, lin: LinearizationConfig) -> WeightedFiltration:
    """
    Single base point at the marked point of largest b_i, one slot per
    stage, multiplicity j at row j and weights 2(N-j)/(N(N+1)).
    """
    if ctx.n < 1:
        raise GenerationError("invalid params: worst_candidate needs a marked point")
    N = ctx.N
    return WeightedFiltration(
        ctx=dataclasses.replace(ctx, q=1),
        z=(1,) * (N + 1),
        r=tuple(Fraction(2 * (N - j), N * (N + 1)) for j in range(N + 1)),
        c=tuple((j,) for j in range(N + 1)),
        B=(max(Fraction(x) for x in lin.b),),
    )


# ─── Random Scenarios ─────────────────────────────────────────────────────────

def _row_cap(ctx: GeometricContext, codim: int) -> int:
    """Largest codegree allowed at a row of codimension `codim`."""
    rr_limit = ctx.N - ctx.g
    if codim <= rr_limit:
        cap = codim
    else:
        cap = 2 * codim - rr_limit - ctx.h1
    return min(cap, ctx.d)


def _draw_sizes(rng: np.random.Generator, total: int) -> list:
    """A composition of `total` into 2..MAX_STAGES positive parts."""
    parts = int(rng.integers(2, min(total, MAX_STAGES) + 1))
    cuts = sorted(int(x) for x in rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    bounds = [0, *cuts, total]
    return [bounds[x + 1] - bounds[x] for x in range(parts)]


def _draw_weights(rng: np.random.Generator, z: list) -> tuple:
    """Distinct raw weights, decreasing to 0, rescaled so Σ z_j r_j = 1."""
    raw = sorted((int(x) + 1 for x in rng.choice(WEIGHT_CEILING, size=len(z) - 1, replace=False)), reverse=True)
    raw.append(0)
    scale = sum(size * x for size, x in zip(z, raw))
    return tuple(Fraction(x, scale) for x in raw)


def _draw_multiplicities(rng: np.random.Generator, ctx: GeometricContext, z: list, q: int) -> tuple:
    rows = [[0] * q]
    codim = 0
    for j in range(1, len(z)):
        codim += z[j - 1]
        row = list(rows[-1])
        budget = _row_cap(ctx, codim) - sum(row)
        for i in range(q):
            step = min(int(rng.integers(0, MAX_STEP + 1)), max(budget, 0))
            row[i] += step
            budget -= step
        rows.append(row)
    return tuple(tuple(row) for row in rows)


def _draw_links(rng: np.random.Generator, lin: LinearizationConfig, q: int) -> tuple:
    """B_i: an unused b_k with γb_k <= 1/2 for about half the points, else 0."""
    pool = [Fraction(x) for x in lin.b if lin.gamma * Fraction(x) <= HALF]
    out = []
    for _ in range(q):
        if pool and rng.random() < 0.5:
            out.append(pool.pop(int(rng.integers(0, len(pool)))))
        else:
            out.append(Fraction(0))
    return tuple(out)


def random_admissible(ctx: GeometricContext, lin: LinearizationConfig, seed: int, q: int | None = None) -> WeightedFiltration:
    """
    Seeded random admissible filtration of ctx. Rejection-samples until
    validate passes; raises GenerationError after MAX_RETRIES draws.
    """
    rng = np.random.default_rng(seed)
    if ctx.N < 1:
        raise GenerationError("invalid params: N must be at least 1")
    for attempt in range(MAX_RETRIES):
        points = int(rng.integers(0, min(ctx.d, 4) + 1)) if q is None else q
        sized = dataclasses.replace(ctx, q=points)
        z = _draw_sizes(rng, ctx.N + 1)
        f = WeightedFiltration(
            ctx=sized,
            z=tuple(z),
            r=_draw_weights(rng, z),
            c=_draw_multiplicities(rng, sized, z, points),
            B=_draw_links(rng, lin, points),
        )
        problems = validate(f, lin)
        if not problems:
            return f
        logger.debug("seed %d attempt %d rejected: %s", seed, attempt, problems[0])
    raise GenerationError("generation failed")


def random_context(seed: int) -> tuple[GeometricContext, LinearizationConfig]:
    """A small moduli setup (g <= 3, n <= 3, unit point weights) drawn from a seed."""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        g = int(rng.integers(0, 4))
        n = int(rng.integers(0, 4))
        nu = int(rng.integers(2, 5))
        try:
            ctx, lin = moduli_context(g, n, (1,) * n, nu)
        except FiltrationError:
            continue
        if ctx.N >= 2:
            return ctx, lin
    raise GenerationError("generation failed")


# ─── Scenario Specs ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ScenarioSpec:
    kind: str                   # example1, worst_candidate or random
    g: int = 2
    n: int = 3
    nu: int = 5
    a: tuple | None = None      # point weights, all 1 by default
    N: int | None = None        # pin N directly instead of deriving it from ν
    seed: int = 0               # random kind only
    epsilon: Fraction | None = None


def direct_context(g: int, N: int, n: int, nu: int, epsilon=None) -> tuple[GeometricContext, LinearizationConfig]:
    """Complete nonspecial context with given N; b_i = (ν-1)/ν and γ = ν/(2ν-1)."""
    if N < 1 or g < 0 or n < 0 or nu < 1:
        raise GenerationError(f"invalid params: g={g} N={N} n={n} nu={nu}")
    ctx = GeometricContext(g=g, d=N + g, N=N, n=n, q=0)
    gamma = Fraction(nu, 2 * nu - 1)
    b = (Fraction(nu - 1, nu),) * n
    if epsilon is None:
        epsilon = default_epsilon(ctx, gamma * sum(b, Fraction(0)))
    return ctx, LinearizationConfig(gamma=gamma, b=b, epsilon=Fraction(epsilon), nu=nu)


def make_scenario(spec: ScenarioSpec) -> tuple[LinearizationConfig, WeightedFiltration]:
    """Deterministic: the same spec always yields the same filtration."""
    if spec.kind not in KINDS:
        raise GenerationError(f"invalid params: unknown kind {spec.kind!r}")

    if spec.kind == "random":
        ctx, lin = random_context(spec.seed)
        return lin, random_admissible(ctx, lin, spec.seed)

    if spec.N is not None:
        ctx, lin = direct_context(spec.g, spec.N, spec.n, spec.nu, spec.epsilon)
    else:
        a = spec.a if spec.a is not None else (1,) * spec.n
        try:
            ctx, lin = moduli_context(spec.g, spec.n, a, spec.nu, epsilon=spec.epsilon)
        except FiltrationError as e:
            raise GenerationError(f"invalid params: {e}")
    builder = example1 if spec.kind == "example1" else worst_candidate
    return lin, builder(ctx, lin)
