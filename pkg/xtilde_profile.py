"""
xtilde_profile.py - The filtration X̃ of H0(C, O(m)) and its step-function profile.

Each stage X̃_{k,w} is spanned by monomial spaces (V_s^a V_t^b V_0)^v; its
codimension is bounded by Σ_i x̃(k,w,i), one chosen multiplicity per point.
The staircase of (codim, weight) steps gives the area bound A, compared
against the baseline profile of Ṽ itself (no span improvements).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction

import sympy

from errors import CaseError
from filtration_model import LinearizationConfig
from mult_filtration import (
    BRACKETED_CASES, CASE_I, MultFiltration, ZERO, build_tilde, case_of,
)
from span_calculus import ORACLE_LIMIT, DivisorSeries, span_codim_oracle
from virtual_profile import marked_weight

logger = logging.getLogger(__name__)

# Monomials of an area polynomial in (u, v), highest first
UV_MONOMIALS = ("u2v2", "uv2", "v2", "uv", "u", "v", "1")
FIT_GRID = (1, 2, 3)


# ─── Domain Types ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MonomialSpace:
    s: int          # Ṽ row of the first factor
    t: int          # Ṽ row of the second factor
    a: int          # exponent of V_s
    b: int          # exponent of V_t
    v: int          # outer power
    mult: tuple     # base-locus multiplicity of each Q_i
    weight: Fraction

    @property
    def notation(self) -> str:
        return f"(V_{self.s}^{self.a} V_{self.t}^{self.b} V_0)^{self.v}"

    def as_series(self, level: int) -> DivisorSeries:
        return DivisorSeries(mult=self.mult, level=level, weight=self.weight)


@dataclass(frozen=True)
class XtildeStage:
    k: int
    w: int
    weight: Fraction
    members: tuple              # MonomialSpace, base space first
    contrib: tuple              # x̃(k,w,i) per point
    codim_exact: int | None = None

    @property
    def codim_bound(self) -> int:
        return sum(self.contrib)


@dataclass(frozen=True)
class XtildeFiltration:
    mf: MultFiltration
    stages: tuple
    terminal_codim: int         # uv·d_Nbar
    terminal_weight: Fraction   # v·r_0
    terminal_dim: int           # (d - d_Nbar)uv + dv - g + 1


@dataclass(frozen=True)
class StepProfile:
    steps: tuple                # (codim_start, weight) in stage order
    terminal: tuple             # (codim, weight, dim) of the last stage

    def widths(self) -> list:
        starts = [codim for codim, _ in self.steps] + [self.terminal[0]]
        return [starts[x + 1] - starts[x] for x in range(len(self.steps))]

    def area(self) -> Fraction:
        total = sum((weight * width for (_, weight), width in zip(self.steps, self.widths())), Fraction(0))
        return total + self.terminal[2] * self.terminal[1]


# ─── Monomial Spaces ──────────────────────────────────────────────────────────

def monomial_space(mf: MultFiltration, s: int, t: int, a: int, b: int) -> MonomialSpace:
    v = mf.v
    mult = tuple(v * (a * mf.c(s, i) + b * mf.c(t, i)) for i in range(mf.q))
    weight = v * (a * mf.r(s) + b * mf.r(t)) + v * mf.r(0)
    return MonomialSpace(s=s, t=t, a=a, b=b, v=v, mult=mult, weight=weight)


def stage_weight(mf: MultFiltration, k: int, w: int) -> Fraction:
    """v(u-w)r_k + vw·r_{k+1} + v·r_0."""
    u, v = mf.u, mf.v
    return v * (u - w) * mf.r(k) + v * w * mf.r(k + 1) + v * mf.r(0)


def W_of(mf: MultFiltration, k: int, w: int, i: int, cell=None) -> int:
    """
    Smallest W with (V_s^{u-W} V_t^W V_0)^v no heavier than stage (k, w):
    W = ⌈(u(r_s - r_k) + w(r_k - r_{k+1})) / (r_s - r_t)⌉.
    """
    cell = cell or case_of(mf, k, i)
    if cell.kind not in BRACKETED_CASES:
        raise CaseError("W undefined")
    r_s, r_t = mf.r(cell.s), mf.r(cell.t)
    if r_s == r_t:
        raise CaseError("degenerate bracket")
    numerator = mf.u * (r_s - mf.r(k)) + w * (mf.r(k) - mf.r(k + 1))
    return math.ceil(numerator / (r_s - r_t))


# ─── X̃ Construction ───────────────────────────────────────────────────────────

def contribution(mf: MultFiltration, k: int, w: int, i: int, cell=None) -> int:
    """
    x̃(k,w,i): multiplicity of Q_i in the member chosen for point i.
    Valid for 0 <= w <= u; w = u agrees with x̃(k+1,0,i).
    """
    cell = cell or case_of(mf, k, i)
    u, v = mf.u, mf.v
    if cell.kind == ZERO:
        return 0
    if cell.kind == CASE_I:
        return v * ((u - w) * mf.c(k, i) + w * mf.c(k + 1, i))
    W = W_of(mf, k, w, i, cell)
    return v * ((u - W) * mf.c(cell.s, i) + W * mf.c(cell.t, i))


def _dedupe(spaces) -> tuple:
    seen, out = set(), []
    for space in spaces:
        key = (space.s, space.t, space.a, space.b)
        if key not in seen:
            seen.add(key)
            out.append(space)
    return tuple(out)


def _build_stage(mf: MultFiltration, k: int, w: int, cells: list, exact: bool) -> XtildeStage:
    u = mf.u
    base_space = monomial_space(mf, k, k + 1, u - w, w)
    members = [base_space]
    contrib = []
    for i, cell in enumerate(cells):
        if cell.kind in BRACKETED_CASES:
            W = W_of(mf, k, w, i, cell)
            members.append(monomial_space(mf, cell.s, cell.t, u - W, W))
        contrib.append(contribution(mf, k, w, i, cell))

    members = _dedupe(members)
    codim_exact = None
    if exact and mf.q:
        if len(members) <= ORACLE_LIMIT:
            codim_exact = span_codim_oracle([space.as_series(mf.m) for space in members])
        else:
            logger.warning("stage (%d,%d) has %d members, oracle skipped", k, w, len(members))
    return XtildeStage(
        k=k, w=w, weight=stage_weight(mf, k, w), members=members,
        contrib=tuple(contrib), codim_exact=codim_exact,
    )


def _build_row(mf: MultFiltration, k: int, exact: bool) -> list:
    cells = [case_of(mf, k, i) for i in range(mf.q)]
    return [_build_stage(mf, k, w, cells, exact) for w in range(mf.u)]


def build_xtilde(mf: MultFiltration, exact: bool = False, jobs: int = 1) -> XtildeFiltration:
    """
    All Ñ·u stages X̃_{k,w} in lexicographic order plus the terminal stage Ṽ_Ñ.
    exact=True also computes each stage's span codimension with the oracle.
    """
    rows = {}
    if jobs > 1 and mf.Ntilde > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = {executor.submit(_build_row, mf, k, exact): k for k in range(mf.Ntilde)}
            for future in as_completed(futures):
                rows[futures[future]] = future.result()
    else:
        for k in range(mf.Ntilde):
            rows[k] = _build_row(mf, k, exact)

    stages = tuple(stage for k in sorted(rows) for stage in rows[k])
    base, u, v = mf.base, mf.u, mf.v
    d_last = base.d_row(base.Nbar)
    return XtildeFiltration(
        mf=mf,
        stages=stages,
        terminal_codim=u * v * d_last,
        terminal_weight=v * base.r[0],
        terminal_dim=(base.ctx.d - d_last) * u * v + base.ctx.d * v - base.ctx.g + 1,
    )


# ─── Profiles & Areas ─────────────────────────────────────────────────────────

def xtilde_step_profile(xf: XtildeFiltration) -> StepProfile:
    steps = tuple((stage.codim_bound, stage.weight) for stage in xf.stages)
    return StepProfile(steps=steps, terminal=(xf.terminal_codim, xf.terminal_weight, xf.terminal_dim))


def area_A_bound(xf: XtildeFiltration) -> Fraction:
    """Area under the X̃ staircase plus the terminal rectangle."""
    return xtilde_step_profile(xf).area()


def baseline_profile(mf: MultFiltration) -> StepProfile:
    """Profile of the refinement (V_k^{u-w} V_{k+1}^w V_0)^v with no span improvements."""
    u, v = mf.u, mf.v
    steps = []
    for k in range(mf.Ntilde):
        lo = mf.base.d_row(mf.source[k])
        hi = mf.base.d_row(mf.source[k + 1])
        for w in range(u):
            steps.append((v * (u - w) * lo + v * w * hi, stage_weight(mf, k, w)))

    base = mf.base
    d_last = base.d_row(base.Nbar)
    terminal = (
        u * v * d_last,
        v * base.r[0],
        (base.ctx.d - d_last) * u * v + base.ctx.d * v - base.ctx.g + 1,
    )
    return StepProfile(steps=tuple(steps), terminal=terminal)


def uv_coefficients(area_of) -> dict:
    """
    Exact coefficients of an area that is a polynomial in (u, v) over the
    monomials u²v², uv², v², uv, u, v, 1, recovered from its values on a 3×3
    grid. Raises CaseError when the values fit no such polynomial.
    """
    u, v = sympy.symbols("u v")
    basis = (u**2 * v**2, u * v**2, v**2, u * v, u, v, sympy.Integer(1))
    rows, values = [], []
    for uu in FIT_GRID:
        for vv in FIT_GRID:
            rows.append([term.subs({u: uu, v: vv}) for term in basis])
            value = Fraction(area_of(uu, vv))
            values.append(sympy.Rational(value.numerator, value.denominator))

    try:
        solution, params = sympy.Matrix(rows).gauss_jordan_solve(sympy.Matrix(values))
    except ValueError as e:
        raise CaseError(f"area is not a polynomial in u²v², uv², v², uv, u, v, 1: {e}")
    if params.shape[0] != 0:
        raise CaseError("area polynomial is underdetermined on the fitting grid")
    return {name: Fraction(int(x.p), int(x.q)) for name, x in zip(UV_MONOMIALS, solution)}


def baseline_area(base, u: int, v: int) -> Fraction:
    return baseline_profile(build_tilde(base, u, v, check_gotzmann=False)).area()


def baseline_leading_coefficient(base) -> Fraction:
    """u²v² coefficient of the baseline area."""
    return uv_coefficients(lambda u, v: baseline_area(base, u, v))["u2v2"]


def baseline_T_area(base, lin: LinearizationConfig, u: int, v: int) -> Fraction:
    """Baseline area plus the marked-point term m²·Σ_i γ·B_i·r_{j(i,0)}."""
    m = (u + 1) * v
    return baseline_area(base, u, v) + m * m * marked_weight(base, lin)


def baseline_T_leading_coefficient(base, lin: LinearizationConfig) -> Fraction:
    return uv_coefficients(lambda u, v: baseline_T_area(base, lin, u, v))["u2v2"]
