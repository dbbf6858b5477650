"""
verdict.py - Final bounds and the stability verdict for one 1-PS scenario.

Pipeline: validate -> Ṽ -> X̃ -> profiles -> Δ -> creep -> T bounds -> verdict.
  - certified-stable:     all hypotheses hold, creep holds, and both the
                          closed-form T bound and the direct profile bound
                          sit strictly below the criterion's right-hand side
  - inconclusive:         hypotheses hold but some margin is not positive
  - hypotheses-violated:  Case D/E, γb_i >= 1/2, ε <= 0 or ε above its ceiling
  - invalid:              the scenario data itself is not admissible
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from discrepancy import delta_bounds
from errors import HypothesisError, ModeInapplicableError
from filtration_model import (
    CERTIFIABLE_CASES, HALF, GeometricContext, LinearizationConfig, WeightedFiltration,
    case_classify, regions, slot_weights, strengthened_epsilon_limit, validate,
    validate_linearization,
)
from mult_filtration import build_tilde, gotzmann_v0
from virtual_profile import Tvir_bound, area_Avir, build_virtual, marked_weight
from xtilde_profile import area_A_bound, build_xtilde

logger = logging.getLogger(__name__)

# ─── Verdicts & Modes ─────────────────────────────────────────────────────────

CERTIFIED = "certified-stable"
INCONCLUSIVE = "inconclusive"
HYPOTHESES_VIOLATED = "hypotheses-violated"
INVALID = "invalid"

PLAIN = "plain"
MARKED = "marked"        # strengthened by (1/2 - γb)·r_{N-1}, Case B
UNPOINTED = "unpointed"  # strengthened by 1/2·r_{N-1}, n = 0
CREEP_MODES = (PLAIN, MARKED, UNPOINTED)


# ─── Domain Types ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CreepResult:
    lhs: Fraction
    rhs: Fraction
    mode: str
    z_excess: Fraction      # Σ Z_j r_j - 1

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class TailResult:
    tail: Fraction          # sum of the last g slot weights, minus any correction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.tail <= self.bound


@dataclass(frozen=True)
class StabilityReport:
    u: int
    v: int
    verdict: str
    case_label: str | None = None
    violations: tuple = ()
    epsilon: Fraction | None = None
    epsilon_max: Fraction | None = None
    A_bound: Fraction | None = None
    Avir: Fraction | None = None
    delta: Fraction | None = None           # A - A^vir
    delta_bound: Fraction | None = None
    delta_holds: bool | None = None
    Tvir: Fraction | None = None
    Tvir_case_bound: Fraction | None = None
    T_bound: Fraction | None = None         # closed-form total bound
    T_chain: Fraction | None = None         # creep rhs + marked + terminal + Δ bound
    T_direct: Fraction | None = None        # A + marked points
    rhs: Fraction | None = None
    creep: CreepResult | None = None
    tail: TailResult | None = None
    thresholds: "Thresholds | None" = None

    @property
    def margin(self) -> Fraction | None:
        if self.rhs is None or self.T_bound is None:
            return None
        return self.rhs - self.T_bound

    @property
    def direct_margin(self) -> Fraction | None:
        if self.rhs is None or self.T_direct is None:
            return None
        return self.rhs - self.T_direct


@dataclass(frozen=True)
class Thresholds:
    u0: int
    v0: int                 # v0(u0)
    gotzmann: int           # Gotzmann floor for v at u0, reported separately
    checks: tuple = field(default_factory=tuple)   # (u, v, verdict) witnesses

    @property
    def verified(self) -> bool:
        return all(verdict == CERTIFIED for _, _, verdict in self.checks)


# ─── Creep ────────────────────────────────────────────────────────────────────

def Z_series(f: WeightedFiltration) -> tuple:
    """
    Z_j = z_j before j_RR, z_j + (Σ_{τ<=j} z_τ - (N-g)) at j_RR, 2z_j from j_Cliff on.
    """
    j_rr, _ = regions(f)
    rr_limit = f.ctx.N - f.ctx.g
    out = []
    for j, size in enumerate(f.z):
        if j < j_rr:
            out.append(size)
        elif j == j_rr:
            out.append(size + (f.cumulative(j + 1) - rr_limit))
        else:
            out.append(2 * size)
    return tuple(out)


def _jump_rows(f: WeightedFiltration, i: int) -> list:
    """j(i,0), .., j(i,K_i) with j(i,K_i) = Nbar."""
    col = f.column(i)
    rows = [j for j in range(f.Nbar) if col[j] < col[j + 1]]
    return rows + [f.Nbar]


def creep_lhs(f: WeightedFiltration, lin: LinearizationConfig) -> Fraction:
    """u²v² coefficient of T^vir: half-jump losses plus γB_i at each first jump."""
    total = Fraction(0)
    for i in range(f.q):
        rows = _jump_rows(f, i)
        K = len(rows) - 1
        if K == 0:
            continue
        col = f.column(i)
        total += (Fraction(col[rows[1]], 2) + lin.gamma * f.B[i]) * f.r[rows[0]]
        for ell in range(1, K):
            total += Fraction(col[rows[ell + 1]] - col[rows[ell - 1]], 2) * f.r[rows[ell]]
    return total


def second_to_last_weight(f: WeightedFiltration) -> Fraction:
    """r_{N-1} of the slot list: 0 when z_Nbar > 1, else r_{Nbar-1}."""
    return slot_weights(f)[f.ctx.N - 1]


def _mode_correction(f: WeightedFiltration, lin: LinearizationConfig, mode: str) -> Fraction:
    if mode not in CREEP_MODES:
        raise ModeInapplicableError(f"unknown creep mode {mode!r}")
    if mode == PLAIN:
        return Fraction(0)
    if mode == UNPOINTED:
        if f.ctx.n != 0:
            raise ModeInapplicableError("mode inapplicable: unpointed mode needs n = 0")
        return HALF * second_to_last_weight(f)
    if case_classify(f.ctx, lin) != "B":
        raise ModeInapplicableError("mode inapplicable: marked mode needs Case B")
    if f.q >= f.ctx.n:
        raise ModeInapplicableError("mode inapplicable: marked mode needs q < n")
    return (HALF - lin.gamma_b) * second_to_last_weight(f)


def creep_check(f: WeightedFiltration, lin: LinearizationConfig, mode: str = PLAIN) -> CreepResult:
    correction = _mode_correction(f, lin, mode)
    z_total = sum((Z * r for Z, r in zip(Z_series(f), f.r)), Fraction(0))
    return CreepResult(
        lhs=creep_lhs(f, lin),
        rhs=z_total - correction,
        mode=mode,
        z_excess=z_total - 1,
    )


def creep_mode_for(f: WeightedFiltration, lin: LinearizationConfig) -> str:
    """Strongest creep mode whose side conditions hold."""
    if f.ctx.n == 0:
        return UNPOINTED
    if case_classify(f.ctx, lin) == "B":
        if f.q < f.ctx.n:
            return MARKED
        logger.warning("Case B with q = %d >= n = %d, using plain creep", f.q, f.ctx.n)
    return PLAIN


def tail_bound(f: WeightedFiltration, lin: LinearizationConfig | None = None, mode: str = PLAIN) -> TailResult:
    """
    Sum of the last g slot weights against (g-1)/N; the strengthened modes
    subtract c·r_{N-1} and compare with (g-1-c)/N, which needs g >= 2.
    """
    g, N = f.ctx.g, f.ctx.N
    if g == 0:
        return TailResult(tail=Fraction(0), bound=Fraction(0))
    slots = slot_weights(f)
    tail = sum(slots[max(0, N - g + 1):], Fraction(0))
    if mode == PLAIN:
        return TailResult(tail=tail, bound=Fraction(g - 1, N))

    if g < 2:
        raise ModeInapplicableError("mode inapplicable: strengthened tail needs g >= 2")
    if mode == MARKED:
        if lin is None:
            raise ModeInapplicableError("mode inapplicable: marked tail needs a linearization")
        c = HALF - lin.gamma_b
    elif mode == UNPOINTED:
        c = HALF
    else:
        raise ModeInapplicableError(f"unknown creep mode {mode!r}")
    return TailResult(tail=tail - c * slots[N - 1], bound=(g - 1 - c) / N)


# ─── Case Bounds ──────────────────────────────────────────────────────────────

def _alpha(ctx: GeometricContext, lin: LinearizationConfig) -> Fraction:
    """(g - 1 + γb)/(N+1)."""
    return (ctx.g - 1 + lin.gamma_b) / (ctx.N + 1)


def epsilon_max(ctx: GeometricContext, lin: LinearizationConfig) -> Fraction | None:
    """Largest ε the strengthened argument allows; None in Case A (no ceiling)."""
    case = case_classify(ctx, lin)
    if case == "A":
        return None
    if case == "B":
        return strengthened_epsilon_limit(ctx, lin.gamma_b)
    if case == "C":
        return strengthened_epsilon_limit(ctx, Fraction(0))
    raise HypothesisError("hypotheses violated")


def _terminal_term(f: WeightedFiltration, u: int, v: int) -> Fraction:
    """(duv + dv - g + 1)·v·r_0."""
    ctx = f.ctx
    return (ctx.d * u * v + ctx.d * v - ctx.g + 1) * v * f.r[0]


def tvir_case_bound(f: WeightedFiltration, lin: LinearizationConfig, u: int, v: int) -> Fraction:
    ctx = f.ctx
    case = case_classify(ctx, lin)
    if case == "A":
        leading = 1 + _alpha(ctx, lin) - lin.epsilon
    elif case == "B":
        leading = 1 + (ctx.g - Fraction(3, 2) + lin.gamma_b) / ctx.N
    elif case == "C":
        leading = 1 + (ctx.g - Fraction(3, 2)) / ctx.N
    else:
        raise HypothesisError("hypotheses violated")
    M = marked_weight(f, lin)
    return leading * u * u * v * v + M * (2 * u * v * v + v * v) + _terminal_term(f, u, v)


def T_bound_total(f: WeightedFiltration, lin: LinearizationConfig, u: int, v: int) -> Fraction:
    """(1 + α - ε)u²v² + (n + 7d/2)uv² + (n + 3d)v²."""
    ctx = f.ctx
    if case_classify(ctx, lin) not in CERTIFIABLE_CASES:
        raise HypothesisError("hypotheses violated")
    leading = 1 + _alpha(ctx, lin) - lin.epsilon
    return (
        leading * u * u * v * v
        + (ctx.n + Fraction(7, 2) * ctx.d) * u * v * v
        + (ctx.n + 3 * ctx.d) * v * v
    )


def criterion_rhs(ctx: GeometricContext, lin: LinearizationConfig, u: int, v: int) -> Fraction:
    """(1 + α)m² - ((g-1)/(N+1))m at m = (u+1)v, expanded in u and v."""
    m = (u + 1) * v
    return (1 + _alpha(ctx, lin)) * m * m - Fraction(ctx.g - 1, ctx.N + 1) * m


# ─── Certification ────────────────────────────────────────────────────────────

def hypothesis_problems(ctx: GeometricContext, lin: LinearizationConfig) -> list:
    problems = []
    case = case_classify(ctx, lin)
    if case not in CERTIFIABLE_CASES:
        problems.append(f"Case {case} is excluded")
    if lin.epsilon <= 0:
        problems.append("epsilon must be positive")
    for i, value in enumerate(lin.b):
        if lin.gamma * value >= HALF:
            problems.append(f"γ·b_{i + 1} = {lin.gamma * value} is not below 1/2")
    if case in ("B", "C"):
        ceiling = epsilon_max(ctx, lin)
        if lin.epsilon > ceiling:
            problems.append(f"epsilon {lin.epsilon} exceeds {ceiling}")
    return problems


def certify(f: WeightedFiltration, lin: LinearizationConfig, u: int, v: int, jobs: int = 1) -> StabilityReport:
    problems = [str(x) for x in validate(f, lin)]
    ok, message = validate_linearization(f.ctx, lin)
    if not ok:
        problems.append(message)
    if problems or u < 1 or v < 1:
        if u < 1 or v < 1:
            problems.append(f"u and v must be positive, got u={u}, v={v}")
        return StabilityReport(u=u, v=v, verdict=INVALID, violations=tuple(problems))

    ctx = f.ctx
    case = case_classify(ctx, lin)
    hypotheses = hypothesis_problems(ctx, lin)

    mf = build_tilde(f, u, v)
    xf = build_xtilde(mf, jobs=jobs)
    vp = build_virtual(mf)
    A = area_A_bound(xf)
    Avir = area_Avir(vp)
    delta = delta_bounds(mf)
    Tvir = Tvir_bound(vp, lin)
    M = marked_weight(f, lin)
    T_direct = A + mf.m * mf.m * M
    rhs = criterion_rhs(ctx, lin, u, v)

    mode = creep_mode_for(f, lin)
    creep = creep_check(f, lin, mode)
    tail_mode = mode if ctx.g >= 2 else PLAIN
    tail = tail_bound(f, lin, tail_mode)

    certifiable = case in CERTIFIABLE_CASES
    T_bound = T_bound_total(f, lin, u, v) if certifiable else None
    case_bound = tvir_case_bound(f, lin, u, v) if certifiable else None
    T_chain = (
        creep.rhs * u * u * v * v + M * (2 * u * v * v + v * v) + _terminal_term(f, u, v) + delta.total_bound
    )

    if hypotheses:
        verdict = HYPOTHESES_VIOLATED
    elif creep.holds and T_bound < rhs and T_direct < rhs:
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
    logger.info("certify u=%d v=%d case=%s -> %s", u, v, case, verdict)

    return StabilityReport(
        u=u, v=v, verdict=verdict, case_label=case, violations=tuple(hypotheses),
        epsilon=lin.epsilon,
        epsilon_max=epsilon_max(ctx, lin) if certifiable else None,
        A_bound=A, Avir=Avir, delta=delta.total, delta_bound=delta.total_bound,
        delta_holds=delta.holds, Tvir=Tvir, Tvir_case_bound=case_bound,
        T_bound=T_bound, T_chain=T_chain, T_direct=T_direct, rhs=rhs,
        creep=creep, tail=tail,
    )


# ─── Thresholds ───────────────────────────────────────────────────────────────

def margin_quadratic(ctx: GeometricContext, lin: LinearizationConfig) -> tuple:
    """
    Coefficients (a2, a1, a0) of Q(u) = εu² + (2 + 2α - n - 7d/2)u + (1 + α - n - 3d),
    so that rhs - T_bound = v²·Q(u) - v·(g-1)(u+1)/(N+1).
    """
    alpha = _alpha(ctx, lin)
    return (
        lin.epsilon,
        2 + 2 * alpha - ctx.n - Fraction(7, 2) * ctx.d,
        1 + alpha - ctx.n - 3 * ctx.d,
    )


def threshold_u0(ctx: GeometricContext, lin: LinearizationConfig) -> int:
    """Least u >= 1 past the largest real root of Q."""
    if lin.epsilon <= 0:
        raise HypothesisError("epsilon must be positive")
    u = sympy.symbols("u")
    coeffs = [sympy.Rational(x.numerator, x.denominator) for x in margin_quadratic(ctx, lin)]
    roots = sympy.Poly(coeffs[0] * u**2 + coeffs[1] * u + coeffs[2], u).real_roots()
    if not roots:
        return 1
    return max(1, int(sympy.floor(max(roots))) + 1)


def threshold_v0(ctx: GeometricContext, lin: LinearizationConfig, u: int) -> int:
    """Least v with v·Q(u) > (g-1)(u+1)/(N+1)."""
    a2, a1, a0 = margin_quadratic(ctx, lin)
    Q = a2 * u * u + a1 * u + a0
    if Q <= 0:
        raise HypothesisError(f"u = {u} is below the threshold u0")
    L = Fraction((ctx.g - 1) * (u + 1), ctx.N + 1)
    if L <= 0:
        return 1
    return int(L // Q) + 1


def find_thresholds(f: WeightedFiltration, lin: LinearizationConfig, verify: bool = True) -> Thresholds:
    """u0, v0(u0), the Gotzmann floor at u0, and certify witnesses at u0, u0+5 and 2u0."""
    ctx = f.ctx
    if lin.epsilon <= 0:
        raise HypothesisError("epsilon must be positive")
    if case_classify(ctx, lin) not in CERTIFIABLE_CASES:
        raise HypothesisError("hypotheses violated")

    u0 = threshold_u0(ctx, lin)
    v0 = threshold_v0(ctx, lin, u0)
    checks = []
    if verify:
        for u in (u0, u0 + 5, 2 * u0):
            v = threshold_v0(ctx, lin, u)
            checks.append((u, v, certify(f, lin, u, v).verdict))
    return Thresholds(u0=u0, v0=v0, gotzmann=gotzmann_v0(u0, ctx), checks=tuple(checks))
