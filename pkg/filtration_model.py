"""
filtration_model.py - Combinatorial data of a 1-PS acting on an embedded pointed curve.

Holds the context (g, d, N, n, q), the linearization (γ, b, ε) and the
weighted filtration (z, r, c, B), and checks them:
  - weight normalization from raw integer 1-PS weights
  - admissibility (Riemann-Roch / Clifford region bounds)
  - region boundaries j_RR, j_Cliff
  - the five-way parameter split A-E
All arithmetic is exact (fractions.Fraction); no floats anywhere.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from errors import FiltrationError

logger = logging.getLogger(__name__)

# ─── Labels ───────────────────────────────────────────────────────────────────

CASES = ("A", "B", "C", "D", "E")
CERTIFIABLE_CASES = ("A", "B", "C")
HALF = Fraction(1, 2)


# ─── Domain Types ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GeometricContext:
    g: int                  # genus
    d: int                  # degree of O(1)
    N: int                  # projective dimension, N+1 = dim H0(C, O(1))
    n: int                  # number of marked points
    q: int                  # number of base-locus support points Q_i
    complete: bool = True   # complete nonspecial linear system: N+1 = d-g+1
    h1: int = 0             # h1(C, O(1)) used by the Clifford bound

    def hilbert_polynomial(self, t: int) -> int:
        """P(t) = dt - g + 1."""
        return self.d * t - self.g + 1


@dataclass(frozen=True)
class LinearizationConfig:
    gamma: Fraction                 # γ
    b: tuple                        # linearizing weights b_1..b_n
    epsilon: Fraction               # ε > 0
    nu: int | None = None           # ν, when γ comes from the moduli setup
    a: tuple | None = None          # weights 𝒜 = (a_1..a_n)

    @property
    def b_total(self) -> Fraction:
        return sum(self.b, Fraction(0))

    @property
    def gamma_b(self) -> Fraction:
        return self.gamma * self.b_total


@dataclass(frozen=True)
class WeightedFiltration:
    ctx: GeometricContext
    z: tuple        # stage sizes z_0..z_Nbar
    r: tuple        # stage weights r_0..r_Nbar, strictly decreasing to 0
    c: tuple        # c[j][i]: multiplicity of Q_i in the base locus of V_j
    B: tuple        # B_i: linearizing weight of the marked point at Q_i, or 0

    @property
    def Nbar(self) -> int:
        return len(self.z) - 1

    @property
    def q(self) -> int:
        return len(self.B)

    def d_row(self, j: int) -> int:
        """Degree d_j of the base locus of V_j."""
        return sum(self.c[j])

    def column(self, i: int) -> tuple:
        return tuple(row[i] for row in self.c)

    def cumulative(self, j: int) -> int:
        """Σ_{τ<j} z_τ, the codimension of V_j."""
        return sum(self.z[:j])


@dataclass(frozen=True)
class Violation:
    row: int | None     # offending row index j, None for global checks
    message: str

    def __str__(self) -> str:
        return self.message if self.row is None else f"row {self.row}: {self.message}"


# ─── Weight Normalization ─────────────────────────────────────────────────────

def normalize_weights(s) -> tuple:
    """
    Turn raw 1-PS weights s_0 <= ... <= s_N (summing to zero) into the
    normalized weights r_j = (s_{N-j} - s_0) / ((N+1)|s_0|).
    """
    s = [int(x) for x in s]
    if not s or all(x == 0 for x in s):
        raise FiltrationError("trivial 1-PS")
    if sum(s) != 0:
        raise FiltrationError("not special-linear")
    if any(s[j] > s[j + 1] for j in range(len(s) - 1)):
        raise FiltrationError("1-PS weights must be listed in nondecreasing order")

    size = len(s)
    N = size - 1
    scale = size * abs(s[0])
    return tuple(Fraction(s[N - j] - s[0], scale) for j in range(size))


def merge_stages(s) -> tuple:
    """Normalize raw weights and merge equal-weight slots into stages (z, r)."""
    slots = normalize_weights(s)
    z, r = [], []
    for weight in slots:
        if r and r[-1] == weight:
            z[-1] += 1
        else:
            z.append(1)
            r.append(weight)
    return tuple(z), tuple(r)


def slot_weights(f: WeightedFiltration) -> tuple:
    """Weights of the N+1 basis slots, stage weights repeated z_j times."""
    out = []
    for size, weight in zip(f.z, f.r):
        out.extend([weight] * size)
    return tuple(out)


# ─── Validation ───────────────────────────────────────────────────────────────

def _validate_context(ctx: GeometricContext) -> list:
    problems = []
    if ctx.g < 0 or ctx.n < 0 or ctx.q < 0:
        problems.append(Violation(None, "g, n and q must be nonnegative"))
    if ctx.d <= 0:
        problems.append(Violation(None, "degree d must be positive"))
    if ctx.complete and ctx.N + 1 != ctx.d - ctx.g + 1:
        problems.append(Violation(None, f"N+1 = {ctx.N + 1} but d-g+1 = {ctx.d - ctx.g + 1}"))
    if ctx.N < 1:
        problems.append(Violation(None, "N must be at least 1"))
    if ctx.q > ctx.d:
        problems.append(Violation(None, f"q = {ctx.q} exceeds d = {ctx.d}"))
    return problems


def _validate_shape(f: WeightedFiltration) -> list:
    problems = []
    rows = len(f.z)
    if rows == 0:
        return [Violation(None, "filtration has no stages")]
    if len(f.r) != rows or len(f.c) != rows:
        problems.append(Violation(None, "z, r and c must have the same number of rows"))
    if f.ctx.q != len(f.B):
        problems.append(Violation(None, f"context q = {f.ctx.q} but {len(f.B)} B entries"))
    for j, row in enumerate(f.c):
        if len(row) != len(f.B):
            problems.append(Violation(j, f"expected {len(f.B)} multiplicities, got {len(row)}"))
    return problems


def validate(f: WeightedFiltration, lin: LinearizationConfig | None = None) -> list:
    """
    Every violated invariant of f, with the offending row index.
    The B_i membership check needs the linearization and is skipped without it.
    """
    problems = _validate_context(f.ctx) + _validate_shape(f)
    if problems:
        return problems

    ctx = f.ctx
    # Sizes and weights
    for j, size in enumerate(f.z):
        if size <= 0:
            problems.append(Violation(j, f"stage size {size} is not positive"))
    if sum(f.z) != ctx.N + 1:
        problems.append(Violation(None, f"stage sizes sum to {sum(f.z)}, expected N+1 = {ctx.N + 1}"))
    for j in range(f.Nbar):
        if f.r[j] <= f.r[j + 1]:
            problems.append(Violation(j + 1, "weights not strictly decreasing"))
    if f.r[-1] != 0:
        problems.append(Violation(f.Nbar, "last weight must be 0"))
    total = sum((size * weight for size, weight in zip(f.z, f.r)), Fraction(0))
    if total != 1:
        problems.append(Violation(None, f"Σ z_j r_j = {total}, expected 1"))

    # Multiplicities
    if any(x != 0 for x in f.c[0]):
        problems.append(Violation(0, "row 0 of c must be zero"))
    for j, row in enumerate(f.c):
        if any(x < 0 for x in row):
            problems.append(Violation(j, "negative multiplicity"))
        if j > 0 and any(row[i] < f.c[j - 1][i] for i in range(len(row))):
            problems.append(Violation(j, "multiplicity column decreases"))

    # Riemann-Roch / Clifford region bounds
    rr_limit = ctx.N - ctx.g
    for j in range(len(f.z)):
        codim = f.cumulative(j)
        codeg = f.d_row(j)
        if codim <= rr_limit:
            if codeg > codim:
                problems.append(Violation(j, f"Riemann-Roch bound: codegree {codeg} > codim {codim}"))
        else:
            cap = 2 * codim - rr_limit - ctx.h1
            if codeg > cap:
                problems.append(Violation(j, f"Clifford bound: codegree {codeg} > {cap}"))
    if f.d_row(f.Nbar) > ctx.d:
        problems.append(Violation(f.Nbar, f"base locus degree {f.d_row(f.Nbar)} exceeds d = {ctx.d}"))

    # Marked-point links
    if lin is not None:
        available = Counter(Fraction(x) for x in lin.b)
        used = Counter(Fraction(x) for x in f.B if x != 0)
        for value, count in used.items():
            if count > available.get(value, 0):
                problems.append(Violation(None, f"B value {value} is not an unused linearizing weight"))
    for i, value in enumerate(f.B):
        if value < 0 or value > 1:
            problems.append(Violation(None, f"B_{i + 1} = {value} outside [0, 1]"))

    return problems


def validate_linearization(ctx: GeometricContext, lin: LinearizationConfig) -> tuple[bool, str]:
    """
    Structural check of the linearization against the context; the
    stability hypotheses on γb_i and ε are checked by the verdict.
    Returns (is_valid: bool, message: str)
    """
    if len(lin.b) != ctx.n:
        return False, f"expected {ctx.n} linearizing weights, got {len(lin.b)}"
    for i, value in enumerate(lin.b):
        if value < 0 or value > 1:
            return False, f"b_{i + 1} = {value} outside [0, 1]"
    if lin.nu is not None and lin.gamma != Fraction(lin.nu, 2 * lin.nu - 1):
        return False, f"gamma {lin.gamma} does not match nu = {lin.nu}"
    return True, "linearization ok"


# ─── Regions & Cases ──────────────────────────────────────────────────────────

def regions(f: WeightedFiltration) -> tuple[int, int]:
    """
    (j_RR, j_Cliff): the last row whose codimension lies in the Riemann-Roch
    region, and the row after it. j_RR is -1 when even row 0 is outside.
    """
    rr_limit = f.ctx.N - f.ctx.g
    j_rr = -1
    for j in range(len(f.z)):
        if f.cumulative(j) <= rr_limit:
            j_rr = j
    return j_rr, j_rr + 1


def tail_threshold(ctx: GeometricContext, lin: LinearizationConfig) -> Fraction:
    """(g-1)/N + ε(N+1), the quantity the A/B/E split compares γb against."""
    if ctx.N == 0:
        raise FiltrationError("degenerate projective space")
    return Fraction(ctx.g - 1, ctx.N) + lin.epsilon * (ctx.N + 1)


def case_classify(ctx: GeometricContext, lin: LinearizationConfig) -> str:
    if ctx.N == 0:
        raise FiltrationError("degenerate projective space")
    if ctx.n == 0:
        return "C" if ctx.N >= 2 * ctx.g - 2 else "D"

    threshold = tail_threshold(ctx, lin)
    if lin.gamma_b >= threshold:
        return "A"
    return "B" if threshold < HALF else "E"


def strengthened_epsilon_limit(ctx: GeometricContext, gamma_b: Fraction) -> Fraction:
    """(N - 2g + 3 - 2γb) / (2N(N+1)); pass γb = 0 for the unpointed case."""
    N = ctx.N
    return (Fraction(N - 2 * ctx.g + 3) - 2 * gamma_b) / (2 * N * (N + 1))


def default_epsilon(ctx: GeometricContext, gamma_b: Fraction) -> Fraction:
    """
    A positive ε that keeps the context in its most favourable case:
    half of the largest ε for which the defining inequality (and, in the
    strengthened cases, the ε ceiling) still holds.
    """
    N, g = ctx.N, ctx.g
    if N == 0:
        raise FiltrationError("degenerate projective space")
    fallback = Fraction(1, 2 * N * (N + 1))
    floor_term = Fraction(g - 1, N)

    if ctx.n == 0:
        limit = strengthened_epsilon_limit(ctx, Fraction(0))
        return limit / 2 if limit > 0 else fallback
    if gamma_b > floor_term:
        # Case A: γb >= (g-1)/N + ε(N+1)
        return (gamma_b - floor_term) / (N + 1) / 2
    candidates = [
        (HALF - floor_term) / (N + 1),
        strengthened_epsilon_limit(ctx, gamma_b),
    ]
    if all(x > 0 for x in candidates):
        return min(candidates) / 2
    return fallback


# ─── Moduli Setup ─────────────────────────────────────────────────────────────

def moduli_context(g: int, n: int, a_weights, nu: int, b=None, epsilon=None, q: int = 0):
    """
    Context and linearization of the weighted pointed moduli setup:
    d = ν(2g-2+a), N+1 = d-g+1, γ = ν/(2ν-1).
    b defaults to b_i = a_i(ν-1)/ν; ε defaults to default_epsilon.
    """
    a_weights = tuple(Fraction(x) for x in a_weights)
    if len(a_weights) != n:
        raise FiltrationError(f"expected {n} point weights, got {len(a_weights)}")
    if nu < 1:
        raise FiltrationError("nu must be a positive integer")
    a_total = sum(a_weights, Fraction(0))
    if 2 * g - 2 + a_total <= 0:
        raise FiltrationError("unstable weight data")
    degree = nu * (2 * g - 2 + a_total)
    if degree.denominator != 1:
        raise FiltrationError(f"degree ν(2g-2+a) = {degree} is not an integer")

    d = int(degree)
    ctx = GeometricContext(g=g, d=d, N=d - g, n=n, q=q)
    gamma = Fraction(nu, 2 * nu - 1)
    if b is None:
        b = tuple(x * (nu - 1) / nu for x in a_weights)
    b = tuple(Fraction(x) for x in b)
    if epsilon is None:
        epsilon = default_epsilon(ctx, gamma * sum(b, Fraction(0)))
    lin = LinearizationConfig(gamma=gamma, b=b, epsilon=Fraction(epsilon), nu=nu, a=a_weights)
    logger.debug("moduli context g=%d n=%d nu=%d -> d=%d N=%d", g, n, nu, d, ctx.N)
    return ctx, lin
