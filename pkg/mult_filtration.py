"""
mult_filtration.py - The filtration Ṽ of H0(C, O(m)), m = (u+1)v.

Keeps only the rows where the base locus grows, scales multiplicities by uv
and weights to uv·r_j + v·r_0, and classifies every (row, point) cell into
Cases Zero / I / II / III / IV with the bracketing jump rows s and t.
Row and point indices are 0-based throughout.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from errors import CaseError, FiltrationError
from filtration_model import WeightedFiltration

logger = logging.getLogger(__name__)

# ─── Case Labels ──────────────────────────────────────────────────────────────

ZERO = "Zero"
CASE_I = "I"
CASE_II = "II"
CASE_III = "III"
CASE_IV = "IV"
BRACKETED_CASES = (CASE_II, CASE_III, CASE_IV)


# ─── Domain Types ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MultFiltration:
    base: WeightedFiltration
    u: int
    v: int
    source: tuple       # j_k: base row of each Ṽ row k
    c_tilde: tuple      # c̃[k][i] = uv·c[j_k][i]
    r_tilde: tuple      # r̃_k = uv·r[j_k] + v·r_0

    @property
    def m(self) -> int:
        return (self.u + 1) * self.v

    @property
    def Ntilde(self) -> int:
        return len(self.source) - 1

    @property
    def q(self) -> int:
        return self.base.q

    def r(self, k: int) -> Fraction:
        """Unscaled weight r_{j_k} of Ṽ row k."""
        return self.base.r[self.source[k]]

    def c(self, k: int, i: int) -> int:
        """Unscaled multiplicity c_{j_k, i} of Ṽ row k."""
        return self.base.c[self.source[k]][i]

    def d_tilde(self, k: int) -> int:
        return sum(self.c_tilde[k])

    def jumps_at(self, k: int, i: int) -> bool:
        """True when the multiplicity of Q_i grows between rows k and k+1."""
        if k >= self.Ntilde:
            return False
        return self.c_tilde[k][i] < self.c_tilde[k + 1][i]


@dataclass(frozen=True)
class CellCase:
    kind: str               # Zero, I, II, III or IV
    s: int | None = None    # last jump row at or before k (II-IV)
    t: int | None = None    # next jump row after k, or Ñ (II-IV)


@dataclass(frozen=True)
class JumpTable:
    K: int          # number of jumps of the multiplicity of Q_i
    j: tuple        # j(i, 0..K) in base rows, j(i, K) = Nbar
    k: tuple        # k(i, 0..K) in Ṽ rows, k(i, K) = Ñ


# ─── Gotzmann Bound ───────────────────────────────────────────────────────────

def gotzmann_v0(u: int, ctx) -> int:
    """Least v the multiplication-map lemma allows: (d²(u+1)² - d(u+1))/2 - g + 1."""
    if u < 1:
        logger.warning("gotzmann_v0 called with degenerate u = %d", u)
    dm = ctx.d * (u + 1)
    # dm(dm-1) is even, so the bound is always an integer
    return (dm * dm - dm) // 2 - ctx.g + 1


# ─── Construction ─────────────────────────────────────────────────────────────

def tilde_rows(base: WeightedFiltration) -> tuple:
    """Row 0, every row after which the base locus grows, and the last row."""
    last = base.Nbar
    if last == 0:
        return (0,)
    growing = [j for j in range(1, last) if base.d_row(j) < base.d_row(j + 1)]
    return (0, *growing, last)


def build_tilde(base: WeightedFiltration, u: int, v: int, check_gotzmann: bool = True) -> MultFiltration:
    if u < 1 or v < 1:
        raise FiltrationError(f"u and v must be positive, got u={u}, v={v}")
    floor_v = gotzmann_v0(u, base.ctx)
    if check_gotzmann and v < floor_v:
        logger.warning("v = %d is below the Gotzmann bound %d for u = %d", v, floor_v, u)

    source = tilde_rows(base)
    uv = u * v
    r0 = base.r[0]
    c_tilde = tuple(tuple(uv * x for x in base.c[j]) for j in source)
    r_tilde = tuple(uv * base.r[j] + v * r0 for j in source)
    return MultFiltration(base=base, u=u, v=v, source=source, c_tilde=c_tilde, r_tilde=r_tilde)


# ─── Cases ────────────────────────────────────────────────────────────────────

def case_of(mf: MultFiltration, k: int, i: int) -> CellCase:
    if not 0 <= k < mf.Ntilde:
        raise CaseError("k out of range")
    if not 0 <= i < mf.q:
        raise CaseError("point index out of range")

    if mf.c_tilde[k + 1][i] == 0:
        return CellCase(ZERO)

    jump_here = mf.jumps_at(k, i)
    jump_next = mf.jumps_at(k + 1, i)
    if jump_here and jump_next:
        return CellCase(CASE_I)

    later = [x for x in range(k + 1, mf.Ntilde) if mf.jumps_at(x, i)]
    t = later[0] if later else mf.Ntilde
    if jump_here:
        return CellCase(CASE_IV, s=k, t=t)

    # c̃_{k+1} > 0 without a jump at k, so an earlier jump exists
    s = max(x for x in range(k) if mf.jumps_at(x, i))
    if jump_next:
        return CellCase(CASE_III, s=s, t=k + 1)
    return CellCase(CASE_II, s=s, t=t)


def case_table(mf: MultFiltration) -> dict:
    """{(k, i): CellCase} for every cell of mf."""
    return {(k, i): case_of(mf, k, i) for k in range(mf.Ntilde) for i in range(mf.q)}


def jump_tables(mf: MultFiltration) -> list:
    base = mf.base
    last = base.Nbar
    position = {j: k for k, j in enumerate(mf.source)}
    tables = []
    for i in range(mf.q):
        col = base.column(i)
        j_seq = [j for j in range(last) if col[j] < col[j + 1]]
        K = len(j_seq)
        j_seq.append(last)
        tables.append(JumpTable(K=K, j=tuple(j_seq), k=tuple(position[j] for j in j_seq)))
    return tables
