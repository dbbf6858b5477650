"""
discrepancy.py - How far the true profile area A sits above the virtual area A^vir.

Per cell (k, i) the staircase exponent is W(w) = ⌈uξ + wζ⌉. The two
ceiling sums Σ ΔW and Σ w·ΔW give A_{k,i} exactly; their closed forms are
checked against direct enumeration and the per-cell, per-point and total
bounds on Δ = A - A^vir are evaluated.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from errors import CaseError
from mult_filtration import BRACKETED_CASES, CASE_I, MultFiltration, ZERO, case_of
from virtual_profile import area_Avir_cell, build_virtual
from xtilde_profile import contribution, stage_weight

logger = logging.getLogger(__name__)

CELL_U_COEFF = Fraction(7, 2)
CELL_CONST_COEFF = 3


# ─── Domain Types ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CellParams:
    zeta: Fraction      # (r_k - r_{k+1}) / (r_s - r_t)
    xi: Fraction        # (r_s - r_k) / (r_s - r_t)
    eta: Fraction       # ⟨uξ⟩ - ⟨uζ + ⟨uξ⟩⟩
    zero_flag: bool     # ζ ≠ 0


@dataclass(frozen=True)
class IdentityCheck:
    brute: int              # direct enumeration over w
    corrected: int          # closed form that always agrees with brute
    printed: int            # closed form as customarily printed
    printed_holds: bool


@dataclass(frozen=True)
class CellDelta:
    k: int
    i: int
    kind: str
    A_exact: Fraction
    Avir: Fraction
    bound: Fraction

    @property
    def delta(self) -> Fraction:
        return self.A_exact - self.Avir

    @property
    def holds(self) -> bool:
        return self.delta <= self.bound


@dataclass(frozen=True)
class DeltaReport:
    cells: tuple            # CellDelta for every (k, i)
    per_point: tuple        # (Δ_i, bound_i) per point
    total: Fraction         # A - A^vir
    total_bound: Fraction   # (7/2)d·uv² + 3d·v²

    @property
    def holds(self) -> bool:
        return (
            self.total <= self.total_bound
            and all(cell.holds for cell in self.cells)
            and all(value <= bound for value, bound in self.per_point)
        )


# ─── Fractional Parts ─────────────────────────────────────────────────────────

def frac(y: Fraction) -> Fraction:
    """⟨y⟩ = y - ⌊y⌋, in [0, 1) for every rational y."""
    return y - math.floor(y)


def cell_params(mf: MultFiltration, k: int, i: int, u: int | None = None) -> CellParams:
    cell = case_of(mf, k, i)
    if cell.kind not in BRACKETED_CASES:
        raise CaseError(f"cell parameters undefined in case {cell.kind}")
    u = mf.u if u is None else u
    gap = mf.r(cell.s) - mf.r(cell.t)
    zeta = (mf.r(k) - mf.r(k + 1)) / gap
    xi = (mf.r(cell.s) - mf.r(k)) / gap
    eta = frac(u * xi) - frac(u * zeta + frac(u * xi))
    return CellParams(zeta=zeta, xi=xi, eta=eta, zero_flag=zeta != 0)


# ─── Ceiling Sums ─────────────────────────────────────────────────────────────

def _increments(u: int, zeta: Fraction, xi: Fraction) -> list:
    a = frac(u * xi)
    return [math.ceil(a + (w + 1) * zeta) - math.ceil(a + w * zeta) for w in range(u)]


def _crossings(u: int, zeta: Fraction, xi: Fraction) -> list:
    """Integers ℓ in [⟨uξ⟩, ⟨uξ⟩ + uζ): one per unit step of W."""
    a = frac(u * xi)
    return list(range(math.ceil(a), math.ceil(a + u * zeta)))


def staircase_count(u: int, zeta: Fraction, xi: Fraction) -> IdentityCheck:
    """Σ_w (W(w+1) - W(w)) against ⌈⟨uξ⟩ + uζ⌉ - ⌈⟨uξ⟩⌉ and ⌊uζ + ⟨uξ⟩⌋."""
    brute = sum(_increments(u, zeta, xi))
    a = frac(u * xi)
    corrected = math.ceil(a + u * zeta) - math.ceil(a)
    printed = math.floor(u * zeta + a)
    return IdentityCheck(brute=brute, corrected=corrected, printed=printed, printed_holds=printed == brute)


def weighted_staircase_sum(u: int, zeta: Fraction, xi: Fraction) -> IdentityCheck:
    """
    Σ_w w·(W(w+1) - W(w)). Each crossing ℓ happens at w = ⌊(ℓ - ⟨uξ⟩)/ζ⌋;
    the printed form sums ⌈(ℓ - ⟨uξ⟩)/ζ⌉ over ℓ = 1..uζ+η instead.
    """
    brute = sum(w * step for w, step in enumerate(_increments(u, zeta, xi)))
    if zeta == 0:
        return IdentityCheck(brute=brute, corrected=0, printed=0, printed_holds=brute == 0)

    a = frac(u * xi)
    corrected = sum(math.floor((ell - a) / zeta) for ell in _crossings(u, zeta, xi))
    upper = math.floor(u * zeta + a)  # uζ + η
    printed = sum(math.ceil((ell - a) / zeta) for ell in range(1, upper + 1))
    return IdentityCheck(brute=brute, corrected=corrected, printed=printed, printed_holds=printed == brute)


# ─── Cell Areas ───────────────────────────────────────────────────────────────

def area_A_cell_exact(mf: MultFiltration, k: int, i: int) -> Fraction:
    """Σ_w (stage weight)·(x̃(k,w+1,i) - x̃(k,w,i)), summed directly."""
    cell = case_of(mf, k, i)
    if cell.kind == ZERO:
        return Fraction(0)
    values = [contribution(mf, k, w, i, cell) for w in range(mf.u + 1)]
    return sum(
        (stage_weight(mf, k, w) * (values[w + 1] - values[w]) for w in range(mf.u)),
        Fraction(0),
    )


def area_A_cell_closed(mf: MultFiltration, k: int, i: int) -> Fraction:
    """
    A_{k,i} in closed form.
    Case I:      u²v²·½(r_k+r_{k+1})Δc + uv²·(r_0 + ½(r_k-r_{k+1}))Δc
    Cases II-IV: v²Δc·((u·r_k + r_0)·count - (r_k - r_{k+1})·weighted)
    """
    cell = case_of(mf, k, i)
    if cell.kind == ZERO:
        return Fraction(0)
    u, v = mf.u, mf.v
    r_k, r_next, r0 = mf.r(k), mf.r(k + 1), mf.r(0)
    if cell.kind == CASE_I:
        delta_c = mf.c(k + 1, i) - mf.c(k, i)
        return (u * u * v * v * (r_k + r_next) / 2 + u * v * v * (r0 + (r_k - r_next) / 2)) * delta_c

    params = cell_params(mf, k, i)
    delta_c = mf.c(cell.t, i) - mf.c(cell.s, i)
    count = staircase_count(u, params.zeta, params.xi).corrected
    weighted = weighted_staircase_sum(u, params.zeta, params.xi).corrected
    return v * v * delta_c * ((u * r_k + r0) * count - (r_k - r_next) * weighted)


def area_A_cell_printed_bound(mf: MultFiltration, k: int, i: int) -> tuple[Fraction, bool]:
    """
    The customary Case II-IV upper bound for A_{k,i}, as a polynomial in u
    with ζ, ξ, η frozen, and whether it really bounds the exact value.
    Returns (bound, holds)
    """
    cell = case_of(mf, k, i)
    if cell.kind not in BRACKETED_CASES:
        raise CaseError(f"printed bound is stated for Cases II-IV, not {cell.kind}")
    u, v = mf.u, mf.v
    p = cell_params(mf, k, i)
    r_k, r_next, r0 = mf.r(k), mf.r(k + 1), mf.r(0)
    gap = mf.r(cell.s) - mf.r(cell.t)
    a = frac(u * p.xi)
    flag = 1 if p.zero_flag else 0

    quadratic = (r_k + r_next) * p.zeta / 2
    linear = p.eta * r_k + p.zeta * r0 + flag * (r_k - r_next) * (a - p.eta + Fraction(1, 2))
    constant = p.eta * r0 + flag * gap * (p.eta * a - p.eta * p.eta / 2 - p.eta)
    delta_c = mf.c(cell.t, i) - mf.c(cell.s, i)
    bound = v * v * delta_c * (quadratic * u * u + linear * u + constant)
    return bound, area_A_cell_exact(mf, k, i) <= bound


# ─── Δ Bounds ─────────────────────────────────────────────────────────────────

def cell_delta_bound(mf: MultFiltration, k: int, i: int) -> Fraction:
    """(7/2)uv²·Δc + 3v²·Δc for the cell's multiplicity jump Δc."""
    cell = case_of(mf, k, i)
    if cell.kind == ZERO:
        return Fraction(0)
    if cell.kind == CASE_I:
        delta_c = mf.c(k + 1, i) - mf.c(k, i)
    else:
        delta_c = mf.c(cell.t, i) - mf.c(cell.s, i)
    u, v = mf.u, mf.v
    return (CELL_U_COEFF * u * v * v + CELL_CONST_COEFF * v * v) * delta_c


def delta_bounds(mf: MultFiltration) -> DeltaReport:
    vp = build_virtual(mf)
    u, v = mf.u, mf.v
    cells = []
    for k in range(mf.Ntilde):
        for i in range(mf.q):
            cells.append(CellDelta(
                k=k, i=i, kind=case_of(mf, k, i).kind,
                A_exact=area_A_cell_exact(mf, k, i),
                Avir=area_Avir_cell(vp, k, i),
                bound=cell_delta_bound(mf, k, i),
            ))

    last = mf.base.c[mf.base.Nbar]
    per_point = []
    for i in range(mf.q):
        value = sum((cell.delta for cell in cells if cell.i == i), Fraction(0))
        bound = (CELL_U_COEFF * u * v * v + CELL_CONST_COEFF * v * v) * last[i]
        per_point.append((value, bound))

    d = mf.base.ctx.d
    report = DeltaReport(
        cells=tuple(cells),
        per_point=tuple(per_point),
        total=sum((cell.delta for cell in cells), Fraction(0)),
        total_bound=CELL_U_COEFF * d * u * v * v + CELL_CONST_COEFF * d * v * v,
    )
    if not report.holds:
        logger.warning("discrepancy bound fails for u=%d v=%d: Δ=%s", u, v, report.total)
    return report
