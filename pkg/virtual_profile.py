"""
virtual_profile.py - The virtual profile: a polyline through (f̃(k), r̃_k).

Each point's multiplicity is interpolated linearly in weight between its
jump rows, so the virtual area A^vir is a polynomial in (u, v) and bounds
the true profile area up to the discrepancy Δ.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from filtration_model import LinearizationConfig, WeightedFiltration
from mult_filtration import CASE_I, MultFiltration, ZERO, case_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VirtualProfile:
    mf: MultFiltration
    per_point: tuple        # per_point[k][i] = f̃_i(k)
    terminal_dim: int       # dim Ṽ_Ñ
    terminal_weight: Fraction

    @property
    def vertices(self) -> tuple:
        """(f̃(k), r̃_k) for k = 0..Ñ."""
        return tuple((sum(row, Fraction(0)), weight) for row, weight in zip(self.per_point, self.mf.r_tilde))


# ─── Interpolation ────────────────────────────────────────────────────────────

def f_i(mf: MultFiltration, k: int, i: int, cell=None) -> Fraction:
    """Virtual multiplicity of Q_i at row k."""
    if k == mf.Ntilde:
        return Fraction(mf.c_tilde[k][i])
    cell = cell or case_of(mf, k, i)
    if cell.kind == ZERO:
        return Fraction(0)
    if cell.kind == CASE_I:
        return Fraction(mf.c_tilde[k][i])

    r_s, r_t = mf.r_tilde[cell.s], mf.r_tilde[cell.t]
    lam = (mf.r_tilde[k] - r_t) / (r_s - r_t)
    return lam * mf.c_tilde[cell.s][i] + (1 - lam) * mf.c_tilde[cell.t][i]


def build_virtual(mf: MultFiltration) -> VirtualProfile:
    per_point = tuple(
        tuple(f_i(mf, k, i) for i in range(mf.q))
        for k in range(mf.Ntilde + 1)
    )
    base = mf.base
    d_last = base.d_row(base.Nbar)
    return VirtualProfile(
        mf=mf,
        per_point=per_point,
        terminal_dim=(base.ctx.d - d_last) * mf.u * mf.v + base.ctx.d * mf.v - base.ctx.g + 1,
        terminal_weight=mf.v * base.r[0],
    )


# ─── Areas ────────────────────────────────────────────────────────────────────

def area_Avir(vp: VirtualProfile) -> Fraction:
    """Trapezoids under the polyline plus the terminal rectangle."""
    verts = vp.vertices
    area = Fraction(0)
    for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
        area += (x1 - x0) * (y0 + y1) / 2
    return area + vp.terminal_dim * vp.terminal_weight


def area_Avir_cell(vp: VirtualProfile, k: int, i: int) -> Fraction:
    """Share of point i in the trapezoid between rows k and k+1."""
    mf = vp.mf
    rise = vp.per_point[k + 1][i] - vp.per_point[k][i]
    return rise * (mf.r_tilde[k] + mf.r_tilde[k + 1]) / 2


def area_Avir_cell_closed(mf: MultFiltration, k: int, i: int) -> Fraction:
    """
    Closed form of area_Avir_cell:
    Case I     u²v²·½(r_k+r_{k+1})Δc + uv²·r_0·Δc
    Cases II-IV the same with Δc = c_t - c_s, scaled by ζ = (r_k-r_{k+1})/(r_s-r_t).
    """
    cell = case_of(mf, k, i)
    if cell.kind == ZERO:
        return Fraction(0)
    u, v = mf.u, mf.v
    r_k, r_next, r0 = mf.r(k), mf.r(k + 1), mf.r(0)
    if cell.kind == CASE_I:
        delta_c, scale = mf.c(k + 1, i) - mf.c(k, i), Fraction(1)
    else:
        delta_c = mf.c(cell.t, i) - mf.c(cell.s, i)
        scale = (r_k - r_next) / (mf.r(cell.s) - mf.r(cell.t))
    return (u * u * v * v * (r_k + r_next) / 2 + u * v * v * r0) * delta_c * scale


# ─── Marked Points ────────────────────────────────────────────────────────────

def first_nonvanishing_weight(f: WeightedFiltration, i: int) -> Fraction:
    """r_{j(i,0)}: weight of the last row where Q_i is not a base point (0 if never)."""
    col = f.column(i)
    if col[-1] == 0:
        return Fraction(0)
    last_zero = max(j for j, x in enumerate(col) if x == 0)
    return f.r[last_zero]


def marked_weight(f: WeightedFiltration, lin: LinearizationConfig) -> Fraction:
    """M = Σ_i γ·B_i·r_{j(i,0)}."""
    return sum((lin.gamma * f.B[i] * first_nonvanishing_weight(f, i) for i in range(f.q)), Fraction(0))


def Tvir_bound(vp: VirtualProfile, lin: LinearizationConfig) -> Fraction:
    """A^vir + (u+1)²v²·γ·Σ_i B_i·r_{j(i,0)}."""
    mf = vp.mf
    return area_Avir(vp) + mf.m * mf.m * marked_weight(mf.base, lin)
