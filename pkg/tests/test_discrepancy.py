from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from discrepancy import (
    IdentityCheck, area_A_cell_closed, area_A_cell_exact, area_A_cell_printed_bound,
    cell_delta_bound, cell_params, delta_bounds, frac, staircase_count,
    weighted_staircase_sum,
)
from errors import CaseError
from mult_filtration import build_tilde
from scenario_gen import random_admissible, random_context, worst_candidate
from virtual_profile import area_Avir, build_virtual
from xtilde_profile import area_A_bound, build_xtilde

unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=60)


def test_frac():
    assert frac(Fraction(7, 3)) == Fraction(1, 3)
    assert frac(Fraction(-1, 3)) == Fraction(2, 3)
    assert frac(Fraction(4)) == 0


def test_cell_params_of_example(mf35):
    params = cell_params(mf35, 0, 0)
    assert params.zeta == Fraction(1, 3)
    assert params.xi == 0
    assert params.zero_flag
    with pytest.raises(CaseError, match="undefined in case Zero"):
        cell_params(mf35, 0, 1)


# ─── Ceiling Sums ─────────────────────────────────────────────────────────────

def test_printed_count_misses_a_crossing():
    assert staircase_count(1, Fraction(1, 2), Fraction(0)) == IdentityCheck(
        brute=1, corrected=1, printed=0, printed_holds=False,
    )


def test_printed_weighted_sum_overcounts():
    check = weighted_staircase_sum(3, Fraction(1, 3), Fraction(0))
    assert (check.brute, check.corrected, check.printed) == (0, 0, 3)
    assert not check.printed_holds


def test_weighted_sum_with_flat_staircase():
    check = weighted_staircase_sum(5, Fraction(0), Fraction(1, 3))
    assert check.brute == check.corrected == 0


@given(st.integers(min_value=1, max_value=40), unit_fractions, unit_fractions)
def test_corrected_identities_match_enumeration(u, zeta, xi):
    count = staircase_count(u, zeta, xi)
    weighted = weighted_staircase_sum(u, zeta, xi)
    assert count.brute == count.corrected
    assert weighted.brute == weighted.corrected


# ─── Cell Areas ───────────────────────────────────────────────────────────────

def test_cell_area_of_example(mf35):
    # one crossing at w = 0: the whole jump is paid at weight 10
    assert area_A_cell_exact(mf35, 0, 0) == 50
    assert area_A_cell_exact(mf35, 0, 1) == 0


def test_closed_form_on_fixed_instances(mf35, two_point, canonical):
    ctx, lin = canonical
    instances = [
        mf35,
        build_tilde(two_point, 4, 3, check_gotzmann=False),
        build_tilde(worst_candidate(ctx, lin), 2, 2, check_gotzmann=False),
    ]
    for mf in instances:
        for k in range(mf.Ntilde):
            for i in range(mf.q):
                assert area_A_cell_closed(mf, k, i) == area_A_cell_exact(mf, k, i)


def test_case_one_closed_form_at_unit_scale(canonical):
    ctx, lin = canonical
    mf = build_tilde(worst_candidate(ctx, lin), 1, 1, check_gotzmann=False)
    # u = v = 1: one stage of weight 2·r_0 over a unit jump
    assert area_A_cell_closed(mf, 0, 0) == 2 * mf.r(0) == area_A_cell_exact(mf, 0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.integers(1, 8), st.integers(1, 5))
def test_closed_form_on_random_filtrations(seed, u, v):
    ctx, lin = random_context(seed)
    mf = build_tilde(random_admissible(ctx, lin, seed), u, v, check_gotzmann=False)
    for k in range(mf.Ntilde):
        for i in range(mf.q):
            assert area_A_cell_closed(mf, k, i) == area_A_cell_exact(mf, k, i)


def test_printed_bound_only_for_bracketed_cells(mf35):
    bound, holds = area_A_cell_printed_bound(mf35, 0, 0)
    assert holds == (area_A_cell_exact(mf35, 0, 0) <= bound)
    with pytest.raises(CaseError, match="Cases II-IV"):
        area_A_cell_printed_bound(mf35, 0, 1)


# ─── Δ Bounds ─────────────────────────────────────────────────────────────────

def test_delta_report_of_example(mf35):
    report = delta_bounds(mf35)
    assert report.total == Fraction(75, 2)
    assert report.total == area_A_bound(build_xtilde(mf35)) - area_Avir(build_virtual(mf35))
    # (7/2)·25·75 + 3·25·25
    assert report.total_bound == Fraction(16875, 2)
    assert report.holds
    assert len(report.cells) == 9
    assert report.cells[0].delta == Fraction(25, 4)
    assert report.per_point[0][1] == Fraction(675, 2)


def test_cell_delta_bound_zero_cell(mf35):
    assert cell_delta_bound(mf35, 0, 1) == 0
    assert cell_delta_bound(mf35, 0, 0) == Fraction(675, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.integers(3, 12), st.integers(5, 15))
def test_delta_bounds_hold_on_random_filtrations(seed, u, v):
    ctx, lin = random_context(seed)
    mf = build_tilde(random_admissible(ctx, lin, seed), u, v, check_gotzmann=False)
    report = delta_bounds(mf)
    assert report.holds
    assert report.total == area_A_bound(build_xtilde(mf)) - area_Avir(build_virtual(mf))
