import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from errors import HypothesisError, ModeInapplicableError
from filtration_model import GeometricContext, LinearizationConfig, WeightedFiltration
from mult_filtration import gotzmann_v0
from scenario_gen import direct_context, random_admissible, random_context, worst_candidate
from verdict import (
    CERTIFIED, HYPOTHESES_VIOLATED, INCONCLUSIVE, INVALID, MARKED, PLAIN, UNPOINTED,
    T_bound_total, Z_series, certify, creep_check, creep_lhs, creep_mode_for,
    criterion_rhs, epsilon_max, find_thresholds, hypothesis_problems,
    margin_quadratic, tail_bound, threshold_u0, threshold_v0, tvir_case_bound,
)
from virtual_profile import Tvir_bound, build_virtual


@pytest.fixture
def case_b():
    """g = 2, N = 10, one unmarked-weight point: Case B with an empty base locus."""
    ctx, lin = direct_context(2, 10, 1, 1)
    f = WeightedFiltration(
        ctx=ctx,
        z=(10, 1),
        r=(Fraction(1, 10), Fraction(0)),
        c=((), ()),
        B=(),
    )
    return lin, f


@pytest.fixture
def case_d():
    ctx = GeometricContext(g=3, d=5, N=2, n=0, q=0)
    lin = LinearizationConfig(gamma=Fraction(1, 2), b=(), epsilon=Fraction(1, 100))
    f = WeightedFiltration(ctx=ctx, z=(1, 1, 1), r=(Fraction(2, 3), Fraction(1, 3), Fraction(0)), c=((),) * 3, B=())
    return lin, f


# ─── Creep ────────────────────────────────────────────────────────────────────

def test_Z_series_of_example(example):
    # rows 0-2 lie in the Riemann-Roch region; row 3 straddles N - g = 21
    assert Z_series(example) == (1, 1, 1, 24)


def test_creep_of_example(example, canonical):
    _, lin = canonical
    # (1/2 + 4/9)·(1/2 + 1/3 + 1/6)
    assert creep_lhs(example, lin) == Fraction(17, 18)
    result = creep_check(example, lin)
    assert (result.rhs, result.z_excess, result.mode) == (1, 0, PLAIN)
    assert result.holds


def test_marked_creep(case_b):
    lin, f = case_b
    assert creep_mode_for(f, lin) == MARKED
    result = creep_check(f, lin, MARKED)
    # Z = (12, 2), minus (1/2 - 0)·r_{N-1}
    assert result.rhs == Fraction(6, 5) - Fraction(1, 20)
    assert result.z_excess == Fraction(1, 5)
    assert result.lhs == 0


def test_creep_mode_inapplicable(example, canonical, case_d):
    _, lin = canonical
    with pytest.raises(ModeInapplicableError, match="needs Case B"):
        creep_check(example, lin, MARKED)
    with pytest.raises(ModeInapplicableError, match="needs n = 0"):
        creep_check(example, lin, UNPOINTED)
    with pytest.raises(ModeInapplicableError, match="unknown creep mode"):
        creep_check(example, lin, "sideways")
    d_lin, d_f = case_d
    assert creep_mode_for(d_f, d_lin) == UNPOINTED
    assert creep_check(d_f, d_lin, UNPOINTED).rhs == 2 - Fraction(1, 6)


@given(st.integers(min_value=0, max_value=10**6))
def test_plain_creep_holds_on_random_filtrations(seed):
    ctx, lin = random_context(seed)
    f = random_admissible(ctx, lin, seed)
    assert creep_check(f, lin).holds


# ─── Tail ─────────────────────────────────────────────────────────────────────

def test_tail_of_example_is_zero(example):
    result = tail_bound(example)
    assert result.tail == 0
    assert result.bound == Fraction(1, 23)
    assert result.holds


def test_tail_of_worst_candidate(canonical):
    ctx, lin = canonical
    result = tail_bound(worst_candidate(ctx, lin))
    assert result.tail == Fraction(1, 276)
    assert result.holds


@pytest.mark.parametrize("g, N", [(2, 10), (3, 7), (5, 20)])
def test_tail_is_tight_at_uniform_weights(g, N):
    ctx = GeometricContext(g=g, d=N + g, N=N, n=0, q=0)
    f = WeightedFiltration(ctx=ctx, z=(N, 1), r=(Fraction(1, N), Fraction(0)), c=((), ()), B=())
    result = tail_bound(f)
    assert result.tail == result.bound == Fraction(g - 1, N)
    assert result.holds


def test_strengthened_tail(case_b):
    lin, f = case_b
    result = tail_bound(f, lin, MARKED)
    assert result.tail == Fraction(1, 20)
    assert result.bound == Fraction(1, 20)
    assert result.holds


def test_strengthened_tail_needs_genus_two():
    ctx, lin = direct_context(1, 6, 1, 1)
    f = WeightedFiltration(ctx=ctx, z=(6, 1), r=(Fraction(1, 6), Fraction(0)), c=((), ()), B=())
    assert tail_bound(f, lin).tail == 0
    with pytest.raises(ModeInapplicableError, match="needs g >= 2"):
        tail_bound(f, lin, UNPOINTED)


@given(st.integers(min_value=0, max_value=10**6))
def test_plain_tail_holds_on_random_filtrations(seed):
    ctx, lin = random_context(seed)
    assert tail_bound(random_admissible(ctx, lin, seed), lin).holds


# ─── Bounds ───────────────────────────────────────────────────────────────────

def test_epsilon_max(canonical, case_b):
    ctx, lin = canonical
    assert epsilon_max(ctx, lin) is None
    b_lin, f = case_b
    assert epsilon_max(f.ctx, b_lin) == Fraction(9, 220)


def test_criterion_rhs(canonical):
    ctx, lin = canonical
    # (1 + 7/72)·400 - (1/24)·20
    assert criterion_rhs(ctx, lin, 3, 5) == Fraction(7885, 18)


@given(st.integers(1, 400), st.integers(1, 50))
def test_margin_is_quadratic_in_u(u, v):
    ctx, lin = direct_context(2, 8, 3, 2, epsilon=Fraction(7, 72))
    a2, a1, a0 = margin_quadratic(ctx, lin)
    Q = a2 * u * u + a1 * u + a0
    L = Fraction((ctx.g - 1) * (u + 1), ctx.N + 1)
    margin = criterion_rhs(ctx, lin, u, v) - T_bound_total(worst_candidate(ctx, lin), lin, u, v)
    assert margin == v * v * Q - v * L


def test_tvir_case_bound_covers_example(mf35, example, canonical):
    _, lin = canonical
    assert Tvir_bound(build_virtual(mf35), lin) <= tvir_case_bound(example, lin, 3, 5)


def test_case_bounds_reject_excluded_cases(case_d):
    lin, f = case_d
    with pytest.raises(HypothesisError):
        T_bound_total(f, lin, 3, 5)
    with pytest.raises(HypothesisError):
        tvir_case_bound(f, lin, 3, 5)
    with pytest.raises(HypothesisError):
        epsilon_max(f.ctx, lin)


# ─── Certification ────────────────────────────────────────────────────────────

def test_example_is_inconclusive_at_small_scale(example, canonical):
    _, lin = canonical
    report = certify(example, lin, 3, 5)
    assert report.verdict == INCONCLUSIVE
    assert report.case_label == "A"
    assert report.violations == ()
    assert report.A_bound == Fraction(2795, 2)
    assert report.Avir == 1360
    assert report.delta == Fraction(75, 2)
    assert report.delta_holds
    assert report.rhs == Fraction(7885, 18)
    assert report.margin < 0
    assert report.creep.holds


def test_certified_past_threshold(small_case_a):
    lin, f = small_case_a
    report = certify(f, lin, 734, 1)
    assert report.verdict == CERTIFIED
    assert report.margin > 0
    assert report.direct_margin > 0


def test_case_d_violates_hypotheses(case_d):
    lin, f = case_d
    report = certify(f, lin, 2, 3)
    assert report.verdict == HYPOTHESES_VIOLATED
    assert "Case D is excluded" in report.violations
    assert report.T_bound is None
    assert report.margin is None


def test_case_b_passes_hypotheses(case_b):
    lin, f = case_b
    assert hypothesis_problems(f.ctx, lin) == []
    report = certify(f, lin, 2, 2)
    assert report.verdict in (CERTIFIED, INCONCLUSIVE)
    assert report.creep.mode == MARKED
    assert report.epsilon_max == Fraction(9, 220)


def test_epsilon_above_ceiling_violates_hypotheses():
    ctx, lin = direct_context(2, 10, 0, 1)
    f = WeightedFiltration(ctx=ctx, z=(10, 1), r=(Fraction(1, 10), Fraction(0)), c=((), ()), B=())
    assert lin.epsilon == Fraction(9, 440)
    assert certify(f, lin, 2, 2).creep.mode == UNPOINTED
    loud = dataclasses.replace(lin, epsilon=Fraction(1, 20))
    assert hypothesis_problems(ctx, loud) == ["epsilon 1/20 exceeds 9/220"]
    assert certify(f, loud, 2, 2).verdict == HYPOTHESES_VIOLATED


def test_heavy_marked_point_violates_hypotheses(canonical):
    ctx, lin = canonical
    heavy = dataclasses.replace(lin, b=(Fraction(1),) * 3, nu=None)
    assert any("not below 1/2" in x for x in hypothesis_problems(ctx, heavy))


@pytest.mark.parametrize("u, v", [(0, 5), (3, 0)])
def test_nonpositive_scale_is_invalid(example, canonical, u, v):
    _, lin = canonical
    report = certify(example, lin, u, v)
    assert report.verdict == INVALID
    assert "must be positive" in report.violations[-1]


def test_inadmissible_filtration_is_invalid(example, canonical):
    _, lin = canonical
    bad = dataclasses.replace(example, r=(Fraction(1, 3), Fraction(1, 2), Fraction(1, 6), Fraction(0)))
    report = certify(bad, lin, 3, 5)
    assert report.verdict == INVALID
    assert report.rhs is None


# ─── Thresholds ───────────────────────────────────────────────────────────────

def test_thresholds(small_case_a):
    lin, f = small_case_a
    ctx = f.ctx
    assert margin_quadratic(ctx, lin) == (Fraction(7, 72), Fraction(-320, 9), Fraction(-286, 9))
    assert threshold_u0(ctx, lin) == 367
    assert threshold_v0(ctx, lin, 367) == 3
    assert threshold_v0(ctx, lin, 734) == 1
    with pytest.raises(HypothesisError, match="below the threshold"):
        threshold_v0(ctx, lin, 10)


def test_smaller_epsilon_raises_threshold(small_case_a):
    lin, f = small_case_a
    slower = dataclasses.replace(lin, epsilon=Fraction(7, 144))
    assert threshold_u0(f.ctx, slower) > threshold_u0(f.ctx, lin)


def test_find_thresholds(small_case_a):
    lin, f = small_case_a
    t = find_thresholds(f, lin)
    assert (t.u0, t.v0) == (367, 3)
    assert t.gotzmann == gotzmann_v0(367, f.ctx) == 6769359
    assert [(u, v) for u, v, _ in t.checks] == [(367, 3), (372, 1), (734, 1)]
    assert t.verified


@pytest.mark.slow
def test_find_thresholds_of_example(example, canonical):
    _, lin = canonical
    t = find_thresholds(example, lin)
    assert (t.u0, t.v0) == (3288, 2)
    assert [u for u, _, _ in t.checks] == [3288, 3293, 6576]
    assert t.verified


def test_find_thresholds_needs_positive_epsilon(small_case_a, case_d):
    lin, f = small_case_a
    with pytest.raises(HypothesisError, match="epsilon must be positive"):
        find_thresholds(f, dataclasses.replace(lin, epsilon=Fraction(0)), verify=False)
    d_lin, d_f = case_d
    with pytest.raises(HypothesisError, match="hypotheses violated"):
        find_thresholds(d_f, d_lin, verify=False)
