import dataclasses
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from errors import FiltrationError
from filtration_model import (
    GeometricContext, LinearizationConfig, WeightedFiltration, case_classify,
    default_epsilon, merge_stages, moduli_context, normalize_weights, regions,
    slot_weights, strengthened_epsilon_limit, validate, validate_linearization,
)
from scenario_gen import random_admissible, random_context


def lin_with(gamma_b, epsilon=Fraction(1, 1000), n=1):
    return LinearizationConfig(gamma=Fraction(1, 2), b=(2 * Fraction(gamma_b) / n,) * n, epsilon=epsilon)


# ─── Weights ──────────────────────────────────────────────────────────────────

def test_normalize_weights_small():
    assert normalize_weights((-1, 0, 1)) == (Fraction(2, 3), Fraction(1, 3), Fraction(0))


def test_merge_stages_merges_equal_slots():
    z, r = merge_stages((-2, -2, 1, 3))
    assert z == (1, 1, 2)
    assert r == (Fraction(5, 8), Fraction(3, 8), Fraction(0))


@pytest.mark.parametrize("s, message", [
    ((0, 0, 0), "trivial 1-PS"),
    ((-1, 0, 2), "not special-linear"),
    ((1, 0, -1), "nondecreasing"),
])
def test_normalize_weights_rejects(s, message):
    with pytest.raises(FiltrationError, match=message):
        normalize_weights(s)


raw_weights = st.lists(st.integers(min_value=-50, max_value=50), min_size=2, max_size=8)


@given(raw_weights, st.integers(min_value=1, max_value=20))
def test_normalize_weights_is_scale_invariant(xs, k):
    total = sum(xs)
    s = sorted(len(xs) * x - total for x in xs)
    assume(any(x != 0 for x in s))
    assert normalize_weights([k * x for x in s]) == normalize_weights(s)


@given(raw_weights)
def test_merged_stages_are_normalized(xs):
    total = sum(xs)
    s = sorted(len(xs) * x - total for x in xs)
    assume(any(x != 0 for x in s))
    z, r = merge_stages(s)
    assert sum(size * weight for size, weight in zip(z, r)) == 1
    assert all(r[j] > r[j + 1] for j in range(len(r) - 1))
    assert r[-1] == 0
    assert sum(z) == len(s)


# ─── Validation ───────────────────────────────────────────────────────────────

def test_example_filtration_is_admissible(example, canonical):
    _, lin = canonical
    assert validate(example, lin) == []
    assert slot_weights(example)[:4] == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6), Fraction(0))


def test_validate_flags_unsorted_weights(example):
    bad = dataclasses.replace(example, r=(Fraction(1, 3), Fraction(1, 2), Fraction(1, 6), Fraction(0)))
    problems = validate(bad)
    assert any(p.row == 1 and "strictly decreasing" in p.message for p in problems)


def test_validate_flags_riemann_roch_excess(example):
    c = ((0, 0, 0), (2, 0, 0), (2, 1, 0), (2, 1, 1))
    problems = validate(dataclasses.replace(example, c=c))
    assert any(p.row == 1 and "Riemann-Roch" in p.message for p in problems)


@settings(deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.data())
def test_raising_a_multiplicity_past_riemann_roch_is_flagged(seed, data):
    ctx, lin = random_context(seed)
    f = random_admissible(ctx, lin, seed)
    j_rr, _ = regions(f)
    assume(f.q > 0 and j_rr >= 0)
    j = data.draw(st.integers(0, j_rr))
    i = data.draw(st.integers(0, f.q - 1))
    excess = data.draw(st.integers(1, 4))
    c = [list(row) for row in f.c]
    c[j][i] += f.cumulative(j) - f.d_row(j) + excess
    bad = dataclasses.replace(f, c=tuple(tuple(row) for row in c))
    assert any(p.row == j and "Riemann-Roch" in p.message for p in validate(bad, lin))


def test_validate_flags_weight_sum(example):
    bad = dataclasses.replace(example, r=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 7), Fraction(0)))
    assert any("expected 1" in str(p) for p in validate(bad))


def test_validate_flags_foreign_marked_weight(example, canonical):
    _, lin = canonical
    bad = dataclasses.replace(example, B=(Fraction(1, 3), Fraction(4, 5), Fraction(4, 5)))
    assert any("unused linearizing weight" in p.message for p in validate(bad, lin))
    assert validate(bad) == []


def test_validate_linearization(canonical):
    ctx, lin = canonical
    assert validate_linearization(ctx, lin) == (True, "linearization ok")
    ok, message = validate_linearization(ctx, dataclasses.replace(lin, b=lin.b[:2]))
    assert not ok and "expected 3" in message
    ok, message = validate_linearization(ctx, dataclasses.replace(lin, gamma=Fraction(1, 2)))
    assert not ok and "nu = 5" in message


# ─── Regions & Cases ──────────────────────────────────────────────────────────

def test_regions_of_example(example):
    assert regions(example) == (3, 4)


def test_moduli_context_values(canonical):
    ctx, lin = canonical
    assert (ctx.d, ctx.N, ctx.n) == (25, 23, 3)
    assert lin.gamma == Fraction(5, 9)
    assert lin.b == (Fraction(4, 5),) * 3
    assert lin.gamma_b == Fraction(4, 3)
    assert lin.epsilon == Fraction(89, 3312)
    assert case_classify(ctx, lin) == "A"


def test_moduli_context_rejects_unstable_data():
    with pytest.raises(FiltrationError, match="unstable"):
        moduli_context(1, 0, (), 3)


@pytest.mark.parametrize("g, N, n, gamma_b, expected", [
    (2, 10, 0, 0, "C"),
    (3, 2, 0, 0, "D"),
    (2, 10, 1, Fraction(1, 20), "B"),
    (6, 10, 1, Fraction(1, 20), "E"),
    (2, 10, 1, Fraction(1, 2), "A"),
])
def test_case_classify(g, N, n, gamma_b, expected):
    ctx = GeometricContext(g=g, d=N + g, N=N, n=n, q=0)
    lin = lin_with(gamma_b, n=n) if n else LinearizationConfig(gamma=Fraction(1, 2), b=(), epsilon=Fraction(1, 1000))
    assert case_classify(ctx, lin) == expected


@given(
    st.integers(0, 6),
    st.integers(1, 40),
    st.integers(0, 4),
    st.fractions(min_value=0, max_value=2, max_denominator=50),
    st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(1, 10), max_denominator=1000),
)
def test_case_classify_picks_exactly_one_case(g, N, n, gamma_b, epsilon):
    ctx = GeometricContext(g=g, d=N + g, N=N, n=n, q=0)
    if n:
        lin = lin_with(gamma_b, epsilon, n=n)
    else:
        lin = LinearizationConfig(gamma=Fraction(1, 2), b=(), epsilon=epsilon)
    threshold = Fraction(g - 1, N) + epsilon * (N + 1)
    gb = lin.gamma_b
    holds = {
        "A": n >= 1 and gb >= threshold,
        "B": n >= 1 and gb < threshold < Fraction(1, 2),
        "C": n == 0 and N >= 2 * g - 2,
        "D": n == 0 and N < 2 * g - 2,
        "E": n >= 1 and gb < threshold and threshold >= Fraction(1, 2),
    }
    assert [case for case, ok in holds.items() if ok] == [case_classify(ctx, lin)]


def test_case_classify_degenerate_space():
    ctx = GeometricContext(g=0, d=0, N=0, n=0, q=0)
    with pytest.raises(FiltrationError, match="degenerate projective space"):
        case_classify(ctx, LinearizationConfig(gamma=Fraction(1, 2), b=(), epsilon=Fraction(1)))


def test_strengthened_epsilon_limit_case_c():
    ctx = GeometricContext(g=2, d=12, N=10, n=0, q=0)
    assert strengthened_epsilon_limit(ctx, Fraction(0)) == Fraction(9, 220)


def test_default_epsilon_keeps_case():
    ctx = GeometricContext(g=2, d=12, N=10, n=1, q=0)
    gamma_b = Fraction(1, 20)
    epsilon = default_epsilon(ctx, gamma_b)
    assert epsilon > 0
    assert epsilon <= strengthened_epsilon_limit(ctx, gamma_b)
    assert case_classify(ctx, lin_with(gamma_b, epsilon)) == "B"


def test_weighted_filtration_helpers(example):
    assert example.Nbar == 3
    assert example.q == 3
    assert [example.d_row(j) for j in range(4)] == [0, 1, 2, 3]
    assert example.column(1) == (0, 0, 1, 1)
    assert example.cumulative(3) == 3
    assert isinstance(example, WeightedFiltration)
