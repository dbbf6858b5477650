from fractions import Fraction

import pytest

from filtration_model import GeometricContext, LinearizationConfig, WeightedFiltration, moduli_context
from mult_filtration import build_tilde
from scenario_gen import example1


@pytest.fixture
def canonical():
    """g = 2, three unit-weight points, ν = 5: d = 25, N = 23, Case A."""
    return moduli_context(2, 3, (1, 1, 1), 5)


@pytest.fixture
def example(canonical):
    ctx, lin = canonical
    return example1(ctx, lin)


@pytest.fixture
def mf35(example):
    return build_tilde(example, 3, 5, check_gotzmann=False)


@pytest.fixture
def half_linked(canonical):
    """The canonical example with γ·B_i = 1/2 at every point."""
    ctx, _ = canonical
    lin = LinearizationConfig(gamma=Fraction(1, 2), b=(Fraction(1),) * 3, epsilon=Fraction(1, 1000))
    return lin, example1(ctx, lin)


@pytest.fixture
def small_case_a():
    """g = 2, ν = 2 (d = 10, N = 8) with ε at the edge of Case A."""
    ctx, lin = moduli_context(2, 3, (1, 1, 1), 2, epsilon=Fraction(7, 72))
    return lin, example1(ctx, lin)


@pytest.fixture
def two_point():
    """Point 0 jumps at rows 0 and 2, point 1 at row 1."""
    return WeightedFiltration(
        ctx=GeometricContext(g=0, d=4, N=4, n=2, q=2),
        z=(1, 1, 1, 2),
        r=(Fraction(4, 9), Fraction(1, 3), Fraction(2, 9), Fraction(0)),
        c=((0, 0), (1, 0), (1, 1), (2, 1)),
        B=(Fraction(0), Fraction(0)),
    )
