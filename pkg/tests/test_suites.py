import numpy as np
import pytest

from errors import GenerationError
from suites import SuiteResult, _random_fraction, run_suite, suite_names


@pytest.mark.parametrize("name", ["spans", "identities", "creep", "tail"])
def test_suites_pass(name):
    result = run_suite(name, 60, seed=1)
    assert result.passed, result.summary()
    assert result.summary() == f"{name}: pass (60 trials, 0 failures)"


def test_delta_suite_passes():
    assert run_suite("delta", 10, seed=2).passed


def test_suite_names():
    assert suite_names() == ["creep", "delta", "identities", "spans", "tail"]


def test_bad_suite_params():
    with pytest.raises(GenerationError, match="unknown suite"):
        run_suite("nope", 10)
    with pytest.raises(GenerationError, match="trials must be positive"):
        run_suite("spans", 0)


def test_failure_summary_names_counterexample():
    result = SuiteResult(name="spans", trials=5, failures=1, example="mult=[(1,)]")
    assert not result.passed
    assert result.summary().endswith("smallest counterexample: mult=[(1,)]")


def test_random_fractions_stay_below_the_upper_end():
    rng = np.random.default_rng(0)
    draws = [_random_fraction(rng, 0, 1) for _ in range(2000)]
    assert all(0 <= x < 1 for x in draws)
    assert min(draws) == 0
