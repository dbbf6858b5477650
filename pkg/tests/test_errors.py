import pytest

from cli import UsageError
from errors import (
    CaseError, FiltrationError, GenerationError, GitStabError, HypothesisError,
    ModeInapplicableError, ScenarioFormatError, SpanError,
)


@pytest.mark.parametrize("cls", [
    FiltrationError, SpanError, CaseError, ModeInapplicableError,
    HypothesisError, GenerationError, ScenarioFormatError, UsageError,
])
def test_errors_share_the_root_and_are_documented(cls):
    assert issubclass(cls, GitStabError)
    assert cls.__doc__ and cls.__doc__.strip()


def test_filtration_error_is_a_value_error():
    assert issubclass(FiltrationError, ValueError)


def test_scenario_format_error_location():
    assert str(ScenarioFormatError("bad", "filtration.r[1]")) == "filtration.r[1]: bad"
    assert str(ScenarioFormatError("bad")) == "bad"
