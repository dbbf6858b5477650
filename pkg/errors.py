"""
errors.py - Exception hierarchy for the stability certification engine.
"""


class GitStabError(Exception):
    """Root of every error raised on purpose by this package."""


class FiltrationError(GitStabError, ValueError):
    """Raw 1-PS or context data that cannot form a filtration."""


class SpanError(GitStabError):
    """Misuse of the span/intersection calculus."""


class CaseError(GitStabError):
    """A cell quantity requested outside the cases where it is defined."""


class ModeInapplicableError(GitStabError):
    """A strengthened creep or tail mode asked for where its hypotheses fail."""


class HypothesisError(GitStabError):
    """The parameter hypotheses of the stability argument do not hold."""


class GenerationError(GitStabError):
    """Scenario or suite parameters that cannot be generated."""


class ScenarioFormatError(GitStabError):
    """
    Malformed scenario or report document.
    `where` is a human-readable location: "line 3, column 7" or a field path.
    """

    def __init__(self, message: str, where: str = ""):
        self.message = message
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
