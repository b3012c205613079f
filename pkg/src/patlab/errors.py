"""Exception hierarchy shared by the whole package.

Every error carries the process exit code the CLI maps it to: usage problems
exit 2, mathematical failures (a counterexample, a broken recovery, a firing
internal check) exit 1.
"""

from __future__ import annotations


class PatlabError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UsageError(PatlabError):
    """Bad arguments, out-of-range parameters, or requests beyond desk scale."""

    exit_code = 2


class ClassExpressionError(UsageError):
    """A class expression failed to parse; knows where, for caret diagnostics."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(message)
        self.text = text
        self.pos = pos

    def caret_diagnostic(self) -> str:
        return "error: {}\n  {}\n  {}^".format(self.args[0], self.text, " " * self.pos)


class BudgetExceededError(UsageError):
    """The generating-tree node budget ran out; the request is beyond desk scale."""


class DomainError(UsageError):
    """A map was applied to a permutation outside its source class."""


class NotInImageError(PatlabError):
    """Inverse recovery failed: the input is not in the image of the map."""


class InternalCheckError(PatlabError):
    """An internal guarantee failed on precondition-validated input.

    These checks must never fire on valid input; a firing check is a
    counterexample detector, so it surfaces loudly instead of being handled.
    """


class VerificationFailure(PatlabError):
    """An exact verification found a violated claim; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
