"""Exception types shared across the library.

Everything raised on purpose derives from ExplanationError, so callers (and
the CLI) can distinguish domain errors from genuine bugs.
"""


class ExplanationError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(ExplanationError):
    """Malformed or mismatched inputs.

    Covers bad literals, assignments mixing theories, non-total classifier
    tables, duplicate feature names and similar construction-time problems.
    """


class CapacityError(ExplanationError):
    """An exhaustive operation would exceed an explicit budget.

    Carries the size that would have been needed and the budget in force, so
    the caller can tell which limit to raise.
    """

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        if required is not None and budget is not None:
            message = f"{message} (needs {required}, budget {budget})"
        super().__init__(message)
        self.required = required
        self.budget = budget


class UnsatisfiableConstraintsError(ExplanationError):
    """The constraint set admits no instance at all."""


class InfeasibleInstanceError(ExplanationError):
    """An instance violates the constraint set (or is missing from a dataset).

    When a nogood is to blame it is attached as ``nogood``.
    """

    def __init__(self, message: str, nogood=None):
        super().__init__(message)
        self.nogood = nogood


class ConstantClassifierError(ExplanationError):
    """The classifier assigns one single class on the relevant space.

    Explanation search is meaningless in that case (the empty assignment
    would explain everything), so engines refuse to run.
    """


class PreconditionError(ExplanationError):
    """An operation was called on arguments outside its stated precondition."""


class ParseError(ExplanationError):
    """A file or expression could not be parsed.

    ``position`` is a 0-based character offset into the parsed text when the
    error comes from the expression grammar; ``source`` names the file or
    field being parsed when known.
    """

    def __init__(self, message: str, position: int | None = None, source: str | None = None):
        detail = message
        if position is not None:
            detail = f"{detail} (at position {position})"
        if source is not None:
            detail = f"{source}: {detail}"
        super().__init__(detail)
        self.position = position
        self.source = source
