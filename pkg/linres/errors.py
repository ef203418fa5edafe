""" exception hierarchy shared by every linres module """


class LinresError(Exception):
    """Base class for all library errors."""


class FieldError(LinresError):
    pass


class DimensionError(LinresError):
    pass


class BudgetExceeded(LinresError):
    def __init__(self, what, size, budget):
        super().__init__(f"{what}: enumeration of {size} elements exceeds budget {budget}")
        self.size = size
        self.budget = budget


class InfeasibleParams(LinresError):
    pass


class RetriesExhausted(LinresError):
    pass


class NotUnsat(LinresError):
    """The system has a 0-1 solution, so it cannot be refuted or played on."""

    def __init__(self, assignment):
        super().__init__(f"system is 0-1 satisfiable, e.g. by {assignment}")
        self.assignment = assignment


class MalformedProof(LinresError):
    pass


class ParseError(LinresError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class IllegalMove(LinresError):
    pass


class PreconditionFailed(LinresError):
    pass


class NotFound(LinresError):
    pass


class NeverReached(LinresError):
    pass


class InvariantViolation(LinresError):
    pass
