"""Exception hierarchy shared by every layer of the engine."""


class BRError(Exception):
    """Base class for all engine errors."""


class ContextMismatch(BRError):
    pass


class RankMismatch(BRError):
    pass


class NonHomogeneousError(BRError):
    pass


class BudgetExceeded(BRError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParameterModuleError(BRError):
    """A candidate matrix failed one of the parameter-module conditions.

    ``condition`` names the violated requirement so callers can report it
    without parsing the message.
    """

    condition = "invalid"


class WrongColumnCount(ParameterModuleError):
    condition = "WrongColumnCount"


class NotInMaximalIdeal(ParameterModuleError):
    condition = "NotInMaximalIdeal"


class InfiniteColength(ParameterModuleError):
    condition = "InfiniteColength"


class NotMinimal(ParameterModuleError):
    condition = "NotMinimal"


class FitInconclusive(BRError):
    pass


class MultiplicitiesDisagree(BRError):
    pass


class ProblemError(BRError):
    """Input-file error carrying a source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ProblemSyntaxError(ProblemError):
    def __init__(self, message, line=None, column=None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, line, column)


class UnknownVariable(ProblemError):
    pass


class NonHomogeneousRelation(ProblemError):
    pass


class ZeroDimensionalRing(ParameterModuleError):
    condition = "ZeroDimensionalRing"
