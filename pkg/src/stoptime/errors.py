"""Exception types shared across the package."""


class StoptimeError(Exception):
    exit_code = 2


class ParseError(StoptimeError):
    pass


class InvariantError(StoptimeError):
    pass


class RangeError(StoptimeError, ValueError):
    pass


class PreconditionError(StoptimeError):
    pass


class PeriodTooLarge(StoptimeError):
    exit_code = 3


class BudgetExceeded(StoptimeError):
    exit_code = 3
