""" Exceptions raised by bohrstrip. Each carries the exit code the CLI uses for it.
"""

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


class BohrStripError(Exception):
    exit_code = EXIT_INVALID

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


class InvalidInputError(BohrStripError, ValueError):
    pass


class ParseError(InvalidInputError):
    pass


class SideMismatchError(InvalidInputError):
    pass


class MissingCoordinateError(InvalidInputError, KeyError):
    def __str__(self):
        # KeyError quotes its argument
        return Exception.__str__(self)


class SupportViolationError(InvalidInputError):
    pass


class FieldConstructionError(BohrStripError):
    pass


class BudgetExceededError(BohrStripError):
    exit_code = EXIT_BUDGET


class PrimeTableResourceError(BudgetExceededError):
    pass
