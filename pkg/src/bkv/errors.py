"""Exception hierarchy.

Every class carries a short ``kind`` string; the CLI prints it as the
machine-parsable error class and maps it to an exit code.
"""


class BKVError(Exception):
    kind = "error"
    exit_code = 1


class InvalidArgument(BKVError, ValueError):
    kind = "invalid-argument"
    exit_code = 3


class PrecisionExceeded(BKVError):
    """A coefficient beyond the known precision was requested."""

    kind = "precision-exceeded"
    exit_code = 4


class RamanujanViolation(BKVError, ArithmeticError):
    """|A(p)| exceeded the Ramanujan-Petersson bound in exact arithmetic."""

    kind = "ramanujan-violation"
    exit_code = 5


class ConstructionFailure(BKVError):
    kind = "construction-failure"
    exit_code = 6


class FormatError(BKVError, ValueError):
    """A coefficient file or CLI list argument could not be parsed."""

    kind = "parse-error"
    exit_code = 7
