"""Exception hierarchy shared by all ncsp modules.

The CLI maps these onto distinct exit codes, so decode failures must stay
distinguishable from usage errors.
"""


class NcspError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(NcspError, ValueError):
    """Symbol out of range or malformed alphabet specification."""


class UnsupportedOperation(NcspError):
    """Operation not defined on this alphabet (e.g. '*' on 2-bit words)."""


class ParseError(NcspError):
    """Syntax error in an expression, network file or transcript.

    ``line`` is 1-based (None for single-line inputs), ``col`` is 1-based.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
        if col is not None:
            where = f"{where}, col {col}" if where else f"col {col}"
        super().__init__(f"{message} ({where})" if where else message)


class GraphError(NcspError):
    """Malformed graph operation: unknown nodes, bad path, missing edges."""


class RunningIntersectionError(GraphError):
    """An edge deletion disconnected the occurrence set of a variable."""


class ScheduleError(NcspError):
    """Message schedule cannot run (cyclic graph, missing inbox, bad root)."""


class DecodeError(NcspError):
    """Base class for decoding failures."""


class InconsistentObservations(DecodeError):
    """The received data is not in the image of the code (empty support)."""


class AmbiguousDecode(DecodeError):
    """A demanded coordinate has more than one consistent value."""


class NotLinearCode(DecodeError):
    """Gaussian elimination requested on a code with non-linear maps."""


class Underdetermined(DecodeError):
    """A demanded coordinate is not pinned down by the linear system."""


class BudgetExceeded(NcspError):
    """An exhaustive enumeration would exceed the configured budget."""
