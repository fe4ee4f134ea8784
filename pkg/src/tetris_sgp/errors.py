"""Exception hierarchy shared by the library and the command line."""


class TetrisSgpError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigError(TetrisSgpError, ValueError):
    """Invalid board, piece or run configuration."""

    exit_code = 2


class PlacementError(TetrisSgpError, ValueError):
    """An event places a piece outside the board."""

    exit_code = 2


class WordError(TetrisSgpError, ValueError):
    """An event word could not be parsed or is not valid for the board."""

    exit_code = 2


class EnumerationLimitError(TetrisSgpError):
    """A closure computation hit its configured cap.

    ``found`` is the number of items enumerated before giving up.
    """

    exit_code = 3

    def __init__(self, what, cap, found):
        super().__init__(f"{what} enumeration exceeded cap {cap} ({found} found so far)")
        self.what = what
        self.cap = cap
        self.found = found


class BudgetExceededError(TetrisSgpError):
    """A search ran out of budget; ``partial`` holds what was computed."""

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(TetrisSgpError):
    """An internal consistency check failed."""

    exit_code = 4
