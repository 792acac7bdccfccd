"""Exception types raised across the package."""


class DiffAuctionError(Exception):
    """Base class for all package errors."""


class InstanceError(DiffAuctionError, ValueError):
    """An auction instance violates a structural invariant."""


class MalformedReportError(DiffAuctionError, ValueError):
    """A report vector has the wrong shape or references unknown agents."""


class InfeasibleReportError(DiffAuctionError, ValueError):
    """A report claims neighbours the buyer does not actually have."""


class SilentAgentError(DiffAuctionError, LookupError):
    """A query was made about a buyer that is unreachable (silent)."""


class ContractViolation(DiffAuctionError, RuntimeError):
    """Exploration hooks broke one of the explorer's contracts."""


class ParseError(DiffAuctionError, ValueError):
    """An input file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
