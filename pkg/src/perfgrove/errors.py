"""Exception hierarchy shared by all modules."""


class PerfgroveError(Exception):
    """Base class for every error raised by this package."""


class FormatError(PerfgroveError, ValueError):
    """Malformed input text (CSV, tree listing, JSON model).

    ``row`` is the 1-based data row for CSV problems and ``offset`` the
    character offset for tree-text problems; either may be None.
    """

    def __init__(self, message: str, *, row: int | None = None, offset: int | None = None):
        super().__init__(message)
        self.row = row
        self.offset = offset


class DomainError(PerfgroveError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class PolicyError(PerfgroveError, ValueError):
    """A knee or accept policy cannot be applied to the given data."""


class InputError(PerfgroveError, KeyError):
    """A prediction input is missing an attribute the tree needs."""

    def __init__(self, attribute: str):
        super().__init__(attribute)
        self.attribute = attribute

    def __str__(self) -> str:
        return f"assignment has no value for attribute {self.attribute!r}"
