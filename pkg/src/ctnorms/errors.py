"""Exception types raised by the library."""


class CTNormsError(Exception):
    """Base class for all library errors."""


class DomainError(CTNormsError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class SizeError(CTNormsError, ValueError):
    """A brute-force computation was requested above its size cap."""


class ConvergenceError(CTNormsError, RuntimeError):
    """An iterative solver hit its iteration cap."""


class NoRoot(CTNormsError, ValueError):
    """The defining function has no sign change on the search interval."""


class SearchOverflow(CTNormsError, RuntimeError):
    """A threshold search ran past its maximum matrix order.

    ``n1`` holds the first threshold when only the second one overflowed.
    """

    def __init__(self, message, max_n, n1=None):
        super().__init__(message)
        self.max_n = max_n
        self.n1 = n1
