"""Exception types shared across the package."""


class ResourceCapError(Exception):
    """A documented size cap would be exceeded."""


class SearchTimeoutError(Exception):
    """A search ran out of time.  Says nothing about existence."""


class InternalInconsistencyError(Exception):
    """A construction with a correctness guarantee failed.

    This signals a bug in the library (or a falsified guarantee), never
    bad user input.
    """
