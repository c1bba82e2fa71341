"""Exception types shared across the package.

The command-line front end maps these onto exit codes: bad input data is a
ValidationError (exit 2), a well-formed query that falls outside the domain
(e.g. a point not in any simplex) is a DomainError (exit 3), and a failed
internally-guaranteed check is a ConsistencyError (exit 4).
"""


class ValidationError(ValueError):
    """Malformed or self-contradictory input data."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = "%s: %s" % (path, message)
        super().__init__(message)


class DomainError(ValueError):
    """Valid data, but the query has no answer in its domain."""


class ConsistencyError(RuntimeError):
    """A property that the construction guarantees failed to hold."""
