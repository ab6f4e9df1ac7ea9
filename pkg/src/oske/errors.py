"""Exception hierarchy shared by every oske module."""


class OskeError(Exception):
    """Base class for all oske errors."""


class IllegalAction(OskeError):
    """A policy move that the knapsack rules forbid."""


class ConfigError(OskeError, ValueError):
    """A policy was configured outside the regime it supports."""


class ParamError(OskeError, ValueError):
    """Adversary parameters violate the construction's preconditions."""


class OutOfRange(OskeError, ValueError):
    """An accuracy value outside the domain of a ratio formula."""


class TooLarge(OskeError, ValueError):
    """Instance too large for exhaustive enumeration."""


class OffGrid(OskeError, ValueError):
    """A size is not a multiple of 1/D."""


class Inconsistent(OskeError):
    """An online gain exceeded the offline optimum; this is a solver bug."""


class InstanceError(OskeError, ValueError):
    """A malformed or invalid instance file."""
