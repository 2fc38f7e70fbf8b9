"""Exception hierarchy.  Every error raised on bad input derives from
:class:`DelPezzoError`; the CLI maps these to exit codes by class name."""


class DelPezzoError(ValueError):
    """Base class for all library errors."""


# lattice
class InvalidDegree(DelPezzoError):
    pass


class InvalidConfiguration(DelPezzoError):
    pass


class LengthMismatch(DelPezzoError):
    pass


class UnknownPoint(DelPezzoError):
    pass


# cones
class DimensionMismatch(DelPezzoError):
    pass


class NotPointed(DelPezzoError):
    pass


class RayNotInCone(DelPezzoError):
    pass


class UnboundedSection(DelPezzoError):
    pass


class CapExceeded(DelPezzoError):
    """Raised instead of approximating when an exact computation would be too large."""


# cylinders
class IndexOutOfRange(DelPezzoError):
    pass


class TooManyConditions(DelPezzoError):
    pass


class OverlappingSets(DelPezzoError):
    pass


class WrongDegree(DelPezzoError):
    pass


class BadSubset(DelPezzoError):
    pass


class SupportMismatch(DelPezzoError):
    pass


# collections
class MixedSurfaces(DelPezzoError):
    pass


class UnknownLabel(DelPezzoError):
    pass


# front end
class ConfigError(DelPezzoError):
    """Malformed configuration or command-line spec; the message names the field."""
