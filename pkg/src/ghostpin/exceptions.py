"""Exception hierarchy.

Two families matter to callers: :class:`ConfigError` (bad input, CLI exit 2)
and :class:`NumericalError` (the computation itself failed, CLI exit 3).
"""


class GhostpinError(Exception):
    """Base class for all package errors."""


class ConfigError(GhostpinError, ValueError):
    """Invalid user input: parameters, config files, object files."""


class NumericalError(GhostpinError, ArithmeticError):
    """A numerical stage could not produce a trustworthy result."""


# setup
class EnergyMismatch(ConfigError):
    pass


class NonPositiveLength(ConfigError):
    pass


class GeometryOrder(ConfigError):
    pass


# grids
class InvalidSize(ConfigError):
    pass


class WindowTooSmall(NumericalError):
    pass


class ObjectUnresolvable(ConfigError):
    pass


class GridUndersampled(NumericalError):
    pass


class WrongRepresentation(GhostpinError, ValueError):
    pass


# profiles
class FitDiverged(NumericalError):
    pass


class ZeroMass(NumericalError):
    pass


class NotBimodal(NumericalError):
    pass


# source
class Evanescent(NumericalError):
    pass


# objects
class OutOfWindow(ConfigError):
    pass


class ParseError(ConfigError):
    pass


class NonMonotonicX(ConfigError):
    pass


class ValueOutOfRange(ConfigError):
    pass


# analytic model
class DegenerateAlpha(NumericalError):
    pass


class NonPositiveRealPart(NumericalError):
    pass


class ZeroMagnification(NumericalError):
    pass


class BoundsInvalid(ConfigError):
    pass
