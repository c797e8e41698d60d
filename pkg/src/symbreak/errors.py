"""Exception types shared across the package."""


class SymbreakError(Exception):
    """Base class for every error raised by this package."""


class MapIncomplete(SymbreakError):
    """A vertex map has no image for some source vertex."""


class CapExceeded(SymbreakError):
    """An exhaustive computation would exceed its configured size cap."""


class InvalidConfiguration(SymbreakError, ValueError):
    """A randomness configuration, realization or port table is malformed."""


class InvalidConstruction(SymbreakError):
    """The adversarial port formula failed its bijectivity/isomorphism checks."""


class InvalidArity(SymbreakError, ValueError):
    """A task constructor was called with out-of-range parameters."""


class AsymmetricTask(SymbreakError, ValueError):
    """An output complex is not closed under permutation of names."""


class ProtocolTimeout(SymbreakError):
    """A protocol run reached its round budget without deciding."""


class StuckAtGCD(SymbreakError):
    """GCD election left a single active class of size > 1."""
