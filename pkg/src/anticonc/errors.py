"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """An argument is malformed or out of range."""


class PreconditionError(ValueError):
    """A theorem hypothesis required by a check does not hold."""


class CapacityError(RuntimeError):
    """An exact enumeration would exceed its configured budget."""


class CapabilityError(NotImplementedError):
    """The requested operation is not available for this distribution."""
