class ScatPlaneError(Exception):
    """Base class for library errors."""


class FieldError(ScatPlaneError, ValueError):
    """Invalid field parameters or modulus."""


class ParseError(ScatPlaneError, ValueError):
    """Malformed element text or JSON spec."""


class GuardError(ScatPlaneError, RuntimeError):
    """A size guard refused the computation (pass force=True to override)."""


class NotScatteredError(ScatPlaneError, ValueError):
    """The operation needs a scattered polynomial or subspace."""


class PreconditionError(ScatPlaneError, ValueError):
    """Any other violated precondition."""
