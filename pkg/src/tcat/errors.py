"""Exception types raised by tcat."""


class TcatError(Exception):
    """Base class for all tcat errors."""


class SchemaError(TcatError):
    """A category document violates the file schema (names the offending key)."""


class UnknownCategoryError(TcatError):
    """A catalog lookup failed; the message lists the available names."""


class InvalidCategoryError(TcatError):
    """Category data is mathematically unusable (e.g. vanishing global dimension)."""


class CompositionError(TcatError):
    """Attempted to compose morphisms whose objects do not match."""


class ShapeError(TcatError):
    """A morphism does not have the shape an operation requires."""


class IdempotencyError(TcatError):
    """A coupling morphism failed to be idempotent within tolerance.

    Signals an invalid half-braiding or a tolerance breach, not a bug in the
    caller's data flow.
    """


class DecompositionError(TcatError):
    """Numerical decomposition of an algebra failed (ill-conditioned input)."""
