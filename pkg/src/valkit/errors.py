"""Exception hierarchy shared across the package."""


class ValkitError(Exception):
    """Base class for every error raised by valkit."""


class DimensionError(ValkitError, ValueError):
    """Two objects that must live in the same ambient rank do not."""


class IndexMismatchError(ValkitError, ValueError):
    """Exponents or vectors are indexed by incompatible ray sets."""


class EmptyAntichainError(ValkitError, ValueError):
    """An antichain would be empty, i.e. it would represent the zero function."""


class ComplexError(ValkitError, ValueError):
    """A cone complex or fan violates its structural axioms."""


class NotAUnitError(ValkitError, ArithmeticError):
    """A series expected to be invertible has zero constant term."""


class InvalidWeightError(ValkitError, ValueError):
    """A weight column is lexicographically negative."""


class NoFaceError(ValkitError, LookupError):
    """No face of the complex carries the requested data."""


class NonRegularCandidateError(ValkitError, ArithmeticError):
    """A candidate rational function has a pole at a torus-fixed point."""


class SchemaError(ValkitError, ValueError):
    """Serialized input does not match its schema.

    ``path`` names the offending field, e.g. ``facets[2][0]``.
    """

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
