"""Exception hierarchy for l0mod."""


class L0Error(Exception):
    """Base class for all l0mod errors."""


class SpaceMismatchError(L0Error, ValueError):
    """Operands live on different sample spaces or modules."""


class DimensionError(L0Error, ValueError):
    """A vector or matrix has the wrong shape for its atom."""


class PartitionError(L0Error, ValueError):
    """Events do not form a partition of the sample space."""


class EmptyFamilyError(L0Error, ValueError):
    pass


class NonInvertibleError(L0Error, ValueError):
    """A map (or one of its atom bodies) has no inverse in the grammar."""


class PreconditionError(L0Error, ValueError):
    pass


class SchemaError(L0Error, ValueError):
    """Malformed JSON input."""
