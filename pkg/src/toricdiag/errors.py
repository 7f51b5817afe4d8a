"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` that the command line
front end reports alongside the human message.
"""


class ToricError(Exception):
    code = "error"


class DimensionError(ToricError, ValueError):
    code = "dimension"


class DegenerateError(ToricError, ValueError):
    """Input spans a lower-dimensional affine subspace (or is otherwise empty)."""

    code = "degenerate"


class PreconditionError(ToricError, ValueError):
    code = "precondition"


class ValidityError(ToricError, ValueError):
    """A construction would not produce a valid toric diagram."""

    code = "validity"


class ParameterError(ToricError, ValueError):
    code = "parameter"


class NotGorensteinError(ToricError):
    """No integral height-one functional exists for the cone normals."""

    code = "not_gorenstein"


class NotInFamilyError(ToricError):
    code = "not_in_family"


class DomainError(ToricError, ValueError):
    code = "domain"


class InternalConsistencyError(ToricError, RuntimeError):
    """An internal cross-check failed. This indicates a bug, not bad input."""

    code = "internal"
