"""Structured exceptions. Every failure carries a machine-readable payload."""


class LiecohError(Exception):
    """Base class; ``details`` is a JSON-friendly dict."""

    kind = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        return {"kind": self.kind, "message": str(self), **_jsonable(self.details)}


class DimensionMismatch(LiecohError):
    kind = "dimension_mismatch"


class CatalogOnlyError(LiecohError):
    kind = "catalog_only"


class UnsupportedAlgebra(LiecohError):
    kind = "unsupported_algebra"


class NotSimpleError(LiecohError):
    kind = "not_simple"


class ResourceGuardError(LiecohError):
    kind = "resource_guard"


class SingularFormError(LiecohError):
    kind = "singular_form"


class NotACocycleError(LiecohError):
    kind = "not_a_cocycle"


class NotInvariantError(LiecohError):
    kind = "not_invariant"


class DegreeError(LiecohError):
    kind = "degree"


class RepresentationError(LiecohError):
    kind = "representation"


class NotASubalgebraError(LiecohError):
    kind = "not_a_subalgebra"


class StructureError(LiecohError):
    """An identity that should hold by construction was falsified."""

    kind = "structure"


class AnticommutatorError(LiecohError):
    kind = "anticommutator"


def _jsonable(obj):
    from .scalar import Scalar

    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj
