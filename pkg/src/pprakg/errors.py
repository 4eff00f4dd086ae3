"""Exception hierarchy shared by all engine modules."""

from __future__ import annotations


class PprError(Exception):
    """Base class for every error raised by this package.

    ``code`` is the stable machine-readable identifier used in API
    envelopes and CLI diagnostics.
    """

    code = "Error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DuplicateIri(PprError):
    code = "DuplicateIri"


class InvalidAttr(PprError):
    code = "InvalidAttr"


class UnknownNode(PprError):
    code = "UnknownNode"


class TypeViolation(PprError):
    code = "TypeViolation"


class CycleIntroduced(PprError):
    code = "CycleIntroduced"


class MissingEdge(PprError):
    code = "MissingEdge"


class NotAProductClass(PprError):
    code = "NotAProductClass"


class NotAProcess(PprError):
    code = "NotAProcess"


class EmptyProcessDefinition(PprError):
    code = "EmptyProcessDefinition"


class KindMismatch(PprError):
    code = "KindMismatch"


class TypeMismatch(PprError):
    code = "TypeMismatch"


class InvalidConstraint(PprError):
    code = "InvalidConstraint"


class StarvedStep(PprError):
    code = "StarvedStep"

    def __init__(self, message: str, steps: list[str] | None = None):
        super().__init__(message)
        self.steps = steps or []


class InstanceTooLarge(PprError):
    code = "InstanceTooLarge"


class StaleSchedule(PprError):
    code = "StaleSchedule"


class BackendUnavailable(PprError):
    code = "BackendUnavailable"


class EmptyQuestion(PprError):
    code = "EmptyQuestion"
