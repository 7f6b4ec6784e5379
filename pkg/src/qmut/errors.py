"""Exception hierarchy shared by the library, CLI, and HTTP service.

Every error carries a stable machine-readable ``code`` plus a ``details``
dict, so the CLI can print one JSON error object on stderr and the service
can map the same object onto an HTTP status.
"""

from __future__ import annotations

from typing import Any


class QmutError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def as_json(self) -> dict[str, Any]:
        return {"error": {"code": self.code, "message": self.message, "details": self.details}}


class ValidationError(QmutError):
    """A quiver or sequence value violates a structural invariant."""

    code = "invalid_value"


class GradingError(QmutError):
    """Arrow degrees cannot be assigned or combined consistently."""

    code = "grading_inconsistency"


class MutationError(QmutError):
    """A mutation cannot be performed (untagged vertex, undetermined kind, ...)."""

    code = "mutation_error"


class UndeterminedError(MutationError):
    """Classification needs ranks that are missing or both zero."""

    code = "undetermined_classification"


class RankSolveError(QmutError):
    """Rank completion failed; ``reason`` is one of
    underdetermined / inconsistent / non_integral / negative."""

    code = "rank_solve_failed"

    def __init__(self, message: str, reason: str, **details: Any) -> None:
        super().__init__(message, reason=reason, **details)
        self.reason = reason


class TagError(QmutError):
    """Sink/source tags are inconsistent with degrees or ranks."""

    code = "tag_conflict"


class PipelineError(QmutError):
    """A recovery phase stalled, exceeded its move budget, or hit a state
    that contradicts the phase invariant. ``phase`` names the step."""

    code = "pipeline_error"

    def __init__(self, message: str, phase: str, **details: Any) -> None:
        super().__init__(message, phase=phase, **details)
        self.phase = phase


class RecognitionError(QmutError):
    """The terminal sequence is not of squid shape; details say why."""

    code = "not_a_squid"


class DocumentError(QmutError):
    """A JSON document does not conform to the qmut/1 schema."""

    code = "bad_document"
