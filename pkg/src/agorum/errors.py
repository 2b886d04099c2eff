"""Error taxonomy shared by the engine, discussion hub, analytics, and gateway.

Every error carries a stable machine-readable ``code`` and a canonical HTTP
status so the gateway mapping stays total: no engine error may surface as an
unmapped 500.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures."""

    code = "domain_error"
    http_status = 400

    def __init__(self, message: str, **details: object):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        payload: dict = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class ValidationError(DomainError):
    """A field failed a structural invariant; ``field`` names the offender."""

    code = "validation_error"
    http_status = 400

    def __init__(self, field: str, message: str, **details: object):
        super().__init__(message, field=field, **details)
        self.field = field


class PhaseClosed(DomainError):
    code = "phase_closed"
    http_status = 409


class InvalidTransition(DomainError):
    code = "invalid_transition"
    http_status = 409


class NotOrganizer(DomainError):
    code = "not_organizer"
    http_status = 403


class NotParticipant(DomainError):
    code = "not_participant"
    http_status = 403


class FeatureDisabled(DomainError):
    code = "feature_disabled"
    http_status = 403


class ReasonRequired(DomainError):
    code = "reason_required"
    http_status = 400


class DuplicateLink(DomainError):
    code = "duplicate_link"
    http_status = 409


class NotOnBallot(DomainError):
    code = "not_on_ballot"
    http_status = 409


class ThreadClosed(DomainError):
    code = "thread_closed"
    http_status = 409


class InvalidState(DomainError):
    code = "invalid_state"
    http_status = 409


class ContextMismatch(DomainError):
    code = "context_mismatch"
    http_status = 400


class ProviderUnavailable(DomainError):
    code = "provider_unavailable"
    http_status = 503


class NoVotes(DomainError):
    code = "no_votes"
    http_status = 400


class NotFound(DomainError):
    code = "not_found"
    http_status = 404


class UnknownCampaign(NotFound):
    code = "unknown_campaign"


class UnknownPolicy(NotFound):
    code = "unknown_policy"


class UnknownRevision(NotFound):
    code = "unknown_revision"


class UnknownCase(NotFound):
    code = "unknown_case"


class UnknownLink(NotFound):
    code = "unknown_link"


class UnknownReason(NotFound):
    code = "unknown_reason"


class UnknownThread(NotFound):
    code = "unknown_thread"


class UnknownScope(NotFound):
    code = "unknown_scope"


class UnknownSession(NotFound):
    code = "unknown_session"


class Unauthorized(DomainError):
    code = "unauthorized"
    http_status = 401
