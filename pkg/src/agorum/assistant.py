"""Optional drafting assistants: small conversation state machines over a
pluggable text-generation provider.

Three kinds exist: brainstorming cases against a policy (in critique or
illustrative mode), revising a policy from selected cases, and drafting a new
policy from selected cases. Nothing here mutates campaign state; a suggestion
only becomes real when the user adopts it into an editor and submits.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional

from .errors import ContextMismatch, InvalidState, ProviderUnavailable, ValidationError
from .model import Label, ReasonSide

PROMPT_VERSION = "v1"


class SessionKind(str, Enum):
    CASE_BRAINSTORM = "case_brainstorm"
    POLICY_REVISION = "policy_revision"
    POLICY_CREATION = "policy_creation"


class SessionStatus(str, Enum):
    AWAITING_MODE = "awaiting_mode"
    AWAITING_INSTRUCTIONS = "awaiting_instructions"
    SUGGESTED = "suggested"
    RESTARTED = "restarted"  # wire-schema member; restart re-enters the initial state


class BrainstormMode(str, Enum):
    CRITIQUE = "critique"
    ILLUSTRATIVE = "illustrative"


INITIAL_STATUS = {
    SessionKind.CASE_BRAINSTORM: SessionStatus.AWAITING_MODE,
    SessionKind.POLICY_REVISION: SessionStatus.AWAITING_INSTRUCTIONS,
    SessionKind.POLICY_CREATION: SessionStatus.AWAITING_INSTRUCTIONS,
}

# (status, action) -> next status, per kind. Restart is valid from every state
# and returns to the kind's initial state; the transcript is never truncated.
FLOW: dict[SessionKind, dict[tuple[SessionStatus, str], SessionStatus]] = {
    SessionKind.CASE_BRAINSTORM: {
        (SessionStatus.AWAITING_MODE, "choose_mode"): SessionStatus.AWAITING_INSTRUCTIONS,
        (SessionStatus.AWAITING_INSTRUCTIONS, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.SUGGESTED, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.AWAITING_MODE, "restart"): SessionStatus.AWAITING_MODE,
        (SessionStatus.AWAITING_INSTRUCTIONS, "restart"): SessionStatus.AWAITING_MODE,
        (SessionStatus.SUGGESTED, "restart"): SessionStatus.AWAITING_MODE,
    },
    SessionKind.POLICY_REVISION: {
        (SessionStatus.AWAITING_INSTRUCTIONS, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.SUGGESTED, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.AWAITING_INSTRUCTIONS, "restart"): SessionStatus.AWAITING_INSTRUCTIONS,
        (SessionStatus.SUGGESTED, "restart"): SessionStatus.AWAITING_INSTRUCTIONS,
    },
    SessionKind.POLICY_CREATION: {
        (SessionStatus.AWAITING_INSTRUCTIONS, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.SUGGESTED, "generate"): SessionStatus.SUGGESTED,
        (SessionStatus.AWAITING_INSTRUCTIONS, "restart"): SessionStatus.AWAITING_INSTRUCTIONS,
        (SessionStatus.SUGGESTED, "restart"): SessionStatus.AWAITING_INSTRUCTIONS,
    },
}


@dataclass(frozen=True)
class LinkedCaseContext:
    case_id: str
    title: str
    description: str
    label: Label


@dataclass(frozen=True)
class SelectedCase:
    case_id: str
    title: str
    description: str
    reasons: tuple[tuple[ReasonSide, str], ...] = ()


@dataclass(frozen=True)
class PolicyContext:
    policy_id: str
    head_revision_id: str
    title: str
    description: str
    linked_cases: tuple[LinkedCaseContext, ...] = ()


@dataclass(frozen=True)
class AssistantContext:
    policy: Optional[PolicyContext] = None
    selected_cases: tuple[SelectedCase, ...] = ()


@dataclass(frozen=True)
class Suggestion:
    draft_kind: str  # "case" | "policy_revision" | "policy_creation"
    title: str
    description: str
    provenance: tuple[int, int]  # [start, end) span in the session transcript

    def __post_init__(self):
        if not self.title.strip():
            raise ValidationError("title", "suggested title must be non-empty")
        if not self.description.strip():
            raise ValidationError("description", "suggested description must be non-empty")

    def to_dict(self) -> dict:
        return {
            "draft_kind": self.draft_kind,
            "title": self.title,
            "description": self.description,
            "provenance": list(self.provenance),
        }


@dataclass
class AssistantSession:
    id: str
    user: str
    kind: SessionKind
    context: AssistantContext
    status: SessionStatus
    mode: Optional[BrainstormMode] = None
    transcript: list[tuple[str, str]] = field(default_factory=list)
    suggestions: list[Suggestion] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "user": self.user,
            "kind": self.kind.value,
            "status": self.status.value,
            "mode": self.mode.value if self.mode else None,
            "transcript": [{"role": role, "text": text} for role, text in self.transcript],
            "suggestions": [s.to_dict() for s in self.suggestions],
        }


# ---------------------------------------------------------------------------
# Providers


class TextProvider:
    """Single-operation provider contract: prompt in, completion out."""

    def text_complete(self, prompt: str, params: Optional[dict] = None) -> str:
        raise NotImplementedError


class StubProvider(TextProvider):
    """Deterministic offline provider: the completion is a pure function of the
    prompt, so identical session scripts yield identical transcripts."""

    def __init__(self):
        self.calls: list[str] = []
        self.fail_next = False

    def text_complete(self, prompt: str, params: Optional[dict] = None) -> str:
        if self.fail_next:
            self.fail_next = False
            raise TimeoutError("stub provider asked to fail")
        self.calls.append(prompt)
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:10]
        return (
            f"Title: Draft {digest}\n"
            f"Description: Deterministic draft {digest} derived from a {len(prompt)}-character prompt."
        )


class HttpTextProvider(TextProvider):
    """Adapter for any hosted completion endpoint speaking simple JSON.

    Configured via environment: endpoint URL, credential, model name, timeout.
    """

    ENV_URL = "AGORUM_PROVIDER_URL"
    ENV_CREDENTIAL = "AGORUM_PROVIDER_CREDENTIAL"
    ENV_MODEL = "AGORUM_PROVIDER_MODEL"
    ENV_TIMEOUT = "AGORUM_PROVIDER_TIMEOUT"

    def __init__(self, url: str, credential: str = "", model: str = "", timeout: float = 30.0):
        self.url = url
        self.credential = credential
        self.model = model
        self.timeout = timeout

    @classmethod
    def from_env(cls, env: Optional[dict] = None) -> "HttpTextProvider":
        env = env if env is not None else dict(os.environ)
        url = env.get(cls.ENV_URL)
        if not url:
            raise ProviderUnavailable(f"{cls.ENV_URL} is not configured")
        return cls(
            url=url,
            credential=env.get(cls.ENV_CREDENTIAL, ""),
            model=env.get(cls.ENV_MODEL, ""),
            timeout=float(env.get(cls.ENV_TIMEOUT, "30")),
        )

    def text_complete(self, prompt: str, params: Optional[dict] = None) -> str:
        import httpx

        body = {"model": self.model, "prompt": prompt}
        body.update(params or {})
        headers = {"Authorization": f"Bearer {self.credential}"} if self.credential else {}
        try:
            response = httpx.post(self.url, json=body, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            text = response.json().get("text")
        except Exception as exc:
            raise ProviderUnavailable(f"text provider failed: {exc}") from exc
        if not isinstance(text, str):
            raise ProviderUnavailable("text provider returned no completion text")
        return text


# ---------------------------------------------------------------------------
# Prompt assembly


def load_template(name: str) -> str:
    return resources.files("agorum").joinpath(f"prompts/{PROMPT_VERSION}/{name}.txt").read_text("utf-8")


_TEMPLATE_FOR = {
    (SessionKind.CASE_BRAINSTORM, BrainstormMode.CRITIQUE): "case_critique",
    (SessionKind.CASE_BRAINSTORM, BrainstormMode.ILLUSTRATIVE): "case_illustrative",
    (SessionKind.POLICY_REVISION, None): "policy_revision",
    (SessionKind.POLICY_CREATION, None): "policy_creation",
}


def _policy_block(context: AssistantContext) -> str:
    if context.policy is None:
        return "(no policy bound)"
    return f"{context.policy.title}\n{context.policy.description}"


def _cases_block(context: AssistantContext) -> str:
    lines = []
    if context.policy is not None:
        for linked in context.policy.linked_cases:
            lines.append(f"- [{linked.label.value}] {linked.title}: {linked.description}")
    for selected in context.selected_cases:
        lines.append(f"- [selected] {selected.title}: {selected.description}")
    return "\n".join(lines) if lines else "(none)"


def _reasons_block(context: AssistantContext) -> str:
    lines = []
    for selected in context.selected_cases:
        for side, text in selected.reasons:
            lines.append(f"- {selected.title} ({side.value}): {text}")
    return "\n".join(lines) if lines else "(none)"


def build_prompt(session: AssistantSession, instructions: Optional[str]) -> str:
    template_name = _TEMPLATE_FOR[(session.kind, session.mode if session.kind == SessionKind.CASE_BRAINSTORM else None)]
    template = load_template(template_name)
    prompt = template.format(
        policy=_policy_block(session.context),
        cases=_cases_block(session.context),
        reasons=_reasons_block(session.context),
        instructions=f"Additional instructions: {instructions}" if instructions else "",
    )
    if session.transcript:
        lines = "\n".join(f"{role}: {text}" for role, text in session.transcript)
        prompt = f"{prompt}\n\nConversation so far:\n{lines}"
    return prompt


def parse_draft(completion: str) -> tuple[str, str]:
    """Extract a ``Title:`` / ``Description:`` draft from a completion."""
    title = ""
    description_lines: list[str] = []
    in_description = False
    for line in completion.splitlines():
        stripped = line.strip()
        if stripped.lower().startswith("title:"):
            title = stripped[len("title:") :].strip()
            in_description = False
        elif stripped.lower().startswith("description:"):
            description_lines = [stripped[len("description:") :].strip()]
            in_description = True
        elif in_description:
            description_lines.append(stripped)
    description = "\n".join(filter(None, description_lines)).strip()
    if not title or not description:
        raise ProviderUnavailable("provider returned an unusable draft")
    return title, description


# ---------------------------------------------------------------------------
# Operations


def start_session(
    *,
    session_id: str,
    user: str,
    kind: SessionKind,
    context: AssistantContext,
) -> AssistantSession:
    if kind == SessionKind.CASE_BRAINSTORM:
        if context.policy is None:
            raise ContextMismatch("case brainstorming requires a policy")
    elif kind == SessionKind.POLICY_REVISION:
        if context.policy is None:
            raise ContextMismatch("policy revision requires a policy")
        _require_selected_cases_with_reasons(context)
    elif kind == SessionKind.POLICY_CREATION:
        _require_selected_cases_with_reasons(context)
    return AssistantSession(
        id=session_id, user=user, kind=kind, context=context, status=INITIAL_STATUS[kind]
    )


def _require_selected_cases_with_reasons(context: AssistantContext) -> None:
    if not context.selected_cases:
        raise ContextMismatch("at least one selected case is required")
    for selected in context.selected_cases:
        if not selected.reasons:
            raise ContextMismatch(f"selected case {selected.case_id} carries no reasons")


def _advance(session: AssistantSession, action: str) -> SessionStatus:
    next_status = FLOW[session.kind].get((session.status, action))
    if next_status is None:
        raise InvalidState(f"{action} is not valid for a {session.kind.value} session in {session.status.value}")
    return next_status


def choose_mode(session: AssistantSession, mode: BrainstormMode) -> AssistantSession:
    next_status = _advance(session, "choose_mode")
    session.mode = mode
    session.status = next_status
    session.transcript.append(("user", f"selected mode: {mode.value}"))
    return session


def generate(
    session: AssistantSession,
    provider: TextProvider,
    instructions: Optional[str] = None,
    params: Optional[dict] = None,
) -> Suggestion:
    next_status = _advance(session, "generate")
    prompt = build_prompt(session, instructions)
    try:
        completion = provider.text_complete(prompt, params)
    except ProviderUnavailable:
        raise
    except Exception as exc:
        raise ProviderUnavailable(f"text provider failed: {exc}") from exc
    title, description = parse_draft(completion)

    start = len(session.transcript)
    if instructions:
        session.transcript.append(("user", instructions))
    session.transcript.append(("assistant", completion))
    end = len(session.transcript)

    draft_kind = {
        SessionKind.CASE_BRAINSTORM: "case",
        SessionKind.POLICY_REVISION: "policy_revision",
        SessionKind.POLICY_CREATION: "policy_creation",
    }[session.kind]
    suggestion = Suggestion(draft_kind=draft_kind, title=title, description=description, provenance=(start, end))
    session.suggestions.append(suggestion)
    session.status = next_status
    return suggestion


def restart(session: AssistantSession) -> AssistantSession:
    next_status = _advance(session, "restart")
    session.status = next_status
    session.mode = None
    session.transcript.append(("system", "conversation restarted"))
    return session


def adopt(session: AssistantSession, suggestion: Suggestion, current_head_revision_id: Optional[str] = None) -> dict:
    """Turn a suggestion into a prefilled editor draft; persists nothing."""
    if suggestion not in session.suggestions:
        raise InvalidState("suggestion does not belong to this session")
    if suggestion.draft_kind == "case":
        return {"kind": "case", "title": suggestion.title, "description": suggestion.description}
    if suggestion.draft_kind == "policy_revision":
        policy = session.context.policy
        return {
            "kind": "policy_edit",
            "policy_id": policy.policy_id,
            "base_revision_id": current_head_revision_id or policy.head_revision_id,
            "new_title": suggestion.title,
            "new_description": suggestion.description,
        }
    return {
        "kind": "policy",
        "title": suggestion.title,
        "description": suggestion.description,
        "suggested_case_ids": [c.case_id for c in session.context.selected_cases],
    }
