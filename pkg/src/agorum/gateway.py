"""HTTP/JSON API under /v1: every route maps 1:1 onto a service operation.

Domain errors surface with their canonical status and machine-readable code
({"error": {"code", "message", ...}}); the mapping is total, so fuzzing any
route with bad input must never produce an unmapped 500. The OpenAPI
description is generated from the route table (FastAPI's /openapi.json).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, StreamingResponse
from pydantic import BaseModel, Field

from . import analytics, assistant, discussion, engine
from .errors import DomainError, UnknownCampaign, ValidationError
from .model import InspirationTag, Label, Phase, ReasonSide, Stance, VoteDirection
from .service import Platform, Principal


def _enum(enum_cls, raw, field: str):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ValidationError(field, f"{field} must be one of: {allowed}") from None


class ReasonBody(BaseModel):
    side: str
    text: str


class NewCaseBody(BaseModel):
    title: str
    description: str
    stance: Optional[str] = None
    reasons: list[ReasonBody] = Field(default_factory=list)


class LinkSpecBody(BaseModel):
    label: str
    case_id: Optional[str] = None
    new_case: Optional[NewCaseBody] = None


class CreateCampaignBody(BaseModel):
    title: str
    description: str = ""
    organizer_name: str = "organizer"
    config: Optional[dict] = None
    organizer_also_participates: bool = False


class InviteBody(BaseModel):
    display_name: str
    roles: list[str] = Field(default_factory=lambda: ["participant"])


class PhaseBody(BaseModel):
    target: str


class CreatePolicyBody(BaseModel):
    title: str
    description: str
    initial_links: list[LinkSpecBody] = Field(default_factory=list)
    inspiration: list[str] = Field(default_factory=list)


class EditBody(BaseModel):
    base_revision_id: str
    new_title: str
    new_description: str
    label_updates: dict[str, str] = Field(default_factory=dict)
    inspiration: list[str] = Field(default_factory=list)


class RevertBody(BaseModel):
    to_revision_id: str


class CreateCaseBody(BaseModel):
    title: str
    description: str
    stance: Optional[str] = None
    reasons: list[ReasonBody] = Field(default_factory=list)


class CaseVoteBody(BaseModel):
    stance: str


class AddReasonBody(BaseModel):
    side: str
    text: str


class CreateLinkBody(BaseModel):
    case_id: str
    label: str


class RelabelBody(BaseModel):
    label: str


class ScopeBody(BaseModel):
    kind: str
    target_id: Optional[str] = None


class OpenThreadBody(BaseModel):
    scope: ScopeBody
    title: str
    first_comment: str


class CommentBody(BaseModel):
    text: str


class MarkReadBody(BaseModel):
    ids: list[str]


class FinalVoteBody(BaseModel):
    direction: str
    public_reason: Optional[str] = None


class StartSessionBody(BaseModel):
    kind: str
    policy_id: Optional[str] = None
    selected_case_ids: list[str] = Field(default_factory=list)


class ChooseModeBody(BaseModel):
    mode: str


class GenerateBody(BaseModel):
    instructions: Optional[str] = None


class AdoptBody(BaseModel):
    suggestion_index: int = -1


def _reasons(items: list[ReasonBody]) -> tuple:
    return tuple((_enum(ReasonSide, r.side, "side"), r.text) for r in items)


def _link_specs(items: list[LinkSpecBody]) -> list[engine.LinkSpec]:
    specs = []
    for item in items:
        new_case = None
        if item.new_case is not None:
            new_case = engine.NewCaseSpec(
                title=item.new_case.title,
                description=item.new_case.description,
                stance=_enum(Stance, item.new_case.stance, "stance") if item.new_case.stance else None,
                reasons=_reasons(item.new_case.reasons),
            )
        specs.append(
            engine.LinkSpec(label=_enum(Label, item.label, "label"), case_id=item.case_id, new_case=new_case)
        )
    return specs


def _inspiration(tags: list[str]) -> frozenset:
    return frozenset(_enum(InspirationTag, tag, "inspiration") for tag in tags)


def create_app(platform: Platform, frontend_dir: Optional[str | Path] = None) -> FastAPI:
    app = FastAPI(title="agorum", version="1.0", docs_url="/v1/docs", openapi_url="/v1/openapi.json")

    @app.exception_handler(DomainError)
    async def domain_error_handler(request: Request, exc: DomainError):
        return JSONResponse(status_code=exc.http_status, content={"error": exc.to_dict()})

    @app.exception_handler(RequestValidationError)
    async def request_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "request_invalid", "message": str(exc.errors()[:3])}},
        )

    def principal(authorization: Optional[str] = Header(default=None)) -> Principal:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:].strip()
        return platform.authenticate(token)

    # -- campaigns -----------------------------------------------------------

    @app.post("/v1/campaigns", status_code=201)
    def create_campaign(body: CreateCampaignBody):
        from .model import CampaignConfig

        config = CampaignConfig.from_dict(body.config) if body.config else None
        view, organizer = platform.create_campaign(
            title=body.title,
            description=body.description,
            organizer_name=body.organizer_name,
            config=config,
            organizer_also_participates=body.organizer_also_participates,
        )
        return {"campaign": view, "token": organizer.token, "user_id": organizer.user_id}

    def _check_campaign(principal: Principal, campaign_id: str) -> str:
        if principal.campaign_id != campaign_id:
            raise UnknownCampaign(f"no such campaign: {campaign_id}")
        return campaign_id

    @app.get("/v1/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str, who: Principal = Depends(principal)):
        return platform.campaign_view(_check_campaign(who, campaign_id))

    @app.post("/v1/campaigns/{campaign_id}/invites", status_code=201)
    def invite(campaign_id: str, body: InviteBody, who: Principal = Depends(principal)):
        minted = platform.invite(
            _check_campaign(who, campaign_id), actor=who.user_id, display_name=body.display_name, roles=body.roles
        )
        return {"token": minted.token, "user_id": minted.user_id, "roles": sorted(minted.roles)}

    @app.post("/v1/campaigns/{campaign_id}/phase")
    def advance_phase(campaign_id: str, body: PhaseBody, who: Principal = Depends(principal)):
        target = _enum(Phase, body.target, "target")
        return platform.advance_phase(_check_campaign(who, campaign_id), actor=who.user_id, target=target)

    @app.get("/v1/campaigns/{campaign_id}/ballot")
    def ballot(campaign_id: str, who: Principal = Depends(principal)):
        return platform.ballot_view(_check_campaign(who, campaign_id), viewer=who.user_id)

    @app.get("/v1/campaigns/{campaign_id}/report")
    def report(campaign_id: str, format: str = Query(default="json"), who: Principal = Depends(principal)):
        result = platform.report(_check_campaign(who, campaign_id))
        if format == "csv":
            return PlainTextResponse(analytics.report_csv(result), media_type="text/csv")
        return result.to_dict()

    @app.get("/v1/campaigns/{campaign_id}/feed")
    def feed(
        campaign_id: str,
        from_seq: int = Query(default=1, ge=1),
        wait: bool = Query(default=True),
        who: Principal = Depends(principal),
    ):
        _check_campaign(who, campaign_id)

        def stream():
            for event in platform.feed(campaign_id, from_seq=from_seq, wait=wait):
                yield json.dumps(event.to_dict(), sort_keys=True) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.get("/v1/me")
    def me(who: Principal = Depends(principal)):
        return {
            "user_id": who.user_id,
            "display_name": who.display_name,
            "roles": sorted(who.roles),
            "campaign_id": who.campaign_id,
        }

    # -- policies --------------------------------------------------------------

    @app.get("/v1/policies")
    def list_policies(who: Principal = Depends(principal)):
        return platform.list_policies(who.campaign_id, viewer=who.user_id)

    @app.post("/v1/policies", status_code=201)
    def create_policy(body: CreatePolicyBody, who: Principal = Depends(principal)):
        return platform.create_policy(
            who.campaign_id,
            author=who.user_id,
            title=body.title,
            description=body.description,
            initial_links=_link_specs(body.initial_links),
            inspiration=_inspiration(body.inspiration),
        )

    @app.get("/v1/policies/{policy_id}")
    def get_policy(policy_id: str, who: Principal = Depends(principal)):
        return platform.policy_view(who.campaign_id, policy_id, viewer=who.user_id)

    @app.post("/v1/policies/{policy_id}/edits", status_code=201)
    def submit_edit(policy_id: str, body: EditBody, who: Principal = Depends(principal)):
        submission = engine.EditSubmission(
            policy_id=policy_id,
            base_revision_id=body.base_revision_id,
            new_title=body.new_title,
            new_description=body.new_description,
            label_updates=tuple(
                sorted((cid, _enum(Label, lab, "label_updates")) for cid, lab in body.label_updates.items())
            ),
            author=who.user_id,
            inspiration=_inspiration(body.inspiration),
        )
        outcome = platform.submit_edit(who.campaign_id, submission)
        if isinstance(outcome, engine.ConflictReport):
            return JSONResponse(
                status_code=409,
                content={
                    "error": {"code": "edit_conflict", "message": "the policy changed while you were editing"},
                    "conflict": outcome.to_dict(),
                },
            )
        return outcome

    @app.post("/v1/policies/{policy_id}/revert", status_code=201)
    def revert(policy_id: str, body: RevertBody, who: Principal = Depends(principal)):
        return platform.revert_policy(
            who.campaign_id, actor=who.user_id, policy_id=policy_id, to_revision_id=body.to_revision_id
        )

    @app.get("/v1/policies/{policy_id}/history")
    def history(policy_id: str, who: Principal = Depends(principal)):
        return platform.policy_history(who.campaign_id, policy_id)

    @app.post("/v1/policies/{policy_id}/links", status_code=201)
    def link_case(policy_id: str, body: CreateLinkBody, who: Principal = Depends(principal)):
        return platform.link_case(
            who.campaign_id,
            actor=who.user_id,
            policy_id=policy_id,
            case_id=body.case_id,
            label=_enum(Label, body.label, "label"),
        )

    @app.patch("/v1/policies/{policy_id}/links/{case_id}")
    def relabel(policy_id: str, case_id: str, body: RelabelBody, who: Principal = Depends(principal)):
        return platform.relabel(
            who.campaign_id,
            actor=who.user_id,
            policy_id=policy_id,
            case_id=case_id,
            new_label=_enum(Label, body.label, "label"),
        )

    @app.delete("/v1/policies/{policy_id}/links/{case_id}", status_code=204)
    def unlink(policy_id: str, case_id: str, who: Principal = Depends(principal)):
        platform.unlink_case(who.campaign_id, actor=who.user_id, policy_id=policy_id, case_id=case_id)

    @app.post("/v1/policies/{policy_id}/final-votes", status_code=204)
    def final_vote(policy_id: str, body: FinalVoteBody, who: Principal = Depends(principal)):
        platform.cast_policy_vote(
            who.campaign_id,
            voter=who.user_id,
            policy_id=policy_id,
            direction=_enum(VoteDirection, body.direction, "direction"),
            public_reason=body.public_reason,
        )

    @app.post("/v1/policies/{policy_id}/follow", status_code=204)
    def follow(policy_id: str, who: Principal = Depends(principal)):
        platform.follow_policy(who.campaign_id, user=who.user_id, policy_id=policy_id, follow=True)

    @app.delete("/v1/policies/{policy_id}/follow", status_code=204)
    def unfollow(policy_id: str, who: Principal = Depends(principal)):
        platform.follow_policy(who.campaign_id, user=who.user_id, policy_id=policy_id, follow=False)

    # -- cases -------------------------------------------------------------------

    @app.get("/v1/cases")
    def list_cases(
        q: Optional[str] = Query(default=None),
        author: Optional[str] = Query(default=None),
        who: Principal = Depends(principal),
    ):
        return platform.list_cases(who.campaign_id, viewer=who.user_id, query=q, author=author)

    @app.post("/v1/cases", status_code=201)
    def create_case(body: CreateCaseBody, who: Principal = Depends(principal)):
        return platform.create_case(
            who.campaign_id,
            author=who.user_id,
            title=body.title,
            description=body.description,
            stance=_enum(Stance, body.stance, "stance") if body.stance else None,
            reasons=_reasons(body.reasons),
        )

    @app.get("/v1/cases/{case_id}")
    def get_case(case_id: str, who: Principal = Depends(principal)):
        return platform.case_view(who.campaign_id, case_id, viewer=who.user_id)

    @app.post("/v1/cases/{case_id}/votes")
    def vote_case(case_id: str, body: CaseVoteBody, who: Principal = Depends(principal)):
        return platform.vote_case(
            who.campaign_id, voter=who.user_id, case_id=case_id, stance=_enum(Stance, body.stance, "stance")
        )

    @app.post("/v1/cases/{case_id}/reasons", status_code=201)
    def add_reason(case_id: str, body: AddReasonBody, who: Principal = Depends(principal)):
        return platform.add_reason(
            who.campaign_id,
            author=who.user_id,
            case_id=case_id,
            side=_enum(ReasonSide, body.side, "side"),
            text=body.text,
        )

    @app.post("/v1/reasons/{reason_id}/likes")
    def like_reason(reason_id: str, who: Principal = Depends(principal)):
        return {"likes": platform.like_reason(who.campaign_id, user=who.user_id, reason_id=reason_id)}

    # -- discussion ---------------------------------------------------------------

    @app.get("/v1/threads")
    def list_threads(
        scope_kind: Optional[str] = Query(default=None),
        scope_target: Optional[str] = Query(default=None),
        who: Principal = Depends(principal),
    ):
        scope = None
        if scope_kind is not None:
            scope = discussion.ThreadScope(
                kind=_enum(discussion.ScopeKind, scope_kind, "scope_kind"), target_id=scope_target
            )
        return platform.list_threads(who.campaign_id, scope=scope)

    @app.post("/v1/threads", status_code=201)
    def open_thread(body: OpenThreadBody, who: Principal = Depends(principal)):
        scope = discussion.ThreadScope(
            kind=_enum(discussion.ScopeKind, body.scope.kind, "scope"), target_id=body.scope.target_id
        )
        return platform.open_thread(
            who.campaign_id, author=who.user_id, scope=scope, title=body.title, first_comment=body.first_comment
        )

    @app.get("/v1/threads/{thread_id}")
    def get_thread(thread_id: str, who: Principal = Depends(principal)):
        return platform.thread_view(who.campaign_id, thread_id)

    @app.post("/v1/threads/{thread_id}/comments", status_code=201)
    def reply(thread_id: str, body: CommentBody, who: Principal = Depends(principal)):
        return platform.reply(who.campaign_id, author=who.user_id, thread_id=thread_id, text=body.text)

    @app.post("/v1/threads/{thread_id}/close")
    def close_thread(thread_id: str, who: Principal = Depends(principal)):
        return platform.set_thread_status(
            who.campaign_id, actor=who.user_id, thread_id=thread_id, status=discussion.ThreadStatus.CLOSED
        )

    @app.post("/v1/threads/{thread_id}/reopen")
    def reopen_thread(thread_id: str, who: Principal = Depends(principal)):
        return platform.set_thread_status(
            who.campaign_id, actor=who.user_id, thread_id=thread_id, status=discussion.ThreadStatus.OPEN
        )

    @app.get("/v1/notifications")
    def notifications(unread_only: bool = Query(default=False), who: Principal = Depends(principal)):
        return platform.notifications(who.campaign_id, user=who.user_id, unread_only=unread_only)

    @app.post("/v1/notifications/read", status_code=204)
    def mark_read(body: MarkReadBody, who: Principal = Depends(principal)):
        platform.mark_read(who.campaign_id, user=who.user_id, notification_ids=body.ids)

    @app.get("/v1/activity")
    def activity(period: Optional[int] = Query(default=None), who: Principal = Depends(principal)):
        return platform.activity(who.campaign_id, user=who.user_id, period_index=period)

    # -- assistant -------------------------------------------------------------------

    @app.post("/v1/assistant/sessions", status_code=201)
    def start_session(body: StartSessionBody, who: Principal = Depends(principal)):
        session = platform.start_assistant_session(
            who.campaign_id,
            user=who.user_id,
            kind=_enum(assistant.SessionKind, body.kind, "kind"),
            policy_id=body.policy_id,
            selected_case_ids=body.selected_case_ids,
        )
        return session.to_dict()

    @app.get("/v1/assistant/sessions/{session_id}")
    def get_session(session_id: str, who: Principal = Depends(principal)):
        return platform.assistant_session(session_id).to_dict()

    @app.post("/v1/assistant/sessions/{session_id}/mode")
    def choose_mode(session_id: str, body: ChooseModeBody, who: Principal = Depends(principal)):
        mode = _enum(assistant.BrainstormMode, body.mode, "mode")
        return platform.assistant_choose_mode(session_id, mode).to_dict()

    @app.post("/v1/assistant/sessions/{session_id}/generate")
    def generate(session_id: str, body: GenerateBody, who: Principal = Depends(principal)):
        suggestion = platform.assistant_generate(session_id, body.instructions)
        return {"suggestion": suggestion.to_dict(), "session": platform.assistant_session(session_id).to_dict()}

    @app.post("/v1/assistant/sessions/{session_id}/restart")
    def restart(session_id: str, who: Principal = Depends(principal)):
        return platform.assistant_restart(session_id).to_dict()

    @app.post("/v1/assistant/sessions/{session_id}/adopt")
    def adopt(session_id: str, body: AdoptBody, who: Principal = Depends(principal)):
        session = platform.assistant_session(session_id)
        index = body.suggestion_index if body.suggestion_index >= 0 else len(session.suggestions) - 1
        return platform.assistant_adopt(who.campaign_id, session_id, index)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="frontend")

    return app
