"""The hosting service: binds the event log to the pure engine.

One serialized writer per campaign (commands decide, append, then fold under
the campaign lock), many concurrent snapshot readers. Auth principals live
beside the log, never inside it, so event dumps stay token-free.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterator, Optional, Sequence
from uuid import uuid4

from . import analytics, assistant, discussion, engine, store
from .errors import (
    NotOrganizer,
    UnknownCampaign,
    UnknownCase,
    UnknownPolicy,
    UnknownSession,
    Unauthorized,
    ValidationError,
)
from .events import Event
from .model import (
    CampaignConfig,
    InspirationTag,
    Label,
    Phase,
    ReasonSide,
    Stance,
    VoteDirection,
)


@dataclass(frozen=True)
class Principal:
    token: str
    campaign_id: str
    user_id: str
    display_name: str
    roles: frozenset[str]

    @property
    def is_organizer(self) -> bool:
        return "organizer" in self.roles


def _default_ids(prefix: str) -> str:
    return f"{prefix}_{uuid4().hex[:10]}"


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class Platform:
    def __init__(
        self,
        log: Optional[store.EventLog] = None,
        *,
        clock: Callable[[], datetime] = _utcnow,
        ids: Callable[[str], str] = _default_ids,
        provider: Optional[assistant.TextProvider] = None,
    ):
        self.log = log if log is not None else store.MemoryEventLog()
        self.clock = clock
        self.ids = ids
        self.provider = provider if provider is not None else assistant.StubProvider()
        self._states: dict[str, engine.CampaignState] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._wakeups: dict[str, threading.Condition] = {}
        self._registry_lock = threading.RLock()
        self._principals: dict[str, Principal] = {}
        self._sessions: dict[str, assistant.AssistantSession] = {}
        self._sessions_lock = threading.RLock()
        self._recover()

    # -- infrastructure ----------------------------------------------------

    def _recover(self) -> None:
        for campaign_id in self.log.campaign_ids():
            self._states[campaign_id] = engine.replay(self.log.read(campaign_id))
            self._locks[campaign_id] = threading.RLock()
            self._wakeups[campaign_id] = threading.Condition()
        if isinstance(self.log, store.SqliteEventLog):
            for token, campaign_id, user_id, display_name, roles in self.log.load_principals():
                self._principals[token] = Principal(
                    token=token,
                    campaign_id=campaign_id,
                    user_id=user_id,
                    display_name=display_name,
                    roles=frozenset(roles),
                )

    def _lock(self, campaign_id: str) -> threading.RLock:
        with self._registry_lock:
            if campaign_id not in self._locks:
                self._locks[campaign_id] = threading.RLock()
                self._wakeups[campaign_id] = threading.Condition()
            return self._locks[campaign_id]

    def wakeup(self, campaign_id: str) -> threading.Condition:
        self._lock(campaign_id)
        return self._wakeups[campaign_id]

    def state(self, campaign_id: str) -> engine.CampaignState:
        state = self._states.get(campaign_id)
        if state is None or state.campaign is None:
            raise UnknownCampaign(f"no such campaign: {campaign_id}")
        return state

    def _commit(self, campaign_id: str, events: list[Event]) -> list[Event]:
        if not events:
            return []
        stored = self.log.append(events)
        state = self._states.setdefault(campaign_id, engine.CampaignState())
        for event in stored:
            engine.apply_event(state, event)
        wakeup = self._wakeups[campaign_id]
        with wakeup:
            wakeup.notify_all()
        return stored

    def _mint_principal(self, campaign_id: str, user_id: str, display_name: str, roles: Sequence[str]) -> Principal:
        principal = Principal(
            token=secrets.token_urlsafe(24),
            campaign_id=campaign_id,
            user_id=user_id,
            display_name=display_name,
            roles=frozenset(roles),
        )
        self._principals[principal.token] = principal
        if isinstance(self.log, store.SqliteEventLog):
            self.log.save_principal(
                principal.token, campaign_id, user_id, display_name, sorted(principal.roles)
            )
        return principal

    def authenticate(self, token: Optional[str]) -> Principal:
        if not token or token not in self._principals:
            raise Unauthorized("a valid bearer token is required")
        return self._principals[token]

    # -- campaign lifecycle -------------------------------------------------

    def create_campaign(
        self,
        *,
        title: str,
        description: str = "",
        organizer_name: str = "organizer",
        config: Optional[CampaignConfig] = None,
        organizer_also_participates: bool = False,
    ) -> tuple[dict, Principal]:
        campaign_id = self.ids("campaign")
        organizer_id = self.ids("user")
        events = engine.decide_create_campaign(
            campaign_id=campaign_id,
            title=title,
            description=description,
            organizer=organizer_id,
            organizer_name=organizer_name,
            config=config or CampaignConfig(),
            now=self.clock(),
        )
        with self._lock(campaign_id):
            self._commit(campaign_id, events)
            if organizer_also_participates:
                join = engine.decide_join(
                    self.state(campaign_id),
                    user_id=organizer_id,
                    display_name=organizer_name,
                    roles=["participant"],
                    now=self.clock(),
                )
                self._commit(campaign_id, join)
        principal = self._mint_principal(campaign_id, organizer_id, organizer_name, ["organizer", "participant"] if organizer_also_participates else ["organizer"])
        return self.campaign_view(campaign_id), principal

    def invite(self, campaign_id: str, *, actor: str, display_name: str, roles: Sequence[str] = ("participant",)) -> Principal:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
            if actor not in state.require_campaign().organizer_ids:
                raise NotOrganizer("only organizers can mint invites")
            user_id = self.ids("user")
            events = engine.decide_join(
                state, user_id=user_id, display_name=display_name, roles=roles, now=self.clock()
            )
            self._commit(campaign_id, events)
        return self._mint_principal(campaign_id, user_id, display_name, roles)

    def advance_phase(self, campaign_id: str, *, actor: str, target: Phase) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_advance_phase(self.state(campaign_id), actor=actor, target=target, now=self.clock())
            self._commit(campaign_id, events)
            return self.campaign_view(campaign_id)

    # -- policies ------------------------------------------------------------

    def create_policy(
        self,
        campaign_id: str,
        *,
        author: str,
        title: str,
        description: str,
        initial_links: Sequence[engine.LinkSpec] = (),
        inspiration: Sequence[InspirationTag] = (),
    ) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_create_policy(
                self.state(campaign_id),
                author=author,
                title=title,
                description=description,
                initial_links=initial_links,
                inspiration=frozenset(inspiration),
                ids=self.ids,
                now=self.clock(),
            )
            stored = self._commit(campaign_id, events)
            policy_id = stored[-1].payload["policy"]["id"]
            return self.policy_view(campaign_id, policy_id, viewer=author)

    def submit_edit(self, campaign_id: str, submission: engine.EditSubmission):
        """Returns the new head revision dict, or a ConflictReport (no change)."""
        with self._lock(campaign_id):
            outcome = engine.decide_edit(self.state(campaign_id), submission, ids=self.ids, now=self.clock())
            if isinstance(outcome, engine.ConflictReport):
                return outcome
            stored = self._commit(campaign_id, outcome)
            return stored[-1].payload["revision"]

    def revert_policy(self, campaign_id: str, *, actor: str, policy_id: str, to_revision_id: str) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_revert(
                self.state(campaign_id),
                actor=actor,
                policy_id=policy_id,
                to_revision_id=to_revision_id,
                ids=self.ids,
                now=self.clock(),
            )
            stored = self._commit(campaign_id, events)
            return stored[-1].payload["revision"]

    # -- cases ----------------------------------------------------------------

    def create_case(
        self,
        campaign_id: str,
        *,
        author: str,
        title: str,
        description: str,
        stance: Optional[Stance],
        reasons: Sequence[tuple[ReasonSide, str]] = (),
    ) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_create_case(
                self.state(campaign_id),
                author=author,
                title=title,
                description=description,
                stance=stance,
                reasons=reasons,
                ids=self.ids,
                now=self.clock(),
            )
            stored = self._commit(campaign_id, events)
            return self.case_view(campaign_id, stored[0].payload["case"]["id"], viewer=author)

    def link_case(self, campaign_id: str, *, actor: str, policy_id: str, case_id: str, label: Label) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_link_case(
                self.state(campaign_id), actor=actor, policy_id=policy_id, case_id=case_id, label=label, now=self.clock()
            )
            self._commit(campaign_id, events)
            return self._link_view(self.state(campaign_id), policy_id, case_id, viewer=actor)

    def unlink_case(self, campaign_id: str, *, actor: str, policy_id: str, case_id: str) -> None:
        with self._lock(campaign_id):
            events = engine.decide_unlink_case(
                self.state(campaign_id), actor=actor, policy_id=policy_id, case_id=case_id, now=self.clock()
            )
            self._commit(campaign_id, events)

    def relabel(self, campaign_id: str, *, actor: str, policy_id: str, case_id: str, new_label: Label) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_relabel(
                self.state(campaign_id), actor=actor, policy_id=policy_id, case_id=case_id, new_label=new_label, now=self.clock()
            )
            self._commit(campaign_id, events)
            return self._link_view(self.state(campaign_id), policy_id, case_id, viewer=actor)

    def vote_case(self, campaign_id: str, *, voter: str, case_id: str, stance: Stance) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_vote_case(self.state(campaign_id), voter=voter, case_id=case_id, stance=stance, now=self.clock())
            self._commit(campaign_id, events)
            return engine.tally_for_case(self.state(campaign_id), case_id).to_dict()

    def add_reason(self, campaign_id: str, *, author: str, case_id: str, side: ReasonSide, text: str) -> dict:
        with self._lock(campaign_id):
            events = engine.decide_add_reason(
                self.state(campaign_id), author=author, case_id=case_id, side=side, text=text, ids=self.ids, now=self.clock()
            )
            stored = self._commit(campaign_id, events)
            return stored[0].payload["reason"]

    def like_reason(self, campaign_id: str, *, user: str, reason_id: str) -> int:
        with self._lock(campaign_id):
            events = engine.decide_like_reason(self.state(campaign_id), user=user, reason_id=reason_id, now=self.clock())
            self._commit(campaign_id, events)
            return len(self.state(campaign_id).reasons[reason_id].likes)

    # -- finalization -----------------------------------------------------------

    def cast_policy_vote(
        self, campaign_id: str, *, voter: str, policy_id: str, direction: VoteDirection, public_reason: Optional[str] = None
    ) -> None:
        with self._lock(campaign_id):
            events = engine.decide_policy_vote(
                self.state(campaign_id),
                voter=voter,
                policy_id=policy_id,
                direction=direction,
                public_reason=public_reason,
                now=self.clock(),
            )
            self._commit(campaign_id, events)

    def report(self, campaign_id: str) -> analytics.CampaignReport:
        with self._lock(campaign_id):
            return analytics.campaign_report(self.state(campaign_id))

    # -- discussion ----------------------------------------------------------

    def open_thread(self, campaign_id: str, *, author: str, scope: discussion.ThreadScope, title: str, first_comment: str) -> dict:
        with self._lock(campaign_id):
            events = discussion.decide_open_thread(
                self.state(campaign_id), author=author, scope=scope, title=title, first_comment=first_comment, ids=self.ids, now=self.clock()
            )
            stored = self._commit(campaign_id, events)
            return self.thread_view(campaign_id, stored[0].payload["thread"]["id"])

    def reply(self, campaign_id: str, *, author: str, thread_id: str, text: str) -> dict:
        with self._lock(campaign_id):
            events = discussion.decide_reply(
                self.state(campaign_id), author=author, thread_id=thread_id, text=text, ids=self.ids, now=self.clock()
            )
            stored = self._commit(campaign_id, events)
            return stored[0].payload["comment"]

    def set_thread_status(self, campaign_id: str, *, actor: str, thread_id: str, status: discussion.ThreadStatus) -> dict:
        with self._lock(campaign_id):
            events = discussion.decide_set_thread_status(
                self.state(campaign_id), actor=actor, thread_id=thread_id, status=status, now=self.clock()
            )
            self._commit(campaign_id, events)
            return self.thread_view(campaign_id, thread_id)

    def follow_policy(self, campaign_id: str, *, user: str, policy_id: str, follow: bool = True) -> None:
        with self._lock(campaign_id):
            events = discussion.decide_follow(self.state(campaign_id), user=user, policy_id=policy_id, follow=follow, now=self.clock())
            self._commit(campaign_id, events)

    def notifications(self, campaign_id: str, *, user: str, unread_only: bool = False) -> list[dict]:
        with self._lock(campaign_id):
            return [n.to_dict() for n in discussion.list_notifications(self.state(campaign_id), user, unread_only)]

    def mark_read(self, campaign_id: str, *, user: str, notification_ids: Sequence[str]) -> None:
        with self._lock(campaign_id):
            events = discussion.decide_mark_read(
                self.state(campaign_id), user=user, notification_ids=notification_ids, now=self.clock()
            )
            self._commit(campaign_id, events)

    def activity(self, campaign_id: str, *, user: str, period_index: Optional[int] = None) -> dict:
        with self._lock(campaign_id):
            return self._activity_locked(campaign_id, user, period_index)

    def _activity_locked(self, campaign_id: str, user: str, period_index: Optional[int]) -> dict:
        state = self.state(campaign_id)
        period = None
        if period_index is not None:
            periods = state.require_campaign().config.periods
            if not 0 <= period_index < len(periods):
                raise ValidationError("period", f"no such period index: {period_index}")
            period = periods[period_index]
        entries = [e.to_dict() for e in discussion.activity_log(state, user, period)]
        payload: dict = {"entries": entries}
        if period is not None:
            payload["participation"] = discussion.participation_status(state, user, period)
        return payload

    # -- assistant -------------------------------------------------------------

    def start_assistant_session(
        self,
        campaign_id: str,
        *,
        user: str,
        kind: assistant.SessionKind,
        policy_id: Optional[str] = None,
        selected_case_ids: Sequence[str] = (),
    ) -> assistant.AssistantSession:
        state = self.state(campaign_id)
        context = self._assistant_context(state, user=user, policy_id=policy_id, selected_case_ids=selected_case_ids)
        session = assistant.start_session(session_id=self.ids("session"), user=user, kind=kind, context=context)
        with self._sessions_lock:
            self._sessions[session.id] = session
        return session

    def _assistant_context(
        self, state: engine.CampaignState, *, user: str, policy_id: Optional[str], selected_case_ids: Sequence[str]
    ) -> assistant.AssistantContext:
        policy_ctx = None
        if policy_id is not None:
            if policy_id not in state.policies:
                raise UnknownPolicy(f"no such policy: {policy_id}")
            head = state.head_revision(policy_id)
            linked = tuple(
                assistant.LinkedCaseContext(
                    case_id=link.case_id,
                    title=state.cases[link.case_id].title,
                    description=state.cases[link.case_id].description,
                    label=link.label,
                )
                for link in state.links_of_policy(policy_id)
            )
            policy_ctx = assistant.PolicyContext(
                policy_id=policy_id,
                head_revision_id=head.revision_id,
                title=head.title,
                description=head.description,
                linked_cases=linked,
            )
        selected = []
        for case_id in selected_case_ids:
            case = state.cases.get(case_id)
            if case is None:
                raise UnknownCase(f"no such case: {case_id}")
            own_reasons = tuple(
                (reason.side, reason.text) for reason in state.reasons_of_case(case_id) if reason.author == user
            )
            selected.append(
                assistant.SelectedCase(case_id=case_id, title=case.title, description=case.description, reasons=own_reasons)
            )
        return assistant.AssistantContext(policy=policy_ctx, selected_cases=tuple(selected))

    def assistant_session(self, session_id: str) -> assistant.AssistantSession:
        with self._sessions_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no such assistant session: {session_id}")
        return session

    def assistant_choose_mode(self, session_id: str, mode: assistant.BrainstormMode) -> assistant.AssistantSession:
        with self._sessions_lock:
            return assistant.choose_mode(self.assistant_session(session_id), mode)

    def assistant_generate(self, session_id: str, instructions: Optional[str] = None) -> assistant.Suggestion:
        with self._sessions_lock:
            return assistant.generate(self.assistant_session(session_id), self.provider, instructions)

    def assistant_restart(self, session_id: str) -> assistant.AssistantSession:
        with self._sessions_lock:
            return assistant.restart(self.assistant_session(session_id))

    def assistant_adopt(self, campaign_id: str, session_id: str, suggestion_index: int) -> dict:
        session = self.assistant_session(session_id)
        if not 0 <= suggestion_index < len(session.suggestions):
            raise ValidationError("suggestion", f"no suggestion at index {suggestion_index}")
        suggestion = session.suggestions[suggestion_index]
        current_head = None
        if suggestion.draft_kind == "policy_revision" and session.context.policy is not None:
            state = self.state(campaign_id)
            policy = state.policies.get(session.context.policy.policy_id)
            if policy is not None:
                current_head = policy.head_revision_id
        return assistant.adopt(session, suggestion, current_head)

    # -- views -------------------------------------------------------------

    def campaign_view(self, campaign_id: str) -> dict:
        with self._lock(campaign_id):
            return self._campaign_view_locked(campaign_id)

    def _campaign_view_locked(self, campaign_id: str) -> dict:
        state = self.state(campaign_id)
        campaign = state.require_campaign()
        view = campaign.to_dict()
        view["n_policies"] = len(state.policies)
        view["n_cases"] = len(state.cases)
        view["display_names"] = dict(state.display_names)
        if state.ballot is not None:
            view["ballot"] = list(state.ballot)
        return view

    def _tally_block(self, state: engine.CampaignState, case_id: str, viewer: Optional[str]) -> dict:
        # Vote counts stay hidden until the viewer has cast their own vote.
        if viewer is not None and engine.viewer_has_voted(state, case_id, viewer):
            return {"votes_hidden": False, "tally": engine.tally_for_case(state, case_id).to_dict()}
        return {"votes_hidden": True}

    def _link_view(self, state: engine.CampaignState, policy_id: str, case_id: str, viewer: Optional[str]) -> dict:
        link = state.links[(policy_id, case_id)]
        case = state.cases[case_id]
        view = link.to_dict()
        view["case_title"] = case.title
        view["case_description"] = case.description
        view["alert"] = engine.alert_for_link(state, policy_id, case_id).value
        view.update(self._tally_block(state, case_id, viewer))
        return view

    def list_policies(self, campaign_id: str, *, viewer: Optional[str] = None) -> list[dict]:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
            return [self.policy_view(campaign_id, policy_id, viewer=viewer) for policy_id in sorted(state.policies)]

    def policy_view(self, campaign_id: str, policy_id: str, *, viewer: Optional[str] = None) -> dict:
        with self._lock(campaign_id):
            return self._policy_view_locked(campaign_id, policy_id, viewer)

    def _policy_view_locked(self, campaign_id: str, policy_id: str, viewer: Optional[str]) -> dict:
        state = self.state(campaign_id)
        policy = state.policies.get(policy_id)
        if policy is None:
            raise UnknownPolicy(f"no such policy: {policy_id}")
        head = state.head_revision(policy_id)
        links = [self._link_view(state, policy_id, link.case_id, viewer) for link in state.links_of_policy(policy_id)]
        up, down = engine.policy_vote_counts(state, policy_id)
        view = policy.to_dict()
        view.update(
            {
                "title": head.title,
                "description": head.description,
                "head_revision": head.to_dict(),
                "links": links,
                "history_length": len(state.policy_chains[policy_id]),
                "finalization_eligible": policy_id in engine.eligible_policy_ids(state),
                "followed_by_viewer": bool(viewer and state.follows.get((policy_id, viewer))),
            }
        )
        if state.require_campaign().phase in (Phase.FINALIZATION, Phase.CLOSED):
            view["final_votes"] = {"up": up, "down": down}
            view["public_reasons"] = sorted(
                vote.public_reason
                for (pid, _), vote in state.policy_votes.items()
                if pid == policy_id and vote.public_reason
            )
        return view

    def policy_history(self, campaign_id: str, policy_id: str) -> list[dict]:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
        if policy_id not in state.policies:
            raise UnknownPolicy(f"no such policy: {policy_id}")
        return [r.to_dict() for r in state.chain(policy_id)]

    def list_cases(self, campaign_id: str, *, viewer: Optional[str] = None, query: Optional[str] = None, author: Optional[str] = None) -> list[dict]:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
        views = []
        for case_id in sorted(state.cases):
            case = state.cases[case_id]
            if query and query.lower() not in f"{case.title}\n{case.description}".lower():
                continue
            if author and case.author != author:
                continue
            views.append(self.case_view(campaign_id, case_id, viewer=viewer))
        return views

    def case_view(self, campaign_id: str, case_id: str, *, viewer: Optional[str] = None) -> dict:
        with self._lock(campaign_id):
            return self._case_view_locked(campaign_id, case_id, viewer)

    def _case_view_locked(self, campaign_id: str, case_id: str, viewer: Optional[str]) -> dict:
        state = self.state(campaign_id)
        case = state.cases.get(case_id)
        if case is None:
            raise UnknownCase(f"no such case: {case_id}")
        view = case.to_dict()
        view.update(self._tally_block(state, case_id, viewer))
        view["viewer_stance"] = (
            state.case_votes[(case_id, viewer)].stance.value
            if viewer is not None and (case_id, viewer) in state.case_votes
            else None
        )
        view["reasons"] = [
            {
                "id": reason.id,
                "side": reason.side.value,
                "text": reason.text,
                "likes": len(reason.likes),
                "liked_by_viewer": viewer in reason.likes,
            }
            for reason in state.reasons_of_case(case_id)
        ]
        view["linked_policies"] = [
            {"policy_id": link.policy_id, "label": link.label.value} for link in state.links_of_case(case_id)
        ]
        return view

    def thread_view(self, campaign_id: str, thread_id: str) -> dict:
        with self._lock(campaign_id):
            return self._thread_view_locked(campaign_id, thread_id)

    def _thread_view_locked(self, campaign_id: str, thread_id: str) -> dict:
        state = self.state(campaign_id)
        thread = state.threads.get(thread_id)
        if thread is None:
            from .errors import UnknownThread

            raise UnknownThread(f"no such thread: {thread_id}")
        view = thread.to_dict()
        view["comments"] = [state.comments[cid].to_dict() for cid in state.thread_comments.get(thread_id, [])]
        return view

    def list_threads(self, campaign_id: str, *, scope: Optional[discussion.ThreadScope] = None) -> list[dict]:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
        threads = sorted(state.threads.values(), key=lambda t: t.id)
        if scope is not None:
            threads = [t for t in threads if t.scope == scope]
        return [self.thread_view(campaign_id, t.id) for t in threads]

    def ballot_view(self, campaign_id: str, *, viewer: Optional[str] = None) -> list[dict]:
        with self._lock(campaign_id):
            state = self.state(campaign_id)
        entries = []
        for policy_id in engine.ballot_policy_ids(state):
            head = state.head_revision(policy_id)
            up, down = engine.policy_vote_counts(state, policy_id)
            own = state.policy_votes.get((policy_id, viewer)) if viewer else None
            entries.append(
                {
                    "policy_id": policy_id,
                    "title": head.title,
                    "description": head.description,
                    "votes": {"up": up, "down": down},
                    "public_reasons": sorted(
                        vote.public_reason
                        for (pid, _), vote in state.policy_votes.items()
                        if pid == policy_id and vote.public_reason
                    ),
                    "viewer_vote": own.direction.value if own else None,
                }
            )
        return entries

    def export_dump(self, campaign_id: str) -> str:
        self.state(campaign_id)
        return store.export_events(self.log, campaign_id)

    def import_dump(self, dump: str) -> str:
        campaign_id = store.import_events(self.log, dump)
        with self._lock(campaign_id):
            self._states[campaign_id] = engine.replay(self.log.read(campaign_id))
        return campaign_id

    def feed(self, campaign_id: str, from_seq: int = 1, *, wait: bool = False, stop: Optional[Callable[[], bool]] = None) -> Iterator[Event]:
        self.state(campaign_id)
        wakeup = self.wakeup(campaign_id) if wait else None
        return store.change_feed(self.log, campaign_id, from_seq, wakeup=wakeup, stop=stop)
