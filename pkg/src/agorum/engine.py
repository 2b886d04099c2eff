"""State transitions of the deliberation lifecycle.

The engine is a set of pure functions over :class:`CampaignState`:

* ``decide_*`` functions validate a command against current state and return
  the events it produces (raising a domain error, or returning a
  :class:`ConflictReport` for stale policy edits). They never mutate state.
* :func:`apply_event` folds one event into the state. Replaying a campaign's
  full log through this fold is the authoritative way to rebuild state, so
  every payload carries the complete objects it creates.

The hosting service must apply mutations for a campaign through a single
serialized writer; the head-of-chain check in :func:`decide_edit` then gives
compare-and-swap semantics on ``head_revision_id``. Commands that would not
change state (same-stance re-vote, re-like, same-label relabel) emit no event,
which makes the idempotence invariants exact at the state level.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Optional, Sequence, Union

from . import discussion
from .errors import (
    DuplicateLink,
    FeatureDisabled,
    InvalidTransition,
    NotOnBallot,
    NotOrganizer,
    NotParticipant,
    PhaseClosed,
    ReasonRequired,
    UnknownCase,
    UnknownLink,
    UnknownPolicy,
    UnknownReason,
    UnknownRevision,
    ValidationError,
)
from .events import Event, EventKind, new_event
from .model import (
    AlertState,
    Campaign,
    CampaignConfig,
    Case,
    CaseLink,
    CaseVote,
    InspirationTag,
    Label,
    Majority,
    Phase,
    Policy,
    PolicyVote,
    Reason,
    ReasonSide,
    Revision,
    Stance,
    UserId,
    VoteDirection,
    VoteTally,
    make_label_updates,
    phase_index,
)

IdSource = Callable[[str], str]


@dataclass
class CampaignState:
    """Materialized view of one campaign: a mutable container of immutable values."""

    campaign: Optional[Campaign] = None
    display_names: dict[UserId, str] = field(default_factory=dict)
    policies: dict[str, Policy] = field(default_factory=dict)
    revisions: dict[str, Revision] = field(default_factory=dict)
    policy_chains: dict[str, list[str]] = field(default_factory=dict)
    cases: dict[str, Case] = field(default_factory=dict)
    links: dict[tuple[str, str], CaseLink] = field(default_factory=dict)
    case_votes: dict[tuple[str, str], CaseVote] = field(default_factory=dict)
    reasons: dict[str, Reason] = field(default_factory=dict)
    case_reasons: dict[str, list[str]] = field(default_factory=dict)
    policy_votes: dict[tuple[str, str], PolicyVote] = field(default_factory=dict)
    ballot: Optional[tuple[str, ...]] = None
    threads: dict[str, discussion.Thread] = field(default_factory=dict)
    comments: dict[str, discussion.Comment] = field(default_factory=dict)
    thread_comments: dict[str, list[str]] = field(default_factory=dict)
    notifications: dict[str, discussion.Notification] = field(default_factory=dict)
    # (policy_id, user) -> True (following) / False (explicitly unfollowed).
    follows: dict[tuple[str, UserId], bool] = field(default_factory=dict)
    activity: list[discussion.ActivityEntry] = field(default_factory=list)
    notification_seq: int = 0
    activity_seq: int = 0
    last_seq: int = 0

    def require_campaign(self) -> Campaign:
        if self.campaign is None:
            raise ValidationError("campaign", "campaign has not been created")
        return self.campaign

    def head_revision(self, policy_id: str) -> Revision:
        policy = self.policies[policy_id]
        return self.revisions[policy.head_revision_id]

    def chain(self, policy_id: str) -> list[Revision]:
        return [self.revisions[rid] for rid in self.policy_chains[policy_id]]

    def links_of_policy(self, policy_id: str) -> list[CaseLink]:
        return [link for (pid, _), link in sorted(self.links.items()) if pid == policy_id]

    def links_of_case(self, case_id: str) -> list[CaseLink]:
        return [link for (_, cid), link in sorted(self.links.items()) if cid == case_id]

    def reasons_of_case(self, case_id: str) -> list[Reason]:
        return [self.reasons[rid] for rid in self.case_reasons.get(case_id, [])]


# ---------------------------------------------------------------------------
# Command inputs


@dataclass(frozen=True)
class NewCaseSpec:
    """Inline case creation inside ``create_policy``; ``stance=None`` only for
    organizer seeding during setup (no vote is recorded)."""

    title: str
    description: str
    stance: Optional[Stance] = None
    reasons: tuple[tuple[ReasonSide, str], ...] = ()


@dataclass(frozen=True)
class LinkSpec:
    label: Label
    case_id: Optional[str] = None
    new_case: Optional[NewCaseSpec] = None

    def __post_init__(self):
        if (self.case_id is None) == (self.new_case is None):
            raise ValidationError("initial_links", "link must name exactly one of case_id or new_case")


@dataclass(frozen=True)
class EditSubmission:
    policy_id: str
    base_revision_id: str
    new_title: str
    new_description: str
    label_updates: tuple[tuple[str, Label], ...]
    author: UserId
    inspiration: frozenset[InspirationTag] = frozenset()


@dataclass(frozen=True)
class ConflictReport:
    """Returned when an edit's base is no longer the head; no state change occurred."""

    policy_id: str
    your_base: str
    current_head: str
    intervening_revisions: tuple[Revision, ...]

    def __post_init__(self):
        if not self.intervening_revisions:
            raise ValidationError("intervening_revisions", "conflict report requires intervening revisions")

    def to_dict(self) -> dict:
        return {
            "policy_id": self.policy_id,
            "your_base": self.your_base,
            "current_head": self.current_head,
            "intervening_revisions": [r.to_dict() for r in self.intervening_revisions],
        }


# ---------------------------------------------------------------------------
# Derived values


def tally_for_case(state: CampaignState, case_id: str) -> VoteTally:
    counts = {Stance.ALLOW: 0, Stance.DISALLOW: 0, Stance.UNSURE: 0}
    for (cid, _), vote in state.case_votes.items():
        if cid == case_id:
            counts[vote.stance] += 1
    return VoteTally.from_counts(counts[Stance.ALLOW], counts[Stance.DISALLOW], counts[Stance.UNSURE])


def viewer_has_voted(state: CampaignState, case_id: str, viewer: UserId) -> bool:
    return (case_id, viewer) in state.case_votes


def compute_alert(label: Label, tally: VoteTally, alert_min_votes: int) -> AlertState:
    """Derive the misalignment alert for one (label, tally) pair.

    Total and deterministic: below the vote floor, on ties, or when the case
    majority is unsure there is no alert; an ambiguous label with a decided
    majority asks for clarification; a decided label contradicting a decided
    majority flags misalignment.
    """
    if tally.total_voters < alert_min_votes:
        return AlertState.NONE
    if tally.majority in (Majority.NONE, Majority.UNSURE):
        return AlertState.NONE
    if label == Label.AMBIGUOUS:
        return AlertState.NEEDS_CLARIFICATION
    aligned = (tally.majority == Majority.ALLOW and label == Label.ALLOWED) or (
        tally.majority == Majority.DISALLOW and label == Label.DISALLOWED
    )
    return AlertState.NONE if aligned else AlertState.MISALIGNED


def alert_for_link(state: CampaignState, policy_id: str, case_id: str) -> AlertState:
    link = state.links[(policy_id, case_id)]
    config = state.require_campaign().config
    return compute_alert(link.label, tally_for_case(state, case_id), config.alert_min_votes)


def effective_labels_at(state: CampaignState, policy_id: str, revision_id: str) -> dict[str, Label]:
    """Fold label_updates from the root through the given revision."""
    labels: dict[str, Label] = {}
    for revision in state.chain(policy_id):
        labels.update(revision.label_update_map)
        if revision.revision_id == revision_id:
            return labels
    raise UnknownRevision(f"revision {revision_id} is not in policy {policy_id}'s history")


def eligible_policy_ids(state: CampaignState) -> list[str]:
    """Policies admissible to the finalization ballot right now."""
    campaign = state.require_campaign()
    if not campaign.config.case_features_enabled:
        return sorted(state.policies)
    linked = {pid for (pid, _) in state.links}
    return sorted(pid for pid in state.policies if pid in linked)


def ballot_policy_ids(state: CampaignState) -> tuple[str, ...]:
    if state.ballot is None:
        raise PhaseClosed("ballot is not open until finalization begins")
    return state.ballot


def policy_vote_counts(state: CampaignState, policy_id: str) -> tuple[int, int]:
    up = down = 0
    for (pid, _), vote in state.policy_votes.items():
        if pid == policy_id:
            if vote.direction == VoteDirection.UP:
                up += 1
            else:
                down += 1
    return up, down


# ---------------------------------------------------------------------------
# Membership / phase guards


def _require_member(state: CampaignState, user: UserId) -> Campaign:
    campaign = state.require_campaign()
    if not campaign.is_member(user):
        raise NotParticipant(f"{user} is not part of this campaign")
    return campaign


def _require_roster(state: CampaignState, user: UserId) -> Campaign:
    campaign = state.require_campaign()
    if user not in campaign.roster:
        raise NotParticipant(f"{user} is not on the participant roster")
    return campaign


def _require_organizer(state: CampaignState, user: UserId) -> Campaign:
    campaign = state.require_campaign()
    if user not in campaign.organizer_ids:
        raise NotOrganizer(f"{user} is not an organizer")
    return campaign


def _require_editable_phase(campaign: Campaign) -> None:
    if campaign.phase != Phase.DELIBERATION:
        raise PhaseClosed(f"not allowed while campaign phase is {campaign.phase.value}")


def _require_creation_phase(state: CampaignState, actor: UserId) -> Campaign:
    # Content creation happens during deliberation; organizers may also seed
    # content while the campaign is still in setup.
    campaign = _require_member(state, actor)
    if campaign.phase == Phase.SETUP:
        _require_organizer(state, actor)
    elif campaign.phase != Phase.DELIBERATION:
        raise PhaseClosed(f"not allowed while campaign phase is {campaign.phase.value}")
    return campaign


def _require_case_features(campaign: Campaign) -> None:
    if not campaign.config.case_features_enabled:
        raise FeatureDisabled("case-level features are disabled for this campaign")


# ---------------------------------------------------------------------------
# Commands: campaign lifecycle


def decide_create_campaign(
    *,
    campaign_id: str,
    title: str,
    description: str,
    organizer: UserId,
    organizer_name: str,
    config: CampaignConfig,
    now: datetime,
) -> list[Event]:
    if not title.strip():
        raise ValidationError("title", "title must be non-empty text")
    campaign = Campaign(
        id=campaign_id,
        title=title,
        description=description,
        phase=Phase.SETUP,
        roster=frozenset(),
        organizer_ids=frozenset({organizer}),
        config=config,
    )
    payload = {"campaign": campaign.to_dict(), "organizer_name": organizer_name}
    return [new_event(campaign_id, organizer, EventKind.CAMPAIGN_CREATED, payload, now)]


def decide_join(
    state: CampaignState, *, user_id: UserId, display_name: str, roles: Sequence[str], now: datetime
) -> list[Event]:
    campaign = state.require_campaign()
    if campaign.phase == Phase.CLOSED:
        raise PhaseClosed("campaign is closed to new members")
    payload = {"user_id": user_id, "display_name": display_name, "roles": sorted(set(roles))}
    return [new_event(campaign.id, user_id, EventKind.USER_JOINED, payload, now)]


def decide_advance_phase(
    state: CampaignState, *, actor: UserId, target: Phase, now: datetime
) -> list[Event]:
    campaign = _require_organizer(state, actor)
    current = campaign.phase
    if phase_index(target) != phase_index(current) + 1:
        raise InvalidTransition(f"cannot advance from {current.value} to {target.value}")
    if target == Phase.DELIBERATION and not campaign.roster:
        raise InvalidTransition("cannot start deliberation with an empty roster")
    payload: dict = {"from": current.value, "to": target.value}
    if target == Phase.FINALIZATION:
        payload["ballot"] = eligible_policy_ids(state)
    return [new_event(campaign.id, actor, EventKind.PHASE_ADVANCED, payload, now)]


# ---------------------------------------------------------------------------
# Commands: cases, votes, reasons


def _validate_creation_vote(
    campaign: Campaign,
    stance: Optional[Stance],
    reasons: Sequence[tuple[ReasonSide, str]],
) -> None:
    if campaign.phase != Phase.SETUP and stance is None:
        raise ValidationError("stance", "creating a case requires casting your own vote on it")
    for side, text in reasons:
        if not text.strip():
            raise ValidationError("reasons", "reason text must be non-empty")
        if stance in (Stance.ALLOW, Stance.DISALLOW) and side.value != stance.value:
            raise ValidationError("reasons", "creation-time reasons must be on the voter's own side")
    if (
        stance in (Stance.ALLOW, Stance.DISALLOW)
        and campaign.config.reasons_required_on_case_creation
        and not any(side.value == stance.value for side, _ in reasons)
    ):
        raise ReasonRequired("a reason for your vote is required when creating a case")


def _case_created_event(
    campaign: Campaign,
    *,
    author: UserId,
    title: str,
    description: str,
    stance: Optional[Stance],
    reasons: Sequence[tuple[ReasonSide, str]],
    ids: IdSource,
    now: datetime,
) -> Event:
    case = Case(
        id=ids("case"),
        campaign_id=campaign.id,
        title=title,
        description=description,
        author=author,
        created_at=now,
    )
    vote = CaseVote(case_id=case.id, voter=author, stance=stance, cast_at=now) if stance else None
    reason_objs = [
        Reason(id=ids("reason"), case_id=case.id, author=author, side=side, text=text)
        for side, text in reasons
    ]
    payload = {
        "case": case.to_dict(),
        "vote": vote.to_dict() if vote else None,
        "reasons": [r.to_dict() for r in reason_objs],
    }
    return new_event(campaign.id, author, EventKind.CASE_CREATED, payload, now)


def decide_create_case(
    state: CampaignState,
    *,
    author: UserId,
    title: str,
    description: str,
    stance: Optional[Stance],
    reasons: Sequence[tuple[ReasonSide, str]] = (),
    ids: IdSource,
    now: datetime,
) -> list[Event]:
    campaign = _require_creation_phase(state, author)
    _require_case_features(campaign)
    if not title.strip():
        raise ValidationError("title", "title must be non-empty text")
    if not description.strip():
        raise ValidationError("description", "description must be non-empty text")
    _validate_creation_vote(campaign, stance, reasons)
    return [
        _case_created_event(
            campaign,
            author=author,
            title=title,
            description=description,
            stance=stance,
            reasons=reasons,
            ids=ids,
            now=now,
        )
    ]


def decide_vote_case(
    state: CampaignState, *, voter: UserId, case_id: str, stance: Stance, now: datetime
) -> list[Event]:
    campaign = _require_roster(state, voter)
    _require_case_features(campaign)
    if case_id not in state.cases:
        raise UnknownCase(f"no such case: {case_id}")
    existing = state.case_votes.get((case_id, voter))
    if existing and existing.stance == stance:
        return []
    vote = CaseVote(case_id=case_id, voter=voter, stance=stance, cast_at=now)
    payload = {"vote": vote.to_dict(), "previous_stance": existing.stance.value if existing else None}
    return [new_event(campaign.id, voter, EventKind.CASE_VOTE_CAST, payload, now)]


def decide_add_reason(
    state: CampaignState,
    *,
    author: UserId,
    case_id: str,
    side: ReasonSide,
    text: str,
    ids: IdSource,
    now: datetime,
) -> list[Event]:
    campaign = _require_member(state, author)
    _require_case_features(campaign)
    if case_id not in state.cases:
        raise UnknownCase(f"no such case: {case_id}")
    if not text.strip():
        raise ValidationError("text", "reason text must be non-empty")
    reason = Reason(id=ids("reason"), case_id=case_id, author=author, side=side, text=text)
    return [new_event(campaign.id, author, EventKind.REASON_ADDED, {"reason": reason.to_dict()}, now)]


def decide_like_reason(
    state: CampaignState, *, user: UserId, reason_id: str, now: datetime
) -> list[Event]:
    campaign = _require_member(state, user)
    _require_case_features(campaign)
    reason = state.reasons.get(reason_id)
    if reason is None:
        raise UnknownReason(f"no such reason: {reason_id}")
    if user in reason.likes:
        return []
    payload = {"reason_id": reason_id, "user": user}
    return [new_event(campaign.id, user, EventKind.REASON_LIKED, payload, now)]


# ---------------------------------------------------------------------------
# Commands: policies and links


def decide_create_policy(
    state: CampaignState,
    *,
    author: UserId,
    title: str,
    description: str,
    initial_links: Sequence[LinkSpec] = (),
    inspiration: frozenset[InspirationTag] = frozenset(),
    ids: IdSource,
    now: datetime,
) -> list[Event]:
    campaign = _require_creation_phase(state, author)
    if not title.strip():
        raise ValidationError("title", "title must be non-empty text")
    if not description.strip():
        raise ValidationError("description", "description must be non-empty text")
    if initial_links:
        _require_case_features(campaign)

    events: list[Event] = []
    link_entries: list[tuple[str, Label]] = []
    seen_cases: set[str] = set()
    for spec in initial_links:
        if spec.case_id is not None:
            if spec.case_id not in state.cases:
                raise UnknownCase(f"no such case: {spec.case_id}")
            case_id = spec.case_id
        else:
            new = spec.new_case
            _validate_creation_vote(campaign, new.stance, new.reasons)
            event = _case_created_event(
                campaign,
                author=author,
                title=new.title,
                description=new.description,
                stance=new.stance,
                reasons=new.reasons,
                ids=ids,
                now=now,
            )
            events.append(event)
            case_id = event.payload["case"]["id"]
        if case_id in seen_cases:
            raise DuplicateLink(f"case {case_id} listed twice in initial links")
        seen_cases.add(case_id)
        link_entries.append((case_id, spec.label))

    policy_id = ids("policy")
    revision = Revision(
        revision_id=ids("rev"),
        policy_id=policy_id,
        parent_revision_id=None,
        title=title,
        description=description,
        label_updates=(),
        author=author,
        created_at=now,
        inspiration=inspiration,
    )
    policy = Policy(
        id=policy_id,
        campaign_id=campaign.id,
        head_revision_id=revision.revision_id,
        created_by=author,
        created_at=now,
        frozen=False,
    )
    links = [
        CaseLink(policy_id=policy_id, case_id=cid, label=label, last_labeled_by=author, last_labeled_at=now)
        for cid, label in link_entries
    ]
    payload = {
        "policy": policy.to_dict(),
        "revision": revision.to_dict(),
        "links": [link.to_dict() for link in links],
    }
    events.append(new_event(campaign.id, author, EventKind.POLICY_CREATED, payload, now))
    return events


def decide_edit(
    state: CampaignState, submission: EditSubmission, *, ids: IdSource, now: datetime
) -> Union[list[Event], ConflictReport]:
    campaign = _require_member(state, submission.author)
    _require_editable_phase(campaign)
    policy = state.policies.get(submission.policy_id)
    if policy is None:
        raise UnknownPolicy(f"no such policy: {submission.policy_id}")
    chain_ids = state.policy_chains[policy.id]
    if submission.base_revision_id not in chain_ids:
        raise UnknownRevision(f"revision {submission.base_revision_id} is not in this policy's history")
    if not submission.new_title.strip():
        raise ValidationError("new_title", "new_title must be non-empty text")
    if not submission.new_description.strip():
        raise ValidationError("new_description", "new_description must be non-empty text")

    if submission.base_revision_id != policy.head_revision_id:
        base_at = chain_ids.index(submission.base_revision_id)
        intervening = tuple(state.revisions[rid] for rid in chain_ids[base_at + 1 :])
        return ConflictReport(
            policy_id=policy.id,
            your_base=submission.base_revision_id,
            current_head=policy.head_revision_id,
            intervening_revisions=intervening,
        )

    # Label updates are validated against the link set the edit will actually
    # commit on; a stale base reports its conflict first.
    linked = {cid for (pid, cid) in state.links if pid == policy.id}
    for case_id, _ in submission.label_updates:
        if case_id not in linked:
            raise ValidationError("label_updates", f"case {case_id} is not linked to this policy")

    revision = Revision(
        revision_id=ids("rev"),
        policy_id=policy.id,
        parent_revision_id=policy.head_revision_id,
        title=submission.new_title,
        description=submission.new_description,
        label_updates=submission.label_updates,
        author=submission.author,
        created_at=now,
        inspiration=submission.inspiration,
    )
    payload = {"revision": revision.to_dict()}
    return [new_event(campaign.id, submission.author, EventKind.POLICY_EDITED, payload, now)]


def decide_revert(
    state: CampaignState,
    *,
    actor: UserId,
    policy_id: str,
    to_revision_id: str,
    ids: IdSource,
    now: datetime,
) -> list[Event]:
    campaign = _require_member(state, actor)
    _require_editable_phase(campaign)
    policy = state.policies.get(policy_id)
    if policy is None:
        raise UnknownPolicy(f"no such policy: {policy_id}")
    if to_revision_id not in state.policy_chains[policy_id]:
        raise UnknownRevision(f"revision {to_revision_id} is not in this policy's history")
    target = state.revisions[to_revision_id]
    effective = effective_labels_at(state, policy_id, to_revision_id)
    updates = {
        case_id: label
        for case_id, label in effective.items()
        if (policy_id, case_id) in state.links and state.links[(policy_id, case_id)].label != label
    }
    revision = Revision(
        revision_id=ids("rev"),
        policy_id=policy_id,
        parent_revision_id=policy.head_revision_id,
        title=target.title,
        description=target.description,
        label_updates=make_label_updates(updates),
        author=actor,
        created_at=now,
        is_revert_of=to_revision_id,
    )
    payload = {"revision": revision.to_dict()}
    return [new_event(campaign.id, actor, EventKind.POLICY_REVERTED, payload, now)]


def decide_link_case(
    state: CampaignState, *, actor: UserId, policy_id: str, case_id: str, label: Label, now: datetime
) -> list[Event]:
    campaign = _require_member(state, actor)
    _require_case_features(campaign)
    _require_editable_phase(campaign)
    if policy_id not in state.policies:
        raise UnknownPolicy(f"no such policy: {policy_id}")
    if case_id not in state.cases:
        raise UnknownCase(f"no such case: {case_id}")
    if (policy_id, case_id) in state.links:
        raise DuplicateLink(f"case {case_id} is already linked to policy {policy_id}")
    link = CaseLink(
        policy_id=policy_id, case_id=case_id, label=label, last_labeled_by=actor, last_labeled_at=now
    )
    return [new_event(campaign.id, actor, EventKind.CASE_LINKED, {"link": link.to_dict()}, now)]


def decide_unlink_case(
    state: CampaignState, *, actor: UserId, policy_id: str, case_id: str, now: datetime
) -> list[Event]:
    campaign = _require_member(state, actor)
    _require_editable_phase(campaign)
    if (policy_id, case_id) not in state.links:
        raise UnknownLink(f"case {case_id} is not linked to policy {policy_id}")
    payload = {"policy_id": policy_id, "case_id": case_id}
    return [new_event(campaign.id, actor, EventKind.CASE_UNLINKED, payload, now)]


def decide_relabel(
    state: CampaignState, *, actor: UserId, policy_id: str, case_id: str, new_label: Label, now: datetime
) -> list[Event]:
    campaign = _require_member(state, actor)
    _require_editable_phase(campaign)
    link = state.links.get((policy_id, case_id))
    if link is None:
        raise UnknownLink(f"case {case_id} is not linked to policy {policy_id}")
    if link.label == new_label:
        return []
    updated = replace(link, label=new_label, last_labeled_by=actor, last_labeled_at=now)
    payload = {"link": updated.to_dict(), "previous_label": link.label.value}
    return [new_event(campaign.id, actor, EventKind.CASE_RELABELED, payload, now)]


# ---------------------------------------------------------------------------
# Commands: finalization votes


def decide_policy_vote(
    state: CampaignState,
    *,
    voter: UserId,
    policy_id: str,
    direction: VoteDirection,
    public_reason: Optional[str],
    now: datetime,
) -> list[Event]:
    campaign = _require_roster(state, voter)
    if campaign.phase != Phase.FINALIZATION:
        raise PhaseClosed("policy votes may only be cast during finalization")
    if policy_id not in ballot_policy_ids(state):
        raise NotOnBallot(f"policy {policy_id} is not on the finalization ballot")
    existing = state.policy_votes.get((policy_id, voter))
    vote = PolicyVote(policy_id=policy_id, voter=voter, direction=direction, public_reason=public_reason)
    if existing == vote:
        return []
    payload = {
        "vote": vote.to_dict(),
        "previous_direction": existing.direction.value if existing else None,
    }
    return [new_event(campaign.id, voter, EventKind.POLICY_VOTE_CAST, payload, now)]


# ---------------------------------------------------------------------------
# Fold


def apply_event(state: CampaignState, event: Event) -> None:
    """Fold one event into the state, then derive activity and notifications."""
    handler = _APPLY.get(event.kind)
    if handler is None:
        handler = discussion.APPLY[event.kind]
    handler(state, event)
    discussion.record_activity(state, event)
    discussion.fan_out_notifications(state, event)
    discussion.auto_follow(state, event)
    if event.seq is not None:
        state.last_seq = event.seq


def replay(events: Sequence[Event]) -> CampaignState:
    state = CampaignState()
    for event in events:
        apply_event(state, event)
    return state


def _apply_campaign_created(state: CampaignState, event: Event) -> None:
    state.campaign = Campaign.from_dict(event.payload["campaign"])
    name = event.payload.get("organizer_name")
    if name:
        state.display_names[event.actor] = name


def _apply_user_joined(state: CampaignState, event: Event) -> None:
    campaign = state.require_campaign()
    user_id = event.payload["user_id"]
    roles = set(event.payload.get("roles", ["participant"]))
    roster = campaign.roster | {user_id} if "participant" in roles else campaign.roster
    organizers = campaign.organizer_ids | {user_id} if "organizer" in roles else campaign.organizer_ids
    state.campaign = replace(campaign, roster=roster, organizer_ids=organizers)
    state.display_names[user_id] = event.payload.get("display_name", user_id)


def _apply_phase_advanced(state: CampaignState, event: Event) -> None:
    campaign = state.require_campaign()
    target = Phase(event.payload["to"])
    state.campaign = replace(campaign, phase=target)
    if target == Phase.FINALIZATION:
        state.ballot = tuple(event.payload.get("ballot", ()))
        state.policies = {pid: replace(p, frozen=True) for pid, p in state.policies.items()}


def _apply_case_created(state: CampaignState, event: Event) -> None:
    case = Case.from_dict(event.payload["case"])
    state.cases[case.id] = case
    if event.payload.get("vote"):
        vote = CaseVote.from_dict(event.payload["vote"])
        state.case_votes[(vote.case_id, vote.voter)] = vote
    for raw in event.payload.get("reasons", []):
        reason = Reason.from_dict(raw)
        state.reasons[reason.id] = reason
        state.case_reasons.setdefault(reason.case_id, []).append(reason.id)


def _apply_policy_created(state: CampaignState, event: Event) -> None:
    policy = Policy.from_dict(event.payload["policy"])
    revision = Revision.from_dict(event.payload["revision"])
    state.policies[policy.id] = policy
    state.revisions[revision.revision_id] = revision
    state.policy_chains[policy.id] = [revision.revision_id]
    for raw in event.payload.get("links", []):
        link = CaseLink.from_dict(raw)
        state.links[(link.policy_id, link.case_id)] = link


def _append_revision(state: CampaignState, revision: Revision) -> None:
    state.revisions[revision.revision_id] = revision
    state.policy_chains[revision.policy_id].append(revision.revision_id)
    policy = state.policies[revision.policy_id]
    state.policies[revision.policy_id] = replace(policy, head_revision_id=revision.revision_id)
    for case_id, label in revision.label_updates:
        key = (revision.policy_id, case_id)
        link = state.links.get(key)
        if link is not None and link.label != label:
            state.links[key] = replace(
                link, label=label, last_labeled_by=revision.author, last_labeled_at=revision.created_at
            )


def _apply_policy_edited(state: CampaignState, event: Event) -> None:
    _append_revision(state, Revision.from_dict(event.payload["revision"]))


def _apply_case_linked(state: CampaignState, event: Event) -> None:
    link = CaseLink.from_dict(event.payload["link"])
    state.links[(link.policy_id, link.case_id)] = link


def _apply_case_unlinked(state: CampaignState, event: Event) -> None:
    state.links.pop((event.payload["policy_id"], event.payload["case_id"]), None)


def _apply_case_relabeled(state: CampaignState, event: Event) -> None:
    link = CaseLink.from_dict(event.payload["link"])
    state.links[(link.policy_id, link.case_id)] = link


def _apply_case_vote_cast(state: CampaignState, event: Event) -> None:
    vote = CaseVote.from_dict(event.payload["vote"])
    state.case_votes[(vote.case_id, vote.voter)] = vote


def _apply_reason_added(state: CampaignState, event: Event) -> None:
    reason = Reason.from_dict(event.payload["reason"])
    state.reasons[reason.id] = reason
    state.case_reasons.setdefault(reason.case_id, []).append(reason.id)


def _apply_reason_liked(state: CampaignState, event: Event) -> None:
    reason = state.reasons[event.payload["reason_id"]]
    state.reasons[reason.id] = reason.with_like(event.payload["user"])


def _apply_policy_vote_cast(state: CampaignState, event: Event) -> None:
    vote = PolicyVote.from_dict(event.payload["vote"])
    state.policy_votes[(vote.policy_id, vote.voter)] = vote


_APPLY: dict[str, Callable[[CampaignState, Event], None]] = {
    EventKind.CAMPAIGN_CREATED: _apply_campaign_created,
    EventKind.USER_JOINED: _apply_user_joined,
    EventKind.PHASE_ADVANCED: _apply_phase_advanced,
    EventKind.CASE_CREATED: _apply_case_created,
    EventKind.POLICY_CREATED: _apply_policy_created,
    EventKind.POLICY_EDITED: _apply_policy_edited,
    EventKind.POLICY_REVERTED: _apply_policy_edited,
    EventKind.CASE_LINKED: _apply_case_linked,
    EventKind.CASE_UNLINKED: _apply_case_unlinked,
    EventKind.CASE_RELABELED: _apply_case_relabeled,
    EventKind.CASE_VOTE_CAST: _apply_case_vote_cast,
    EventKind.REASON_ADDED: _apply_reason_added,
    EventKind.REASON_LIKED: _apply_reason_liked,
    EventKind.POLICY_VOTE_CAST: _apply_policy_vote_cast,
}
