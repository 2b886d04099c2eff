"""Event records: the append-only source of truth for one campaign.

Each engine mutation emits one event; ``seq`` is assigned by the log at append
time and is strictly increasing per campaign. Events are immutable, so replay
of the full log is the authoritative way to rebuild state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from typing import Mapping, Optional

from .errors import ValidationError
from .model import decode_ts, encode_ts


class EventKind:
    CAMPAIGN_CREATED = "campaign_created"
    USER_JOINED = "user_joined"
    PHASE_ADVANCED = "phase_advanced"
    POLICY_CREATED = "policy_created"
    POLICY_EDITED = "policy_edited"
    POLICY_REVERTED = "policy_reverted"
    CASE_CREATED = "case_created"
    CASE_LINKED = "case_linked"
    CASE_UNLINKED = "case_unlinked"
    CASE_RELABELED = "case_relabeled"
    CASE_VOTE_CAST = "case_vote_cast"
    REASON_ADDED = "reason_added"
    REASON_LIKED = "reason_liked"
    POLICY_VOTE_CAST = "policy_vote_cast"
    THREAD_OPENED = "thread_opened"
    COMMENT_ADDED = "comment_added"
    THREAD_CLOSED = "thread_closed"
    THREAD_REOPENED = "thread_reopened"
    POLICY_FOLLOWED = "policy_followed"
    POLICY_UNFOLLOWED = "policy_unfollowed"
    NOTIFICATIONS_READ = "notifications_read"


ALL_KINDS = frozenset(
    value for name, value in vars(EventKind).items() if not name.startswith("_")
)


@dataclass(frozen=True)
class Event:
    seq: Optional[int]
    campaign_id: str
    actor: str
    kind: str
    payload: dict
    occurred_at: datetime

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValidationError("kind", f"unknown event kind: {self.kind}")

    def with_seq(self, seq: int) -> "Event":
        return replace(self, seq=seq)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "campaign_id": self.campaign_id,
            "actor": self.actor,
            "kind": self.kind,
            "payload": self.payload,
            "occurred_at": encode_ts(self.occurred_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Event":
        return cls(
            seq=data.get("seq"),
            campaign_id=data["campaign_id"],
            actor=data["actor"],
            kind=data["kind"],
            payload=dict(data.get("payload", {})),
            occurred_at=decode_ts(data.get("occurred_at"), "occurred_at"),
        )


def new_event(campaign_id: str, actor: str, kind: str, payload: dict, occurred_at: datetime) -> Event:
    return Event(
        seq=None,
        campaign_id=campaign_id,
        actor=actor,
        kind=kind,
        payload=payload,
        occurred_at=occurred_at,
    )
