"""Threaded discussions, notification fan-out, follows, and activity accounting.

Notifications and activity entries are derived deterministically inside the
event fold (the event log doubles as the outbox), so an acknowledged mutation
can never lose its notifications and replay reproduces them exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING, Mapping, Optional, Sequence

from .errors import (
    NotFound,
    NotParticipant,
    ThreadClosed,
    UnknownPolicy,
    UnknownScope,
    UnknownThread,
    ValidationError,
)
from .events import Event, EventKind, new_event
from .model import Period, UserId, decode_ts, encode_ts

if TYPE_CHECKING:
    from .engine import CampaignState, IdSource


class ScopeKind(str, Enum):
    POLICY = "policy"
    CASE = "case"
    ABOUT = "about"


class ThreadStatus(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class NotificationKind(str, Enum):
    THREAD_REPLY = "thread_reply"
    POLICY_CHANGED = "policy_changed"


@dataclass(frozen=True)
class ThreadScope:
    kind: ScopeKind
    target_id: Optional[str] = None

    def __post_init__(self):
        if self.kind == ScopeKind.ABOUT and self.target_id is not None:
            raise ValidationError("scope", "about-scoped threads carry no target id")
        if self.kind != ScopeKind.ABOUT and not self.target_id:
            raise ValidationError("scope", f"{self.kind.value}-scoped threads require a target id")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "target_id": self.target_id}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ThreadScope":
        return cls(kind=ScopeKind(data["kind"]), target_id=data.get("target_id"))


@dataclass(frozen=True)
class Thread:
    id: str
    scope: ThreadScope
    title: str
    status: ThreadStatus
    author: UserId
    created_at: datetime

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "scope": self.scope.to_dict(),
            "title": self.title,
            "status": self.status.value,
            "author": self.author,
            "created_at": encode_ts(self.created_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Thread":
        return cls(
            id=data["id"],
            scope=ThreadScope.from_dict(data["scope"]),
            title=data["title"],
            status=ThreadStatus(data["status"]),
            author=data["author"],
            created_at=decode_ts(data["created_at"], "created_at"),
        )


@dataclass(frozen=True)
class Comment:
    id: str
    thread_id: str
    author: UserId
    text: str
    created_at: datetime

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("text", "comment text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "thread_id": self.thread_id,
            "author": self.author,
            "text": self.text,
            "created_at": encode_ts(self.created_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Comment":
        return cls(
            id=data["id"],
            thread_id=data["thread_id"],
            author=data["author"],
            text=data["text"],
            created_at=decode_ts(data["created_at"], "created_at"),
        )


@dataclass(frozen=True)
class Notification:
    id: str
    recipient: UserId
    kind: NotificationKind
    subject_type: str
    subject_id: str
    detail: str
    read: bool
    created_at: datetime

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "recipient": self.recipient,
            "kind": self.kind.value,
            "subject_type": self.subject_type,
            "subject_id": self.subject_id,
            "detail": self.detail,
            "read": self.read,
            "created_at": encode_ts(self.created_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Notification":
        return cls(
            id=data["id"],
            recipient=data["recipient"],
            kind=NotificationKind(data["kind"]),
            subject_type=data["subject_type"],
            subject_id=data["subject_id"],
            detail=data.get("detail", ""),
            read=bool(data.get("read", False)),
            created_at=decode_ts(data["created_at"], "created_at"),
        )


@dataclass(frozen=True)
class ActivityEntry:
    id: str
    user: UserId
    action: str
    subject_type: str
    subject_id: str
    created_at: datetime
    counts_toward_minimum: bool

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "user": self.user,
            "action": self.action,
            "subject_type": self.subject_type,
            "subject_id": self.subject_id,
            "created_at": encode_ts(self.created_at),
            "counts_toward_minimum": self.counts_toward_minimum,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ActivityEntry":
        return cls(
            id=data["id"],
            user=data["user"],
            action=data["action"],
            subject_type=data["subject_type"],
            subject_id=data["subject_id"],
            created_at=decode_ts(data["created_at"], "created_at"),
            counts_toward_minimum=bool(data["counts_toward_minimum"]),
        )


# ---------------------------------------------------------------------------
# Commands


def _require_member(state: "CampaignState", user: UserId):
    campaign = state.require_campaign()
    if not campaign.is_member(user):
        raise NotParticipant(f"{user} is not part of this campaign")
    return campaign


def _validate_scope(state: "CampaignState", scope: ThreadScope) -> None:
    if scope.kind == ScopeKind.POLICY and scope.target_id not in state.policies:
        raise UnknownScope(f"no such policy: {scope.target_id}")
    if scope.kind == ScopeKind.CASE and scope.target_id not in state.cases:
        raise UnknownScope(f"no such case: {scope.target_id}")


def decide_open_thread(
    state: "CampaignState",
    *,
    author: UserId,
    scope: ThreadScope,
    title: str,
    first_comment: str,
    ids: "IdSource",
    now: datetime,
) -> list[Event]:
    campaign = _require_member(state, author)
    _validate_scope(state, scope)
    if not title.strip():
        raise ValidationError("title", "thread title must be non-empty")
    thread = Thread(
        id=ids("thread"), scope=scope, title=title, status=ThreadStatus.OPEN, author=author, created_at=now
    )
    comment = Comment(id=ids("comment"), thread_id=thread.id, author=author, text=first_comment, created_at=now)
    payload = {"thread": thread.to_dict(), "first_comment": comment.to_dict()}
    return [new_event(campaign.id, author, EventKind.THREAD_OPENED, payload, now)]


def decide_reply(
    state: "CampaignState", *, author: UserId, thread_id: str, text: str, ids: "IdSource", now: datetime
) -> list[Event]:
    campaign = _require_member(state, author)
    thread = state.threads.get(thread_id)
    if thread is None:
        raise UnknownThread(f"no such thread: {thread_id}")
    if thread.status == ThreadStatus.CLOSED:
        raise ThreadClosed("this thread is closed; reopen it to continue the discussion")
    comment = Comment(id=ids("comment"), thread_id=thread_id, author=author, text=text, created_at=now)
    return [new_event(campaign.id, author, EventKind.COMMENT_ADDED, {"comment": comment.to_dict()}, now)]


def decide_set_thread_status(
    state: "CampaignState", *, actor: UserId, thread_id: str, status: ThreadStatus, now: datetime
) -> list[Event]:
    campaign = _require_member(state, actor)
    thread = state.threads.get(thread_id)
    if thread is None:
        raise UnknownThread(f"no such thread: {thread_id}")
    if thread.status == status:
        return []
    kind = EventKind.THREAD_CLOSED if status == ThreadStatus.CLOSED else EventKind.THREAD_REOPENED
    return [new_event(campaign.id, actor, kind, {"thread_id": thread_id}, now)]


def decide_follow(
    state: "CampaignState", *, user: UserId, policy_id: str, follow: bool, now: datetime
) -> list[Event]:
    campaign = _require_member(state, user)
    if policy_id not in state.policies:
        raise UnknownPolicy(f"no such policy: {policy_id}")
    current = state.follows.get((policy_id, user))
    if current is not None and current == follow:
        return []
    kind = EventKind.POLICY_FOLLOWED if follow else EventKind.POLICY_UNFOLLOWED
    return [new_event(campaign.id, user, kind, {"policy_id": policy_id, "user": user}, now)]


def decide_mark_read(
    state: "CampaignState", *, user: UserId, notification_ids: Sequence[str], now: datetime
) -> list[Event]:
    campaign = _require_member(state, user)
    unread: list[str] = []
    for nid in notification_ids:
        notification = state.notifications.get(nid)
        if notification is None or notification.recipient != user:
            raise NotFound(f"no such notification: {nid}")
        if not notification.read:
            unread.append(nid)
    if not unread:
        return []
    return [new_event(campaign.id, user, EventKind.NOTIFICATIONS_READ, {"ids": sorted(unread)}, now)]


# ---------------------------------------------------------------------------
# Queries


def list_notifications(state: "CampaignState", user: UserId, unread_only: bool = False) -> list[Notification]:
    items = [n for n in state.notifications.values() if n.recipient == user]
    if unread_only:
        items = [n for n in items if not n.read]
    return sorted(items, key=lambda n: n.id)


def thread_participants(state: "CampaignState", thread_id: str) -> set[UserId]:
    thread = state.threads[thread_id]
    participants = {thread.author}
    for cid in state.thread_comments.get(thread_id, []):
        participants.add(state.comments[cid].author)
    return participants


def policy_followers(state: "CampaignState", policy_id: str) -> set[UserId]:
    return {user for (pid, user), on in state.follows.items() if pid == policy_id and on}


def activity_log(
    state: "CampaignState", user: UserId, period: Optional[Period] = None
) -> list[ActivityEntry]:
    entries = [e for e in state.activity if e.user == user]
    if period is not None:
        entries = [e for e in entries if period.contains(e.created_at)]
    return entries


def participation_status(state: "CampaignState", user: UserId, period: Period) -> dict:
    config = state.require_campaign().config
    actions = sum(1 for e in activity_log(state, user, period) if e.counts_toward_minimum)
    return {"actions": actions, "meets_minimum": actions >= config.min_actions_per_period}


# ---------------------------------------------------------------------------
# Fold handlers


def _apply_thread_opened(state: "CampaignState", event: Event) -> None:
    thread = Thread.from_dict(event.payload["thread"])
    comment = Comment.from_dict(event.payload["first_comment"])
    state.threads[thread.id] = thread
    state.comments[comment.id] = comment
    state.thread_comments[thread.id] = [comment.id]


def _apply_comment_added(state: "CampaignState", event: Event) -> None:
    comment = Comment.from_dict(event.payload["comment"])
    state.comments[comment.id] = comment
    state.thread_comments.setdefault(comment.thread_id, []).append(comment.id)


def _apply_thread_closed(state: "CampaignState", event: Event) -> None:
    thread = state.threads[event.payload["thread_id"]]
    state.threads[thread.id] = replace(thread, status=ThreadStatus.CLOSED)


def _apply_thread_reopened(state: "CampaignState", event: Event) -> None:
    thread = state.threads[event.payload["thread_id"]]
    state.threads[thread.id] = replace(thread, status=ThreadStatus.OPEN)


def _apply_policy_followed(state: "CampaignState", event: Event) -> None:
    state.follows[(event.payload["policy_id"], event.payload["user"])] = True


def _apply_policy_unfollowed(state: "CampaignState", event: Event) -> None:
    state.follows[(event.payload["policy_id"], event.payload["user"])] = False


def _apply_notifications_read(state: "CampaignState", event: Event) -> None:
    for nid in event.payload["ids"]:
        notification = state.notifications.get(nid)
        if notification is not None:
            state.notifications[nid] = replace(notification, read=True)


APPLY = {
    EventKind.THREAD_OPENED: _apply_thread_opened,
    EventKind.COMMENT_ADDED: _apply_comment_added,
    EventKind.THREAD_CLOSED: _apply_thread_closed,
    EventKind.THREAD_REOPENED: _apply_thread_reopened,
    EventKind.POLICY_FOLLOWED: _apply_policy_followed,
    EventKind.POLICY_UNFOLLOWED: _apply_policy_unfollowed,
    EventKind.NOTIFICATIONS_READ: _apply_notifications_read,
}


# ---------------------------------------------------------------------------
# Derivations run for every event after its domain handler


# Single-click actions excluded from the per-period participation minimum.
_EXCLUDED_FROM_MINIMUM = {EventKind.CASE_VOTE_CAST, EventKind.REASON_LIKED}

_ACTIVITY_SUBJECT = {
    EventKind.POLICY_CREATED: lambda e: ("policy", e.payload["policy"]["id"]),
    EventKind.POLICY_EDITED: lambda e: ("policy", e.payload["revision"]["policy_id"]),
    EventKind.POLICY_REVERTED: lambda e: ("policy", e.payload["revision"]["policy_id"]),
    EventKind.CASE_CREATED: lambda e: ("case", e.payload["case"]["id"]),
    EventKind.CASE_LINKED: lambda e: ("policy", e.payload["link"]["policy_id"]),
    EventKind.CASE_UNLINKED: lambda e: ("policy", e.payload["policy_id"]),
    EventKind.CASE_RELABELED: lambda e: ("policy", e.payload["link"]["policy_id"]),
    EventKind.CASE_VOTE_CAST: lambda e: ("case", e.payload["vote"]["case_id"]),
    EventKind.REASON_ADDED: lambda e: ("case", e.payload["reason"]["case_id"]),
    EventKind.REASON_LIKED: lambda e: ("reason", e.payload["reason_id"]),
    EventKind.THREAD_OPENED: lambda e: ("thread", e.payload["thread"]["id"]),
    EventKind.COMMENT_ADDED: lambda e: ("thread", e.payload["comment"]["thread_id"]),
    EventKind.THREAD_CLOSED: lambda e: ("thread", e.payload["thread_id"]),
    EventKind.THREAD_REOPENED: lambda e: ("thread", e.payload["thread_id"]),
}


def record_activity(state: "CampaignState", event: Event) -> None:
    subject = _ACTIVITY_SUBJECT.get(event.kind)
    if subject is None:
        return
    subject_type, subject_id = subject(event)
    state.activity_seq += 1
    state.activity.append(
        ActivityEntry(
            id=f"act_{state.activity_seq:06d}",
            user=event.actor,
            action=event.kind,
            subject_type=subject_type,
            subject_id=subject_id,
            created_at=event.occurred_at,
            counts_toward_minimum=event.kind not in _EXCLUDED_FROM_MINIMUM,
        )
    )


# Policy change kinds that notify followers (text revisions, reverts, link and
# label changes; unlinking is treated as removing the subject, not changing it).
_POLICY_CHANGE_KINDS = {
    EventKind.POLICY_EDITED: lambda e: e.payload["revision"]["policy_id"],
    EventKind.POLICY_REVERTED: lambda e: e.payload["revision"]["policy_id"],
    EventKind.CASE_LINKED: lambda e: e.payload["link"]["policy_id"],
    EventKind.CASE_RELABELED: lambda e: e.payload["link"]["policy_id"],
}


def _push_notification(
    state: "CampaignState",
    *,
    recipient: UserId,
    kind: NotificationKind,
    subject_type: str,
    subject_id: str,
    detail: str,
    now: datetime,
) -> None:
    state.notification_seq += 1
    nid = f"notif_{state.notification_seq:06d}"
    state.notifications[nid] = Notification(
        id=nid,
        recipient=recipient,
        kind=kind,
        subject_type=subject_type,
        subject_id=subject_id,
        detail=detail,
        read=False,
        created_at=now,
    )


def fan_out_notifications(state: "CampaignState", event: Event) -> None:
    if event.kind == EventKind.COMMENT_ADDED:
        thread_id = event.payload["comment"]["thread_id"]
        for user in sorted(thread_participants(state, thread_id) - {event.actor}):
            _push_notification(
                state,
                recipient=user,
                kind=NotificationKind.THREAD_REPLY,
                subject_type="thread",
                subject_id=thread_id,
                detail=event.payload["comment"]["id"],
                now=event.occurred_at,
            )
        return
    policy_of = _POLICY_CHANGE_KINDS.get(event.kind)
    if policy_of is None:
        return
    policy_id = policy_of(event)
    for user in sorted(policy_followers(state, policy_id) - {event.actor}):
        _push_notification(
            state,
            recipient=user,
            kind=NotificationKind.POLICY_CHANGED,
            subject_type="policy",
            subject_id=policy_id,
            detail=event.kind,
            now=event.occurred_at,
        )


def _contributed_policy(state: "CampaignState", event: Event) -> Optional[str]:
    if event.kind in (EventKind.POLICY_CREATED,):
        return event.payload["policy"]["id"]
    if event.kind in _POLICY_CHANGE_KINDS:
        return _POLICY_CHANGE_KINDS[event.kind](event)
    if event.kind == EventKind.CASE_UNLINKED:
        return event.payload["policy_id"]
    if event.kind == EventKind.THREAD_OPENED:
        scope = event.payload["thread"]["scope"]
        return scope["target_id"] if scope["kind"] == ScopeKind.POLICY.value else None
    if event.kind == EventKind.COMMENT_ADDED:
        thread = state.threads.get(event.payload["comment"]["thread_id"])
        if thread is not None and thread.scope.kind == ScopeKind.POLICY:
            return thread.scope.target_id
    return None


def auto_follow(state: "CampaignState", event: Event) -> None:
    policy_id = _contributed_policy(state, event)
    if policy_id is None:
        return
    key = (policy_id, event.actor)
    # An explicit unfollow (stored False) suppresses future auto-follows.
    if key not in state.follows:
        state.follows[key] = True
