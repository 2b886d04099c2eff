"""Shared domain types: pure data with validated invariants, no I/O.

All types are immutable values (frozen dataclasses) and safe to copy between
execution contexts. The canonical wire encoding is UTF-8 JSON with snake_case
field names, enums as lowercase strings, and RFC 3339 timestamps; each type
provides ``to_dict`` / ``from_dict`` so that ``from_dict(to_dict(x)) == x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Mapping, Optional

from .errors import ValidationError

UserId = str


class Phase(str, Enum):
    SETUP = "setup"
    DELIBERATION = "deliberation"
    FINALIZATION = "finalization"
    CLOSED = "closed"


PHASE_ORDER = [Phase.SETUP, Phase.DELIBERATION, Phase.FINALIZATION, Phase.CLOSED]


def phase_index(phase: Phase) -> int:
    return PHASE_ORDER.index(phase)


class Label(str, Enum):
    """How a policy's current wording treats a linked case."""

    ALLOWED = "allowed"
    DISALLOWED = "disallowed"
    AMBIGUOUS = "ambiguous"


class Stance(str, Enum):
    """A voter's personal opinion on what an ideal policy should do with a case."""

    ALLOW = "allow"
    DISALLOW = "disallow"
    UNSURE = "unsure"


class ReasonSide(str, Enum):
    ALLOW = "allow"
    DISALLOW = "disallow"


class VoteDirection(str, Enum):
    UP = "up"
    DOWN = "down"


class Majority(str, Enum):
    ALLOW = "allow"
    DISALLOW = "disallow"
    UNSURE = "unsure"
    NONE = "none"


class AlertState(str, Enum):
    """Derived from (link label, case tally); never stored authoritatively."""

    NONE = "none"
    MISALIGNED = "misaligned"
    NEEDS_CLARIFICATION = "needs_clarification"


class InspirationTag(str, Enum):
    """What prompted a policy create/edit, captured at submission time."""

    SPECIFIC_CASE_OWN = "specific_case_own"
    SPECIFIC_CASE_OTHER = "specific_case_other"
    GENERAL_ISSUE_OWN = "general_issue_own"
    GENERAL_ISSUE_OTHER = "general_issue_other"
    OTHER = "other"


def _require_text(field_name: str, value: object) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(field_name, f"{field_name} must be non-empty text")
    return value


def encode_ts(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.isoformat()


def decode_ts(raw: object, field_name: str = "timestamp") -> datetime:
    if isinstance(raw, datetime):
        return raw if raw.tzinfo else raw.replace(tzinfo=timezone.utc)
    if not isinstance(raw, str):
        raise ValidationError(field_name, f"{field_name} must be an RFC 3339 string")
    text = raw.replace("Z", "+00:00") if raw.endswith("Z") else raw
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValidationError(field_name, f"{field_name} is not a valid timestamp: {raw}") from exc
    return parsed if parsed.tzinfo else parsed.replace(tzinfo=timezone.utc)


def _decode_enum(enum_cls, raw: object, field_name: str):
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ValidationError(field_name, f"{field_name} must be one of: {allowed}") from None


@dataclass(frozen=True)
class Period:
    """Half-open time interval [start, end) used for participation accounting."""

    start: datetime
    end: datetime

    def __post_init__(self):
        if self.end <= self.start:
            raise ValidationError("period", "period end must be after start")

    def contains(self, ts: datetime) -> bool:
        return self.start <= ts < self.end

    def to_dict(self) -> dict:
        return {"start": encode_ts(self.start), "end": encode_ts(self.end)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Period":
        return cls(start=decode_ts(data.get("start"), "start"), end=decode_ts(data.get("end"), "end"))


@dataclass(frozen=True)
class CampaignConfig:
    case_features_enabled: bool = True
    alert_min_votes: int = 1
    min_actions_per_period: int = 7
    periods: tuple[Period, ...] = ()
    reasons_required_on_case_creation: bool = True

    def __post_init__(self):
        if self.alert_min_votes < 1:
            raise ValidationError("alert_min_votes", "alert_min_votes must be >= 1")
        if self.min_actions_per_period < 0:
            raise ValidationError("min_actions_per_period", "min_actions_per_period must be >= 0")

    def to_dict(self) -> dict:
        return {
            "case_features_enabled": self.case_features_enabled,
            "alert_min_votes": self.alert_min_votes,
            "min_actions_per_period": self.min_actions_per_period,
            "periods": [p.to_dict() for p in self.periods],
            "reasons_required_on_case_creation": self.reasons_required_on_case_creation,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CampaignConfig":
        return cls(
            case_features_enabled=bool(data.get("case_features_enabled", True)),
            alert_min_votes=int(data.get("alert_min_votes", 1)),
            min_actions_per_period=int(data.get("min_actions_per_period", 7)),
            periods=tuple(Period.from_dict(p) for p in data.get("periods", [])),
            reasons_required_on_case_creation=bool(data.get("reasons_required_on_case_creation", True)),
        )


@dataclass(frozen=True)
class Campaign:
    id: str
    title: str
    description: str
    phase: Phase
    roster: frozenset[UserId]
    organizer_ids: frozenset[UserId]
    config: CampaignConfig

    def __post_init__(self):
        _require_text("title", self.title)
        if phase_index(self.phase) >= phase_index(Phase.DELIBERATION):
            if not self.roster:
                raise ValidationError("roster", "roster must be non-empty once deliberation starts")
            if not self.organizer_ids:
                raise ValidationError("organizer_ids", "organizer_ids must be non-empty once deliberation starts")

    def is_member(self, user: UserId) -> bool:
        return user in self.roster or user in self.organizer_ids

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "description": self.description,
            "phase": self.phase.value,
            "roster": sorted(self.roster),
            "organizer_ids": sorted(self.organizer_ids),
            "config": self.config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Campaign":
        return cls(
            id=_require_text("id", data.get("id")),
            title=data.get("title", ""),
            description=data.get("description", ""),
            phase=_decode_enum(Phase, data.get("phase"), "phase"),
            roster=frozenset(data.get("roster", [])),
            organizer_ids=frozenset(data.get("organizer_ids", [])),
            config=CampaignConfig.from_dict(data.get("config", {})),
        )


@dataclass(frozen=True)
class Policy:
    id: str
    campaign_id: str
    head_revision_id: str
    created_by: UserId
    created_at: datetime
    frozen: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "campaign_id": self.campaign_id,
            "head_revision_id": self.head_revision_id,
            "created_by": self.created_by,
            "created_at": encode_ts(self.created_at),
            "frozen": self.frozen,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Policy":
        return cls(
            id=_require_text("id", data.get("id")),
            campaign_id=_require_text("campaign_id", data.get("campaign_id")),
            head_revision_id=_require_text("head_revision_id", data.get("head_revision_id")),
            created_by=_require_text("created_by", data.get("created_by")),
            created_at=decode_ts(data.get("created_at"), "created_at"),
            frozen=bool(data.get("frozen", False)),
        )


@dataclass(frozen=True)
class Revision:
    """One entry in a policy's append-only, linear edit history."""

    revision_id: str
    policy_id: str
    parent_revision_id: Optional[str]
    title: str
    description: str
    label_updates: tuple[tuple[str, Label], ...]
    author: UserId
    created_at: datetime
    inspiration: frozenset[InspirationTag] = frozenset()
    is_revert_of: Optional[str] = None

    def __post_init__(self):
        _require_text("title", self.title)
        _require_text("description", self.description)

    @property
    def label_update_map(self) -> dict[str, Label]:
        return dict(self.label_updates)

    def to_dict(self) -> dict:
        return {
            "revision_id": self.revision_id,
            "policy_id": self.policy_id,
            "parent_revision_id": self.parent_revision_id,
            "title": self.title,
            "description": self.description,
            "label_updates": {case_id: label.value for case_id, label in self.label_updates},
            "author": self.author,
            "created_at": encode_ts(self.created_at),
            "inspiration": sorted(tag.value for tag in self.inspiration),
            "is_revert_of": self.is_revert_of,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Revision":
        raw_updates = data.get("label_updates", {})
        updates = tuple(
            sorted((cid, _decode_enum(Label, lab, "label_updates")) for cid, lab in raw_updates.items())
        )
        return cls(
            revision_id=_require_text("revision_id", data.get("revision_id")),
            policy_id=_require_text("policy_id", data.get("policy_id")),
            parent_revision_id=data.get("parent_revision_id"),
            title=data.get("title", ""),
            description=data.get("description", ""),
            label_updates=updates,
            author=_require_text("author", data.get("author")),
            created_at=decode_ts(data.get("created_at"), "created_at"),
            inspiration=frozenset(
                _decode_enum(InspirationTag, tag, "inspiration") for tag in data.get("inspiration", [])
            ),
            is_revert_of=data.get("is_revert_of"),
        )


def make_label_updates(mapping: Mapping[str, Label]) -> tuple[tuple[str, Label], ...]:
    """Canonical (sorted, hashable) form for a case-id -> label map."""
    return tuple(sorted((cid, Label(lab)) for cid, lab in mapping.items()))


@dataclass(frozen=True)
class Case:
    """A concrete scenario; title and description are immutable after creation."""

    id: str
    campaign_id: str
    title: str
    description: str
    author: UserId
    created_at: datetime

    def __post_init__(self):
        _require_text("title", self.title)
        _require_text("description", self.description)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "campaign_id": self.campaign_id,
            "title": self.title,
            "description": self.description,
            "author": self.author,
            "created_at": encode_ts(self.created_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Case":
        return cls(
            id=_require_text("id", data.get("id")),
            campaign_id=_require_text("campaign_id", data.get("campaign_id")),
            title=data.get("title", ""),
            description=data.get("description", ""),
            author=_require_text("author", data.get("author")),
            created_at=decode_ts(data.get("created_at"), "created_at"),
        )


@dataclass(frozen=True)
class CaseLink:
    """The (policy, case, label) association; at most one per pair, label mutable."""

    policy_id: str
    case_id: str
    label: Label
    last_labeled_by: UserId
    last_labeled_at: datetime

    def to_dict(self) -> dict:
        return {
            "policy_id": self.policy_id,
            "case_id": self.case_id,
            "label": self.label.value,
            "last_labeled_by": self.last_labeled_by,
            "last_labeled_at": encode_ts(self.last_labeled_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CaseLink":
        return cls(
            policy_id=_require_text("policy_id", data.get("policy_id")),
            case_id=_require_text("case_id", data.get("case_id")),
            label=_decode_enum(Label, data.get("label"), "label"),
            last_labeled_by=_require_text("last_labeled_by", data.get("last_labeled_by")),
            last_labeled_at=decode_ts(data.get("last_labeled_at"), "last_labeled_at"),
        )


@dataclass(frozen=True)
class CaseVote:
    """A user's current stance on a case; attached to the case, never to links."""

    case_id: str
    voter: UserId
    stance: Stance
    cast_at: datetime

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "voter": self.voter,
            "stance": self.stance.value,
            "cast_at": encode_ts(self.cast_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CaseVote":
        return cls(
            case_id=_require_text("case_id", data.get("case_id")),
            voter=_require_text("voter", data.get("voter")),
            stance=_decode_enum(Stance, data.get("stance"), "stance"),
            cast_at=decode_ts(data.get("cast_at"), "cast_at"),
        )


@dataclass(frozen=True)
class Reason:
    id: str
    case_id: str
    author: UserId
    side: ReasonSide
    text: str
    likes: frozenset[UserId] = frozenset()

    def __post_init__(self):
        _require_text("text", self.text)

    def with_like(self, user: UserId) -> "Reason":
        return replace(self, likes=self.likes | {user})

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "case_id": self.case_id,
            "author": self.author,
            "side": self.side.value,
            "text": self.text,
            "likes": sorted(self.likes),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Reason":
        return cls(
            id=_require_text("id", data.get("id")),
            case_id=_require_text("case_id", data.get("case_id")),
            author=_require_text("author", data.get("author")),
            side=_decode_enum(ReasonSide, data.get("side"), "side"),
            text=data.get("text", ""),
            likes=frozenset(data.get("likes", [])),
        )


@dataclass(frozen=True)
class PolicyVote:
    """Anonymous finalization vote. The voter is stored but never exposed via the API."""

    policy_id: str
    voter: UserId
    direction: VoteDirection
    public_reason: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "policy_id": self.policy_id,
            "voter": self.voter,
            "direction": self.direction.value,
            "public_reason": self.public_reason,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PolicyVote":
        return cls(
            policy_id=_require_text("policy_id", data.get("policy_id")),
            voter=_require_text("voter", data.get("voter")),
            direction=_decode_enum(VoteDirection, data.get("direction"), "direction"),
            public_reason=data.get("public_reason"),
        )


@dataclass(frozen=True)
class VoteTally:
    allow_count: int
    disallow_count: int
    unsure_count: int
    total_voters: int
    majority: Majority

    def __post_init__(self):
        if min(self.allow_count, self.disallow_count, self.unsure_count) < 0:
            raise ValidationError("counts", "vote counts must be non-negative")
        if self.allow_count + self.disallow_count + self.unsure_count != self.total_voters:
            raise ValidationError("total_voters", "counts must sum to total_voters")
        if self.majority != _majority_of(self.allow_count, self.disallow_count, self.unsure_count):
            raise ValidationError("majority", "majority does not match counts")

    @classmethod
    def from_counts(cls, allow: int, disallow: int, unsure: int) -> "VoteTally":
        return cls(
            allow_count=allow,
            disallow_count=disallow,
            unsure_count=unsure,
            total_voters=allow + disallow + unsure,
            majority=_majority_of(allow, disallow, unsure),
        )

    def to_dict(self) -> dict:
        return {
            "allow_count": self.allow_count,
            "disallow_count": self.disallow_count,
            "unsure_count": self.unsure_count,
            "total_voters": self.total_voters,
            "majority": self.majority.value,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "VoteTally":
        return cls(
            allow_count=int(data.get("allow_count", 0)),
            disallow_count=int(data.get("disallow_count", 0)),
            unsure_count=int(data.get("unsure_count", 0)),
            total_voters=int(data.get("total_voters", 0)),
            majority=_decode_enum(Majority, data.get("majority"), "majority"),
        )


def _majority_of(allow: int, disallow: int, unsure: int) -> Majority:
    # Strict plurality; ties (and zero votes) yield no majority.
    top = max(allow, disallow, unsure)
    if top == 0 or [allow, disallow, unsure].count(top) > 1:
        return Majority.NONE
    if top == allow:
        return Majority.ALLOW
    if top == disallow:
        return Majority.DISALLOW
    return Majority.UNSURE


WIRE_TYPES = {
    "period": Period,
    "campaign_config": CampaignConfig,
    "campaign": Campaign,
    "policy": Policy,
    "revision": Revision,
    "case": Case,
    "case_link": CaseLink,
    "case_vote": CaseVote,
    "reason": Reason,
    "policy_vote": PolicyVote,
    "vote_tally": VoteTally,
}
