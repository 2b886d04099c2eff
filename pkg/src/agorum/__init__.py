"""Collaborative, case-grounded policy deliberation platform."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
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
    VoteDirection,
    VoteTally,
)
from .engine import CampaignState, ConflictReport, EditSubmission, LinkSpec, NewCaseSpec, compute_alert  # noqa: F401
from .service import Platform, Principal  # noqa: F401
