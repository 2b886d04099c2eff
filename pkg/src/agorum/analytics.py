"""Consensus and support metrics over finalization votes and revision metadata.

Pure functions over campaign snapshots. Percentages are integer percents with
half-up rounding, computed over exact rationals so boundary cases never fall
victim to float truncation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Sequence

from .errors import NoVotes, PhaseClosed, ValidationError
from .model import InspirationTag, Phase

if TYPE_CHECKING:
    from .engine import CampaignState


@dataclass(frozen=True)
class PolicyVoteCount:
    policy_id: str
    v_u: int
    v_d: int

    def __post_init__(self):
        if self.v_u < 0 or self.v_d < 0:
            raise ValidationError("votes", "vote counts must be non-negative")

    @property
    def total(self) -> int:
        return self.v_u + self.v_d


@dataclass(frozen=True)
class CampaignReport:
    n_participants: int
    n_policies: int
    n_majority: int
    pct_majority: int
    weighted_gini: Optional[float]
    inspiration_distribution: dict[str, int]
    pct_specific_case_other: Optional[int]
    per_policy: tuple[PolicyVoteCount, ...]

    def __post_init__(self):
        if self.n_majority > self.n_policies:
            raise ValidationError("n_majority", "majority count cannot exceed policy count")
        if self.weighted_gini is not None and not (0.0 <= self.weighted_gini <= 0.5):
            raise ValidationError("weighted_gini", "weighted gini must lie in [0, 0.5]")

    def to_dict(self) -> dict:
        return {
            "n_participants": self.n_participants,
            "n_policies": self.n_policies,
            "n_majority": self.n_majority,
            "pct_majority": self.pct_majority,
            "weighted_gini": self.weighted_gini,
            "inspiration_distribution": dict(self.inspiration_distribution),
            "pct_specific_case_other": self.pct_specific_case_other,
            "per_policy": [
                {
                    "policy_id": c.policy_id,
                    "v_u": c.v_u,
                    "v_d": c.v_d,
                    "gini": gini(c.v_u, c.v_d) if c.total else None,
                    "majority_supported": majority_supported(c, self.n_participants)
                    if self.n_participants
                    else None,
                }
                for c in self.per_policy
            ],
        }


def _gini_fraction(v_u: int, v_d: int) -> Fraction:
    total = v_u + v_d
    if total == 0:
        raise NoVotes("gini is undefined without any votes")
    p_u = Fraction(v_u, total)
    p_d = Fraction(v_d, total)
    return 1 - p_u * p_u - p_d * p_d


def gini(v_u: int, v_d: int) -> float:
    """Vote-split variability for one policy: 0 at unanimity, 0.5 at an even split."""
    return float(_gini_fraction(v_u, v_d))


def weighted_gini(counts: Sequence[PolicyVoteCount]) -> float:
    """Average of per-policy gini values weighted by each policy's vote total.

    Policies with zero votes carry zero weight and are excluded.
    """
    voted = [c for c in counts if c.total > 0]
    if not voted:
        raise NoVotes("no policy received any votes")
    total_votes = sum(c.total for c in voted)
    acc = sum(_gini_fraction(c.v_u, c.v_d) * c.total for c in voted)
    return float(acc / total_votes)


def majority_supported(count: PolicyVoteCount, n_participants: int) -> bool:
    """True iff upvotes minus downvotes exceed half the participant roster.

    The comparison is exact: (v_u - v_d) > n/2 is evaluated as
    2*(v_u - v_d) > n so odd rosters keep their fractional threshold.
    """
    if n_participants <= 0:
        raise ValidationError("n_participants", "participant count must be positive")
    return 2 * (count.v_u - count.v_d) > n_participants


def percent_half_up(numerator: int, denominator: int) -> int:
    """Integer percent with exact half-up rounding (e.g. 14/19 -> 74)."""
    if denominator <= 0:
        raise ValidationError("denominator", "denominator must be positive")
    scaled = Fraction(numerator, denominator) * 100
    return int(scaled + Fraction(1, 2)) if scaled >= 0 else -int(-scaled + Fraction(1, 2))


def policy_vote_counts(state: "CampaignState") -> list[PolicyVoteCount]:
    from .engine import policy_vote_counts as raw_counts

    counts = []
    for policy_id in sorted(state.policies):
        up, down = raw_counts(state, policy_id)
        counts.append(PolicyVoteCount(policy_id=policy_id, v_u=up, v_d=down))
    return counts


def campaign_report(state: "CampaignState") -> CampaignReport:
    campaign = state.require_campaign()
    if campaign.phase not in (Phase.FINALIZATION, Phase.CLOSED):
        raise PhaseClosed("reports are available once finalization begins")

    counts = policy_vote_counts(state)
    n_participants = len(campaign.roster)
    n_policies = len(counts)
    n_majority = sum(1 for c in counts if n_participants and majority_supported(c, n_participants))
    pct = percent_half_up(n_majority, n_policies) if n_policies else 0
    try:
        wg: Optional[float] = weighted_gini(counts)
    except NoVotes:
        wg = None

    distribution = {tag.value: 0 for tag in InspirationTag}
    captured = 0
    tagged_specific_other = 0
    for revision in state.revisions.values():
        if revision.is_revert_of is not None or not revision.inspiration:
            continue
        captured += 1
        for tag in revision.inspiration:
            distribution[tag.value] += 1
        if InspirationTag.SPECIFIC_CASE_OTHER in revision.inspiration:
            tagged_specific_other += 1
    pct_specific = percent_half_up(tagged_specific_other, captured) if captured else None

    return CampaignReport(
        n_participants=n_participants,
        n_policies=n_policies,
        n_majority=n_majority,
        pct_majority=pct,
        weighted_gini=wg,
        inspiration_distribution=distribution,
        pct_specific_case_other=pct_specific,
        per_policy=tuple(counts),
    )


def report_csv(report: CampaignReport) -> str:
    """One row per policy: id, upvotes, downvotes, gini, majority_supported."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["policy_id", "v_u", "v_d", "gini", "majority_supported"])
    for row in report.to_dict()["per_policy"]:
        gini_cell = "" if row["gini"] is None else f"{row['gini']:.6f}"
        supported = "" if row["majority_supported"] is None else str(row["majority_supported"]).lower()
        writer.writerow([row["policy_id"], row["v_u"], row["v_d"], gini_cell, supported])
    return buffer.getvalue()
