from __future__ import annotations

import itertools
from datetime import datetime, timedelta, timezone

import pytest

from agorum import CampaignConfig, Phase, Platform

T0 = datetime(2026, 3, 2, 9, 0, 0, tzinfo=timezone.utc)


def make_ids():
    counters = itertools.count(1)

    def ids(prefix: str) -> str:
        return f"{prefix}_{next(counters):04d}"

    return ids


def make_clock(start: datetime = T0, step_seconds: int = 60):
    ticks = itertools.count(0)

    def clock() -> datetime:
        return start + timedelta(seconds=step_seconds * next(ticks))

    return clock


@pytest.fixture
def platform():
    return Platform(ids=make_ids(), clock=make_clock())


@pytest.fixture
def campaign(platform):
    """A campaign in deliberation with one organizer and three participants."""
    view, organizer = platform.create_campaign(
        title="Course rules for generative AI",
        description="Decide together which uses are acceptable.",
        organizer_name="Instructor",
    )
    cid = view["id"]
    users = [platform.invite(cid, actor=organizer.user_id, display_name=name) for name in ("Alice", "Bob", "Cara")]
    platform.advance_phase(cid, actor=organizer.user_id, target=Phase.DELIBERATION)
    return {"platform": platform, "id": cid, "organizer": organizer, "users": users}


@pytest.fixture
def baseline_campaign(platform):
    """Same roster but with all case-level features switched off."""
    view, organizer = platform.create_campaign(
        title="Course rules (policy-only)",
        organizer_name="Instructor",
        config=CampaignConfig(case_features_enabled=False),
    )
    cid = view["id"]
    users = [platform.invite(cid, actor=organizer.user_id, display_name=name) for name in ("Dan", "Eve")]
    platform.advance_phase(cid, actor=organizer.user_id, target=Phase.DELIBERATION)
    return {"platform": platform, "id": cid, "organizer": organizer, "users": users}
