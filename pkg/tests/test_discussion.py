"""Threads, notification fan-out, follows, and participation accounting."""

from __future__ import annotations

import pytest

from agorum.discussion import ScopeKind, ThreadScope, ThreadStatus
from agorum.errors import NotFound, ThreadClosed, UnknownScope
from agorum.model import Label, Period, Phase, ReasonSide, Stance

from conftest import T0
from datetime import timedelta


def _unread(p, cid, user):
    return p.notifications(cid, user=user, unread_only=True)


def test_threads_scoped_to_policy_case_and_about(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice = campaign["users"][0].user_id
    policy = p.create_policy(cid, author=alice, title="P", description="D.")
    case = p.create_case(cid, author=alice, title="C", description="D.", stance=Stance.UNSURE)

    on_policy = p.open_thread(
        cid, author=alice, scope=ThreadScope(ScopeKind.POLICY, policy["id"]), title="Wording?", first_comment="Too vague."
    )
    on_case = p.open_thread(
        cid, author=alice, scope=ThreadScope(ScopeKind.CASE, case["id"]), title="Realistic?", first_comment="Seen it happen."
    )
    on_about = p.open_thread(
        cid, author=alice, scope=ThreadScope(ScopeKind.ABOUT), title="Logistics", first_comment="When do we vote?"
    )
    assert {t["scope"]["kind"] for t in (on_policy, on_case, on_about)} == {"policy", "case", "about"}
    assert len(p.list_threads(cid, scope=ThreadScope(ScopeKind.CASE, case["id"]))) == 1

    with pytest.raises(UnknownScope):
        p.open_thread(cid, author=alice, scope=ThreadScope(ScopeKind.POLICY, "policy_missing"), title="X", first_comment="Y")


def test_reply_notifies_each_prior_participant_exactly_once(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob, cara = (u.user_id for u in campaign["users"])
    thread = p.open_thread(cid, author=alice, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="First.")
    p.reply(cid, author=bob, thread_id=thread["id"], text="Second.")
    assert [n["kind"] for n in _unread(p, cid, alice)] == ["thread_reply"]
    assert _unread(p, cid, bob) == []

    p.reply(cid, author=cara, thread_id=thread["id"], text="Third.")
    assert len(_unread(p, cid, alice)) == 2
    assert len(_unread(p, cid, bob)) == 1
    assert _unread(p, cid, cara) == []

    # Self-reply with no other participants never notifies the author.
    solo = p.open_thread(cid, author=cara, scope=ThreadScope(ScopeKind.ABOUT), title="Solo", first_comment="Me.")
    p.reply(cid, author=cara, thread_id=solo["id"], text="Still me.")
    assert len(_unread(p, cid, cara)) == 0


def test_closed_thread_rejects_replies_until_reopened(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob = (u.user_id for u in campaign["users"][:2])
    thread = p.open_thread(cid, author=alice, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="First.")
    p.set_thread_status(cid, actor=alice, thread_id=thread["id"], status=ThreadStatus.CLOSED)
    with pytest.raises(ThreadClosed):
        p.reply(cid, author=bob, thread_id=thread["id"], text="Late.")

    # Closing is idempotent.
    seq = p.state(cid).last_seq
    p.set_thread_status(cid, actor=bob, thread_id=thread["id"], status=ThreadStatus.CLOSED)
    assert p.state(cid).last_seq == seq

    p.set_thread_status(cid, actor=bob, thread_id=thread["id"], status=ThreadStatus.OPEN)
    p.reply(cid, author=bob, thread_id=thread["id"], text="Reopened.")


def test_editor_auto_follows_and_gets_notified_of_later_edits(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob = (u.user_id for u in campaign["users"][:2])
    policy = p.create_policy(cid, author=alice, title="P", description="V1.")

    from agorum.engine import EditSubmission

    p.submit_edit(
        cid,
        EditSubmission(
            policy_id=policy["id"],
            base_revision_id=policy["head_revision_id"],
            new_title="P",
            new_description="V2 by Bob.",
            label_updates=(),
            author=bob,
        ),
    )
    notes = _unread(p, cid, alice)
    assert [n["kind"] for n in notes] == ["policy_changed"]
    assert notes[0]["subject_id"] == policy["id"]
    assert _unread(p, cid, bob) == []  # no self-notification


def test_unfollow_stops_notifications(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob = (u.user_id for u in campaign["users"][:2])
    policy = p.create_policy(cid, author=alice, title="P", description="V1.")
    p.follow_policy(cid, user=alice, policy_id=policy["id"], follow=False)

    case = p.create_case(cid, author=bob, title="C", description="D.", stance=Stance.UNSURE)
    p.link_case(cid, actor=bob, policy_id=policy["id"], case_id=case["id"], label=Label.ALLOWED)
    assert _unread(p, cid, alice) == []


def test_link_and_relabel_notify_followers(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob = (u.user_id for u in campaign["users"][:2])
    policy = p.create_policy(cid, author=alice, title="P", description="V1.")
    case = p.create_case(cid, author=bob, title="C", description="D.", stance=Stance.UNSURE)
    p.link_case(cid, actor=bob, policy_id=policy["id"], case_id=case["id"], label=Label.ALLOWED)
    p.relabel(cid, actor=bob, policy_id=policy["id"], case_id=case["id"], new_label=Label.AMBIGUOUS)
    kinds = [n["detail"] for n in _unread(p, cid, alice)]
    assert kinds == ["case_linked", "case_relabeled"]


def test_mark_read_is_idempotent_and_checks_ownership(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice, bob = (u.user_id for u in campaign["users"][:2])
    thread = p.open_thread(cid, author=alice, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="First.")
    p.reply(cid, author=bob, thread_id=thread["id"], text="Second.")
    note = _unread(p, cid, alice)[0]

    p.mark_read(cid, user=alice, notification_ids=[note["id"]])
    assert _unread(p, cid, alice) == []
    assert len(p.notifications(cid, user=alice)) == 1  # still listed, just read
    p.mark_read(cid, user=alice, notification_ids=[note["id"]])  # idempotent

    with pytest.raises(NotFound):
        p.mark_read(cid, user=bob, notification_ids=[note["id"]])  # foreign notification
    with pytest.raises(NotFound):
        p.mark_read(cid, user=alice, notification_ids=["notif_999999"])


def _campaign_with_periods(platform, min_actions=7):
    from agorum.model import CampaignConfig

    period = Period(start=T0, end=T0 + timedelta(days=1))
    view, org = platform.create_campaign(
        title="With periods",
        organizer_name="Org",
        config=CampaignConfig(min_actions_per_period=min_actions, periods=(period,)),
    )
    cid = view["id"]
    users = [platform.invite(cid, actor=org.user_id, display_name=n) for n in ("Ann", "Ben")]
    platform.advance_phase(cid, actor=org.user_id, target=Phase.DELIBERATION)
    return cid, org, users


def test_participation_counts_exclude_single_click_actions(platform):
    cid, org, users = _campaign_with_periods(platform)
    p = platform
    ann, ben = (u.user_id for u in users)

    # Six countable actions: policy create, edit, case create, link, reason, thread.
    policy = p.create_policy(cid, author=ann, title="P", description="V1.")
    from agorum.engine import EditSubmission

    p.submit_edit(
        cid,
        EditSubmission(
            policy_id=policy["id"],
            base_revision_id=policy["head_revision_id"],
            new_title="P",
            new_description="V2.",
            label_updates=(),
            author=ann,
        ),
    )
    case = p.create_case(
        cid, author=ann, title="C", description="D.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R."),)
    )
    p.link_case(cid, actor=ann, policy_id=policy["id"], case_id=case["id"], label=Label.ALLOWED)
    p.add_reason(cid, author=ann, case_id=case["id"], side=ReasonSide.ALLOW, text="Another angle.")
    p.open_thread(cid, author=ann, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="Hello.")

    # Three excluded single-click actions: two case votes and a like.
    other = p.create_case(
        cid, author=ben, title="C2", description="D2.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R2."),)
    )
    p.vote_case(cid, voter=ann, case_id=other["id"], stance=Stance.DISALLOW)
    p.vote_case(cid, voter=ann, case_id=other["id"], stance=Stance.UNSURE)
    p.like_reason(cid, user=ann, reason_id=other["reasons"][0]["id"])

    status = p.activity(cid, user=ann, period_index=0)["participation"]
    assert status == {"actions": 6, "meets_minimum": False}

    # A seventh countable action crosses the threshold.
    p.reply(cid, author=ann, thread_id=p.list_threads(cid)[0]["id"], text="One more.")
    status = p.activity(cid, user=ann, period_index=0)["participation"]
    assert status == {"actions": 7, "meets_minimum": True}


def test_baseline_policy_and_discussion_actions_all_count(baseline_campaign):
    p, cid = baseline_campaign["platform"], baseline_campaign["id"]
    # Rebuild a baseline campaign with a period configured.
    from agorum.model import CampaignConfig

    period = Period(start=T0, end=T0 + timedelta(days=30))
    view, org = p.create_campaign(
        title="Baseline with periods",
        organizer_name="Org",
        config=CampaignConfig(case_features_enabled=False, min_actions_per_period=3, periods=(period,)),
    )
    bid = view["id"]
    dan = p.invite(bid, actor=org.user_id, display_name="Dan").user_id
    p.advance_phase(bid, actor=org.user_id, target=Phase.DELIBERATION)

    policy = p.create_policy(bid, author=dan, title="P", description="V1.")
    thread = p.open_thread(bid, author=dan, scope=ThreadScope(ScopeKind.POLICY, policy["id"]), title="T", first_comment="Hi.")
    p.reply(bid, author=dan, thread_id=thread["id"], text="More.")
    status = p.activity(bid, user=dan, period_index=0)["participation"]
    assert status == {"actions": 3, "meets_minimum": True}


def test_activity_log_lists_own_contributions(campaign):
    p, cid = campaign["platform"], campaign["id"]
    alice = campaign["users"][0].user_id
    policy = p.create_policy(cid, author=alice, title="P", description="V1.")
    entries = p.activity(cid, user=alice)["entries"]
    assert [e["action"] for e in entries] == ["policy_created"]
    assert entries[0]["subject_id"] == policy["id"]
    assert entries[0]["counts_toward_minimum"] is True
