"""Acceptance suite: one test per release criterion, each printing a PASS line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest
from fastapi.testclient import TestClient

from agorum import Platform, analytics, assistant, seeds, store
from agorum.analytics import PolicyVoteCount, gini, majority_supported, percent_half_up, weighted_gini
from agorum.engine import (
    ConflictReport,
    EditSubmission,
    compute_alert,
    eligible_policy_ids,
    replay,
)
from agorum.errors import DomainError, PhaseClosed
from agorum.gateway import create_app
from agorum.model import Label, Phase, Period, ReasonSide, Stance, VoteDirection, VoteTally, phase_index

from conftest import T0, make_clock, make_ids
from datetime import timedelta
from pathlib import Path

SEED_DIR = Path(__file__).resolve().parent.parent / "seeds"


def _ok(name: str) -> None:
    print(f"[PASS] {name}")


# ---------------------------------------------------------------------------


def test_criterion_gini_formula():
    started = time.monotonic()
    assert gini(16, 0) == 0.0
    assert gini(5, 5) == 0.5
    assert abs(gini(4, 10) - 0.408163) <= 1e-6
    elapsed = time.monotonic() - started
    assert elapsed < 0.1
    _ok(f"gini formula: (16,0)=0.0, (5,5)=0.5, (4,10)=0.408163 +/- 1e-6 in {elapsed * 1000:.2f} ms")


def test_criterion_majority_support_and_report_percentages():
    assert majority_supported(PolicyVoteCount("p", 18, 1), 20) is True
    assert majority_supported(PolicyVoteCount("p", 4, 13), 20) is False
    rows = [(14, 19, 74), (7, 31, 23), (7, 19, 37), (8, 11, 73)]
    for majority, total, expected in rows:
        assert percent_half_up(majority, total) == expected, (majority, total)

    # The per-condition weighted gini values cannot be re-derived without the
    # raw per-policy votes; the formula's properties stand in for them.
    for a, b in itertools.product(range(0, 25), repeat=2):
        if a + b == 0:
            continue
        value = gini(a, b)
        assert value == gini(b, a)
        assert 0.0 <= value <= 0.5
        if a and b and a != b:
            assert gini(a, b) < 0.5
    for n in (7, 20):
        for up, down in itertools.product(range(10), repeat=2):
            base = majority_supported(PolicyVoteCount("p", up, down), n)
            if base:  # monotone in upvotes
                assert majority_supported(PolicyVoteCount("p", up + 1, down), n)
            if majority_supported(PolicyVoteCount("p", up, down + 1), n):  # antitone in downvotes
                assert base
    counts = [PolicyVoteCount("a", 16, 0), PolicyVoteCount("b", 4, 10)]
    value = weighted_gini(counts)
    assert min(gini(16, 0), gini(4, 10)) <= value <= max(gini(16, 0), gini(4, 10))
    assert abs(value - 0.19048) < 1e-5
    _ok("majority-support rule and report percentages 74/23/37/73 (half-up), gini property suite")


def test_criterion_alert_truth_table():
    def oracle(label, allow, disallow, unsure, floor):
        total = allow + disallow + unsure
        if total < floor:
            return "none"
        ranked = sorted([("allow", allow), ("disallow", disallow), ("unsure", unsure)], key=lambda kv: -kv[1])
        if ranked[0][1] == 0 or ranked[0][1] == ranked[1][1]:
            return "none"
        majority = ranked[0][0]
        if majority == "unsure":
            return "none"
        if label == "ambiguous":
            return "needs_clarification"
        if (majority == "allow") != (label == "allowed"):
            return "misaligned"
        return "none"

    started = time.monotonic()
    cases = 0
    for label in Label:
        for allow in range(7):
            for disallow in range(7):
                for unsure in range(7):
                    if allow + disallow + unsure > 6:
                        continue
                    tally = VoteTally.from_counts(allow, disallow, unsure)
                    got = compute_alert(label, tally, 1).value
                    assert got == oracle(label.value, allow, disallow, unsure, 1)
                    cases += 1
    # The three anchored rows.
    assert compute_alert(Label.ALLOWED, VoteTally.from_counts(1, 5, 1), 1).value == "misaligned"
    assert compute_alert(Label.AMBIGUOUS, VoteTally.from_counts(4, 1, 0), 1).value == "needs_clarification"
    for label in Label:
        assert compute_alert(label, VoteTally.from_counts(0, 0, 3), 1).value == "none"
    elapsed = time.monotonic() - started
    assert elapsed < 1.0
    _ok(f"alert truth table: {cases} label/tally combinations match brute force in {elapsed:.3f} s")


# ---------------------------------------------------------------------------


def _http_campaign(client, n_users=3):
    created = client.post(
        "/v1/campaigns", json={"title": "Course rules", "organizer_name": "Instructor"}
    ).json()
    cid, org = created["campaign"]["id"], created["token"]
    tokens = []
    for i in range(n_users):
        invited = client.post(
            f"/v1/campaigns/{cid}/invites",
            json={"display_name": f"U{i}"},
            headers={"Authorization": f"Bearer {org}"},
        ).json()
        tokens.append(invited["token"])
    client.post(
        f"/v1/campaigns/{cid}/phase",
        json={"target": "deliberation"},
        headers={"Authorization": f"Bearer {org}"},
    )
    return cid, org, tokens


def test_criterion_conflict_scenario_end_to_end():
    platform = Platform(ids=make_ids(), clock=make_clock())
    with TestClient(create_app(platform)) as client:
        cid, org, tokens = _http_campaign(client)
        alice, bob, cara = tokens

        def auth(tok):
            return {"Authorization": f"Bearer {tok}"}

        policy = client.post(
            "/v1/policies",
            json={"title": "Brainstorming with tools", "description": "Ideas must ultimately come from students."},
            headers=auth(alice),
        ).json()

        # Two editors start from the same base; the second submission conflicts.
        first = client.post(
            f"/v1/policies/{policy['id']}/edits",
            json={
                "base_revision_id": policy["head_revision_id"],
                "new_title": policy["title"],
                "new_description": "Ideas must come from students; tool transcripts must be attached.",
            },
            headers=auth(bob),
        ).json()
        stale = client.post(
            f"/v1/policies/{policy['id']}/edits",
            json={
                "base_revision_id": policy["head_revision_id"],
                "new_title": policy["title"],
                "new_description": "Ideas must come from students; reuse of own material is fine.",
            },
            headers=auth(alice),
        )
        assert stale.status_code == 409
        conflict = stale.json()["conflict"]
        assert conflict["current_head"] == first["revision_id"]
        assert [r["revision_id"] for r in conflict["intervening_revisions"]] == [first["revision_id"]]

        retry = client.post(
            f"/v1/policies/{policy['id']}/edits",
            json={
                "base_revision_id": conflict["current_head"],
                "new_title": policy["title"],
                "new_description": "Ideas must come from students; transcripts attached; reuse of own material is fine.",
            },
            headers=auth(alice),
        )
        assert retry.status_code == 201

        history = client.get(f"/v1/policies/{policy['id']}/history", headers=auth(alice)).json()
        assert [r["parent_revision_id"] for r in history] == [None] + [r["revision_id"] for r in history[:-1]]
        state = platform.state(cid)
        assert replay(platform.log.read(cid)) == state  # linear history is replayable

        # Full iteration scenario: case added -> alert raised -> revision -> alert cleared.
        case = client.post(
            "/v1/cases",
            json={
                "title": "Reworking discarded drafts",
                "description": "A tool recombines the group's own discarded ideas.",
                "stance": "allow",
                "reasons": [{"side": "allow", "text": "The material is the students' own."}],
            },
            headers=auth(bob),
        ).json()
        client.post(
            f"/v1/policies/{policy['id']}/links",
            json={"case_id": case["id"], "label": "disallowed"},
            headers=auth(bob),
        )
        client.post(f"/v1/cases/{case['id']}/votes", json={"stance": "allow"}, headers=auth(cara))
        view = client.get(f"/v1/policies/{policy['id']}", headers=auth(bob)).json()
        assert view["links"][0]["alert"] == "misaligned"

        head = view["head_revision"]["revision_id"]
        client.post(
            f"/v1/policies/{policy['id']}/edits",
            json={
                "base_revision_id": head,
                "new_title": view["title"],
                "new_description": "Ideas must come from students; reworking the group's own material is allowed.",
                "label_updates": {case["id"]: "allowed"},
            },
            headers=auth(alice),
        )
        after = client.get(f"/v1/policies/{policy['id']}", headers=auth(bob)).json()
        assert after["links"][0]["alert"] == "none"
        assert after["links"][0]["label"] == "allowed"
    _ok("conflict scenario + full iteration scenario replay end-to-end through the API")


# ---------------------------------------------------------------------------
# Randomized lifecycle harness


class _Walk:
    """One random operation sequence against a fresh platform."""

    def __init__(self, seed: int, max_ops: int = 12):
        self.rng = random.Random(seed)
        self.platform = Platform(ids=make_ids(), clock=make_clock())
        view, organizer = self.platform.create_campaign(title=f"Walk {seed}", organizer_name="Org")
        self.cid = view["id"]
        self.organizer = organizer.user_id
        self.users = [
            self.platform.invite(self.cid, actor=self.organizer, display_name=f"U{i}").user_id
            for i in range(self.rng.randint(2, 4))
        ]
        self.platform.advance_phase(self.cid, actor=self.organizer, target=Phase.DELIBERATION)
        self.case_bodies: dict[str, tuple[str, str]] = {}
        self.policies: list[str] = []
        self.cases: list[str] = []
        self.phase_trace = [Phase.DELIBERATION]
        self.ballot_at_freeze = None
        self.eligible_at_freeze = None
        self.max_ops = max_ops

    def state(self):
        return self.platform.state(self.cid)

    def _user(self):
        return self.rng.choice(self.users)

    def run(self) -> None:
        ops = [
            self.op_create_policy,
            self.op_create_case,
            self.op_link,
            self.op_unlink,
            self.op_relabel,
            self.op_vote,
            self.op_vote_same_twice,
            self.op_reason,
            self.op_like_twice,
            self.op_edit,
            self.op_revert,
            self.op_thread,
            self.op_advance,
            self.op_policy_vote,
        ]
        for _ in range(self.max_ops):
            op = self.rng.choice(ops)
            try:
                op()
            except DomainError:
                pass
            self.phase_trace.append(self.state().require_campaign().phase)
        self.check_invariants()

    # -- operations (each may legitimately raise a domain error) --

    def op_create_policy(self):
        p = self.platform.create_policy(
            self.cid, author=self._user(), title=f"Policy {self.rng.randint(0, 999)}", description="Wording."
        )
        self.policies.append(p["id"])

    def op_create_case(self):
        c = self.platform.create_case(
            self.cid,
            author=self._user(),
            title=f"Case {self.rng.randint(0, 999)}",
            description="Scenario.",
            stance=Stance.UNSURE,
        )
        self.cases.append(c["id"])
        self.case_bodies[c["id"]] = (c["title"], c["description"])

    def _pair(self):
        if not self.policies or not self.cases:
            raise PhaseClosed("nothing to act on")
        return self.rng.choice(self.policies), self.rng.choice(self.cases)

    def op_link(self):
        pid, cid_ = self._pair()
        self.platform.link_case(self.cid, actor=self._user(), policy_id=pid, case_id=cid_, label=self.rng.choice(list(Label)))

    def op_unlink(self):
        pid, cid_ = self._pair()
        self.platform.unlink_case(self.cid, actor=self._user(), policy_id=pid, case_id=cid_)

    def op_relabel(self):
        pid, cid_ = self._pair()
        self.platform.relabel(self.cid, actor=self._user(), policy_id=pid, case_id=cid_, new_label=self.rng.choice(list(Label)))

    def op_vote(self):
        if not self.cases:
            return
        self.platform.vote_case(
            self.cid, voter=self._user(), case_id=self.rng.choice(self.cases), stance=self.rng.choice(list(Stance))
        )

    def op_vote_same_twice(self):
        if not self.cases:
            return
        voter, case_id = self._user(), self.rng.choice(self.cases)
        stance = self.rng.choice(list(Stance))
        self.platform.vote_case(self.cid, voter=voter, case_id=case_id, stance=stance)
        seq = self.state().last_seq
        votes = dict(self.state().case_votes)
        self.platform.vote_case(self.cid, voter=voter, case_id=case_id, stance=stance)
        assert self.state().last_seq == seq, "duplicate vote must be a no-op"
        assert dict(self.state().case_votes) == votes

    def op_reason(self):
        if not self.cases:
            return
        self.platform.add_reason(
            self.cid,
            author=self._user(),
            case_id=self.rng.choice(self.cases),
            side=self.rng.choice(list(ReasonSide)),
            text="Because.",
        )

    def op_like_twice(self):
        reasons = sorted(self.state().reasons)
        if not reasons:
            return
        user, reason_id = self._user(), self.rng.choice(reasons)
        first = self.platform.like_reason(self.cid, user=user, reason_id=reason_id)
        second = self.platform.like_reason(self.cid, user=user, reason_id=reason_id)
        assert first == second, "re-like must not double count"

    def op_edit(self):
        if not self.policies:
            return
        pid = self.rng.choice(self.policies)
        head = self.state().policies[pid].head_revision_id
        outcome = self.platform.submit_edit(
            self.cid,
            EditSubmission(
                policy_id=pid,
                base_revision_id=head,
                new_title=f"Edited {self.rng.randint(0, 999)}",
                new_description="New wording.",
                label_updates=(),
                author=self._user(),
            ),
        )
        assert not isinstance(outcome, ConflictReport)

    def op_revert(self):
        if not self.policies:
            return
        pid = self.rng.choice(self.policies)
        chain = self.state().policy_chains[pid]
        self.platform.revert_policy(
            self.cid, actor=self._user(), policy_id=pid, to_revision_id=self.rng.choice(chain)
        )

    def op_thread(self):
        from agorum.discussion import ScopeKind, ThreadScope

        self.platform.open_thread(
            self.cid, author=self._user(), scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="C."
        )

    def op_advance(self):
        phase = self.state().require_campaign().phase
        if phase == Phase.CLOSED or self.rng.random() > 0.25:
            return
        target = {Phase.DELIBERATION: Phase.FINALIZATION, Phase.FINALIZATION: Phase.CLOSED}[phase]
        if target == Phase.FINALIZATION:
            self.eligible_at_freeze = set(eligible_policy_ids(self.state()))
        self.platform.advance_phase(self.cid, actor=self.organizer, target=target)
        if target == Phase.FINALIZATION:
            self.ballot_at_freeze = set(self.state().ballot)

    def op_policy_vote(self):
        if self.state().ballot:
            self.platform.cast_policy_vote(
                self.cid,
                voter=self._user(),
                policy_id=self.rng.choice(list(self.state().ballot)),
                direction=self.rng.choice(list(VoteDirection)),
            )

    # -- invariants --

    def check_invariants(self):
        state = self.state()
        # Case immutability: stored bodies match creation-time bodies.
        for case_id, (title, description) in self.case_bodies.items():
            assert (state.cases[case_id].title, state.cases[case_id].description) == (title, description)
        # Phase monotonicity.
        indexes = [phase_index(p) for p in self.phase_trace]
        assert indexes == sorted(indexes)
        # Ballot eligibility frozen at the transition instant.
        if self.ballot_at_freeze is not None:
            assert self.ballot_at_freeze == self.eligible_at_freeze
        # Finalization freeze: edits now rejected.
        if state.require_campaign().phase in (Phase.FINALIZATION, Phase.CLOSED) and self.policies:
            pid = self.policies[0]
            with pytest.raises(PhaseClosed):
                self.platform.submit_edit(
                    self.cid,
                    EditSubmission(
                        policy_id=pid,
                        base_revision_id=state.policies[pid].head_revision_id,
                        new_title="Frozen",
                        new_description="Frozen.",
                        label_updates=(),
                        author=self.users[0],
                    ),
                )
        # Votes hidden until cast, visible after.
        for case_id in self.cases:
            for user in self.users:
                view = self.platform.case_view(self.cid, case_id, viewer=user)
                assert view["votes_hidden"] == ((case_id, user) not in state.case_votes)


def test_criterion_lifecycle_invariants_randomized():
    started = time.monotonic()
    for seed in range(1000):
        _Walk(seed).run()
    elapsed = time.monotonic() - started
    assert elapsed < 30.0
    _ok(f"lifecycle invariants over 1000 randomized operation sequences in {elapsed:.1f} s")


def test_criterion_event_sourcing_oracle():
    # Prefix determinism over random scripts.
    for seed in (7, 21, 42, 1001, 2024):
        walk = _Walk(seed, max_ops=14)
        walk.run()
        events = walk.platform.log.read(walk.cid)
        for cut in range(len(events) + 1):
            assert store.snapshot(walk.platform.log, walk.cid, upto_seq=cut) == replay(events[:cut])

    # Participation recomputed from the raw log matches live values; case votes
    # and likes are excluded from the action count (6 countable + 3 excluded
    # falls short of the 7-action minimum).
    period = Period(start=T0, end=T0 + timedelta(days=2))
    from agorum.model import CampaignConfig
    from agorum.discussion import ScopeKind, ThreadScope, participation_status

    platform = Platform(ids=make_ids(), clock=make_clock())
    view, org = platform.create_campaign(
        title="Periods", organizer_name="Org", config=CampaignConfig(min_actions_per_period=7, periods=(period,))
    )
    cid = view["id"]
    ann = platform.invite(cid, actor=org.user_id, display_name="Ann").user_id
    ben = platform.invite(cid, actor=org.user_id, display_name="Ben").user_id
    platform.advance_phase(cid, actor=org.user_id, target=Phase.DELIBERATION)

    policy = platform.create_policy(cid, author=ann, title="P", description="V1.")  # 1
    platform.submit_edit(
        cid,
        EditSubmission(
            policy_id=policy["id"],
            base_revision_id=policy["head_revision_id"],
            new_title="P",
            new_description="V2.",
            label_updates=(),
            author=ann,
        ),
    )  # 2
    case = platform.create_case(
        cid, author=ann, title="C", description="D.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R."),)
    )  # 3
    platform.link_case(cid, actor=ann, policy_id=policy["id"], case_id=case["id"], label=Label.ALLOWED)  # 4
    platform.add_reason(cid, author=ann, case_id=case["id"], side=ReasonSide.ALLOW, text="More.")  # 5
    platform.open_thread(cid, author=ann, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="Hi.")  # 6
    other = platform.create_case(
        cid, author=ben, title="C2", description="D2.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R2."),)
    )
    platform.vote_case(cid, voter=ann, case_id=other["id"], stance=Stance.DISALLOW)  # excluded
    platform.vote_case(cid, voter=ann, case_id=other["id"], stance=Stance.UNSURE)  # excluded
    platform.like_reason(cid, user=ann, reason_id=other["reasons"][0]["id"])  # excluded

    live = platform.activity(cid, user=ann, period_index=0)["participation"]
    assert live == {"actions": 6, "meets_minimum": False}
    recomputed = participation_status(replay(platform.log.read(cid)), ann, period)
    assert recomputed == live

    platform.reply(cid, author=ann, thread_id=platform.list_threads(cid)[0]["id"], text="Seventh.")
    assert platform.activity(cid, user=ann, period_index=0)["participation"]["meets_minimum"] is True

    # Campaign report recomputed from the raw log matches the live report.
    platform.advance_phase(cid, actor=org.user_id, target=Phase.FINALIZATION)
    for voter, direction in ((ann, VoteDirection.UP), (ben, VoteDirection.UP)):
        platform.cast_policy_vote(cid, voter=voter, policy_id=policy["id"], direction=direction)
    live_report = platform.report(cid)
    replayed_report = analytics.campaign_report(replay(platform.log.read(cid)))
    assert replayed_report == live_report
    _ok("event-sourcing oracle: snapshot == replay at every prefix; participation and report recomputable from the log")


def test_criterion_assistant_flows():
    platform = Platform(ids=make_ids(), clock=make_clock())
    view, org = platform.create_campaign(title="T", organizer_name="Org")
    cid = view["id"]
    user = platform.invite(cid, actor=org.user_id, display_name="A").user_id
    platform.advance_phase(cid, actor=org.user_id, target=Phase.DELIBERATION)
    policy = platform.create_policy(cid, author=user, title="P", description="D.")
    case = platform.create_case(
        cid, author=user, title="C", description="S.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R."),)
    )
    before = platform.state(cid).last_seq

    # Flow graphs per kind, checked by enumeration.
    actions = ("choose_mode", "generate", "restart")
    for kind in assistant.SessionKind:
        flow = assistant.FLOW[kind]
        frontier, seen, edges = [assistant.INITIAL_STATUS[kind]], {assistant.INITIAL_STATUS[kind]}, set()
        while frontier:
            status = frontier.pop()
            for action in actions:
                nxt = flow.get((status, action))
                if nxt is None:
                    continue
                edges.add((status, action, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        assert edges == {(s, a, n) for (s, a), n in flow.items()}

    # Scripted traversals of all three kinds through the service.
    s1 = platform.start_assistant_session(cid, user=user, kind=assistant.SessionKind.CASE_BRAINSTORM, policy_id=policy["id"])
    platform.assistant_choose_mode(s1.id, assistant.BrainstormMode.CRITIQUE)
    platform.assistant_generate(s1.id)
    transcript_len = len(s1.transcript)
    platform.assistant_restart(s1.id)
    assert s1.status is assistant.SessionStatus.AWAITING_MODE
    assert len(s1.transcript) == transcript_len + 1  # restart never truncates

    s2 = platform.start_assistant_session(
        cid, user=user, kind=assistant.SessionKind.POLICY_REVISION, policy_id=policy["id"], selected_case_ids=[case["id"]]
    )
    platform.assistant_generate(s2.id, instructions=None)
    platform.assistant_generate(s2.id, instructions="shorter")
    s3 = platform.start_assistant_session(
        cid, user=user, kind=assistant.SessionKind.POLICY_CREATION, selected_case_ids=[case["id"]]
    )
    platform.assistant_generate(s3.id)

    assert platform.state(cid).last_seq == before  # no campaign mutation before adopt+submit
    draft = platform.assistant_adopt(cid, s3.id, 0)
    assert platform.state(cid).last_seq == before
    platform.create_policy(cid, author=user, title=draft["title"], description=draft["description"])
    assert platform.state(cid).last_seq > before
    _ok("assistant flows: three kinds traverse their flow graphs; restart keeps transcript; no mutation before adopt+submit")


def test_criterion_seed_file():
    platform = Platform(ids=make_ids(), clock=make_clock())
    campaign_id, _ = seeds.seed_from_file(platform, SEED_DIR / "ai_course_campaign.json")
    policies = platform.list_policies(campaign_id)
    cases = platform.list_cases(campaign_id)
    assert len(policies) == 3
    assert len(cases) == 6
    links = [(link["case_title"], link["label"]) for p in policies for link in p["links"]]
    assert len(links) == 6
    expected = {
        "Lukas uses AI to summarize key points from papers": "disallowed",
        "Ding asks AI to explain complex topics": "disallowed",
        "Mark submits AI's code as his own": "disallowed",
        "Priya copies AI's code without understanding it": "allowed",
        "Omar picks AI-generated ideas for course projects": "disallowed",
        "Emily uses AI to revamp her discarded ideas": "ambiguous",
    }
    assert dict(links) == expected
    by_label = sorted(label for _, label in links)
    assert by_label == ["allowed", "ambiguous", "disallowed", "disallowed", "disallowed", "disallowed"]
    _ok("seed file: 3 policies, 6 cases, 6 links with the printed labels (verified field-by-field)")
