#!/usr/bin/env python3
"""End-to-end walkthrough against an in-memory platform.

Seeds the bundled campaign fixture, then plays a short deliberation: a
participant critiques a policy with a new case, votes raise a misalignment
alert, an edit conflict is hit and resolved, the policy is revised so the
alert clears, and finalization voting produces a consensus report.

Usage: python scripts/run_demo.py [--store PATH]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from agorum import Platform, analytics, seeds
from agorum.engine import ConflictReport, EditSubmission
from agorum.model import Label, Phase, ReasonSide, Stance, VoteDirection
from agorum.store import SqliteEventLog


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--store", help="optional SQLite path (defaults to in-memory)")
    args = parser.parse_args()

    platform = Platform(log=SqliteEventLog(args.store) if args.store else None)
    seed_file = Path(__file__).resolve().parent.parent / "seeds" / "ai_course_campaign.json"
    cid, organizer = seeds.seed_from_file(platform, seed_file)
    print(f"seeded campaign {cid} with {len(platform.list_policies(cid))} policies")

    students = [platform.invite(cid, actor=organizer.user_id, display_name=n) for n in ("Ana", "Ben", "Caro", "Dee")]
    ana, ben, caro, dee = (s.user_id for s in students)
    platform.advance_phase(cid, actor=organizer.user_id, target=Phase.DELIBERATION)
    print("deliberation open")

    brainstorm = next(p for p in platform.list_policies(cid) if "Brainstorming" in p["title"])

    # Ben critiques the policy with a case he believes it mishandles.
    case = platform.create_case(
        cid,
        author=ben,
        title="Recombining the group's own discarded ideas",
        description="A tool is fed only the group's abandoned drafts and proposes a new direction.",
        stance=Stance.ALLOW,
        reasons=((ReasonSide.ALLOW, "All raw material came from the students."),),
    )
    platform.link_case(cid, actor=ben, policy_id=brainstorm["id"], case_id=case["id"], label=Label.DISALLOWED)
    platform.vote_case(cid, voter=caro, case_id=case["id"], stance=Stance.ALLOW)
    platform.vote_case(cid, voter=dee, case_id=case["id"], stance=Stance.ALLOW)

    view = platform.policy_view(cid, brainstorm["id"], viewer=ben)
    alert = next(link for link in view["links"] if link["case_id"] == case["id"])["alert"]
    print(f"alert on the new case: {alert}")

    # Ana and Ben edit concurrently; Ana hits the conflict and rebases.
    head = view["head_revision"]["revision_id"]
    platform.submit_edit(
        cid,
        EditSubmission(
            policy_id=brainstorm["id"],
            base_revision_id=head,
            new_title=view["title"],
            new_description=view["description"] + " Tool transcripts must be kept.",
            label_updates=(),
            author=ben,
        ),
    )
    outcome = platform.submit_edit(
        cid,
        EditSubmission(
            policy_id=brainstorm["id"],
            base_revision_id=head,
            new_title=view["title"],
            new_description="Students may use tools to rework their own material.",
            label_updates=(),
            author=ana,
        ),
    )
    assert isinstance(outcome, ConflictReport)
    print(f"edit conflict detected: {len(outcome.intervening_revisions)} intervening revision(s); rebasing")
    platform.submit_edit(
        cid,
        EditSubmission(
            policy_id=brainstorm["id"],
            base_revision_id=outcome.current_head,
            new_title=view["title"],
            new_description=(
                "Students may use tools to assist with brainstorming, including reworking the group's own "
                "material; transcripts must be kept and final ideas must be engaged with critically."
            ),
            label_updates=((case["id"], Label.ALLOWED),),
            author=ana,
        ),
    )
    view = platform.policy_view(cid, brainstorm["id"], viewer=ben)
    alert = next(link for link in view["links"] if link["case_id"] == case["id"])["alert"]
    print(f"after revision the alert is: {alert}; history length {view['history_length']}")

    platform.advance_phase(cid, actor=organizer.user_id, target=Phase.FINALIZATION)
    ballot = platform.ballot_view(cid)
    print(f"finalization ballot has {len(ballot)} policies")
    for entry in ballot:
        for voter in (ana, ben, caro):
            platform.cast_policy_vote(cid, voter=voter, policy_id=entry["policy_id"], direction=VoteDirection.UP)
        platform.cast_policy_vote(
            cid,
            voter=dee,
            policy_id=entry["policy_id"],
            direction=VoteDirection.DOWN,
            public_reason="Still too broad for my taste.",
        )

    platform.advance_phase(cid, actor=organizer.user_id, target=Phase.CLOSED)
    report = platform.report(cid)
    print()
    print(analytics.report_csv(report))
    print(
        f"{report.n_majority}/{report.n_policies} policies majority-supported "
        f"({report.pct_majority}%), weighted split index {report.weighted_gini:.4f}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
