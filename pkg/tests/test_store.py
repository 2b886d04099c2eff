"""Event log guarantees: replay determinism, durability, export/import, feed."""

from __future__ import annotations

import os
import subprocess
import sys
import textwrap

import pytest

from agorum import Platform, store
from agorum.engine import replay
from agorum.model import Stance, ReasonSide, Label, Phase

from conftest import make_clock, make_ids


def _scripted_platform(log=None):
    """Run a fixed operation script and return (platform, campaign_id)."""
    p = Platform(log=log, ids=make_ids(), clock=make_clock())
    view, org = p.create_campaign(title="Scripted", organizer_name="Org")
    cid = view["id"]
    users = [p.invite(cid, actor=org.user_id, display_name=f"U{i}") for i in range(3)]
    p.advance_phase(cid, actor=org.user_id, target=Phase.DELIBERATION)
    a, b, c = (u.user_id for u in users)
    policy = p.create_policy(cid, author=a, title="P1", description="V1.")
    case = p.create_case(
        cid, author=b, title="C1", description="D1.", stance=Stance.ALLOW, reasons=((ReasonSide.ALLOW, "R."),)
    )
    p.link_case(cid, actor=b, policy_id=policy["id"], case_id=case["id"], label=Label.DISALLOWED)
    p.vote_case(cid, voter=a, case_id=case["id"], stance=Stance.ALLOW)
    p.vote_case(cid, voter=c, case_id=case["id"], stance=Stance.UNSURE)
    p.like_reason(cid, user=c, reason_id=case["reasons"][0]["id"])
    from agorum.engine import EditSubmission

    p.submit_edit(
        cid,
        EditSubmission(
            policy_id=policy["id"],
            base_revision_id=policy["head_revision_id"],
            new_title="P1",
            new_description="V2.",
            label_updates=((case["id"], Label.ALLOWED),),
            author=c,
        ),
    )
    return p, cid


def test_snapshot_equals_replay_at_every_prefix():
    p, cid = _scripted_platform()
    events = p.log.read(cid)
    assert [e.seq for e in events] == list(range(1, len(events) + 1))
    for cut in range(len(events) + 1):
        snap = store.snapshot(p.log, cid, upto_seq=cut)
        fold = replay(events[:cut])
        assert snap == fold
    assert store.snapshot(p.log, cid) == p.state(cid)


def test_sqlite_roundtrip_and_recovery(tmp_path):
    db = tmp_path / "events.db"
    log = store.SqliteEventLog(db)
    p, cid = _scripted_platform(log)
    live_state = p.state(cid)
    log.close()

    reopened = store.SqliteEventLog(db)
    recovered = Platform(log=reopened)
    assert recovered.state(cid) == live_state
    # Seq continues without gaps after recovery.
    n = reopened.next_seq(cid)
    assert n == len(reopened.read(cid)) + 1


def test_acknowledged_appends_survive_process_kill(tmp_path):
    db = tmp_path / "killed.db"
    script = textwrap.dedent(
        f"""
        import os
        from agorum import Platform
        from agorum.store import SqliteEventLog
        from agorum.model import Phase

        log = SqliteEventLog({str(db)!r})
        p = Platform(log=log)
        view, org = p.create_campaign(title="Crash test", organizer_name="Org")
        p.invite(view["id"], actor=org.user_id, display_name="A")
        p.advance_phase(view["id"], actor=org.user_id, target=Phase.DELIBERATION)
        print(view["id"], flush=True)
        os._exit(1)  # hard kill: no close(), no atexit
        """
    )
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True)
    campaign_id = proc.stdout.strip()
    assert campaign_id
    log = store.SqliteEventLog(db)
    events = log.read(campaign_id)
    assert [e.kind for e in events] == ["campaign_created", "user_joined", "phase_advanced"]
    recovered = Platform(log=log)
    assert recovered.state(campaign_id).campaign.phase == Phase.DELIBERATION


def test_export_import_round_trip(tmp_path):
    p, cid = _scripted_platform()
    dump = p.export_dump(cid)
    header = dump.splitlines()[0]
    assert '"format": "agorum-events"' in header and '"version": 1' in header

    fresh = Platform(log=store.MemoryEventLog())
    imported_id = fresh.import_dump(dump)
    assert imported_id == cid
    assert fresh.state(cid) == p.state(cid)
    assert fresh.export_dump(cid) == dump

    with pytest.raises(Exception):
        fresh.import_dump(dump)  # campaign slot no longer empty


def test_import_rejects_forged_dumps():
    p, cid = _scripted_platform()
    dump = p.export_dump(cid)
    bad_header = dump.replace("agorum-events", "something-else", 1)
    with pytest.raises(Exception):
        Platform().import_dump(bad_header)
    # Drop one line from the middle: no longer gapless.
    lines = dump.splitlines()
    gappy = "\n".join(lines[:3] + lines[4:]) + "\n"
    with pytest.raises(Exception):
        Platform().import_dump(gappy)


def test_change_feed_resumes_exactly_at_from_seq():
    p, cid = _scripted_platform()
    events = p.log.read(cid)
    tail = list(p.feed(cid, from_seq=4))
    assert [e.seq for e in tail] == [e.seq for e in events if e.seq >= 4]
    assert list(p.feed(cid, from_seq=len(events) + 1)) == []


def test_change_feed_blocking_mode_sees_new_events():
    import threading

    p, cid = _scripted_platform()
    start_at = p.log.next_seq(cid)
    got: list = []
    done = threading.Event()

    def consume():
        for event in p.feed(cid, from_seq=start_at, wait=True, stop=done.is_set):
            got.append(event.kind)
            if event.kind == "thread_opened":
                break

    t = threading.Thread(target=consume, daemon=True)
    t.start()
    from agorum.discussion import ThreadScope, ScopeKind

    alice = sorted(p.state(cid).campaign.roster)[0]
    p.open_thread(cid, author=alice, scope=ThreadScope(ScopeKind.ABOUT), title="T", first_comment="Hi.")
    t.join(timeout=5)
    done.set()
    assert not t.is_alive()
    assert got[-1] == "thread_opened"


def test_on_disk_format_is_version_stamped(tmp_path):
    db = tmp_path / "stamped.db"
    log = store.SqliteEventLog(db)
    log.close()
    import sqlite3

    conn = sqlite3.connect(db)
    assert conn.execute("PRAGMA user_version").fetchone()[0] == store.SqliteEventLog.ON_DISK_VERSION
    conn.execute("PRAGMA user_version=99")
    conn.commit()
    conn.close()
    with pytest.raises(Exception):
        store.SqliteEventLog(db)


def test_exported_dumps_carry_no_auth_tokens(tmp_path):
    log = store.SqliteEventLog(tmp_path / "tok.db")
    p = Platform(log=log)
    view, org = p.create_campaign(title="T", organizer_name="Org")
    member = p.invite(view["id"], actor=org.user_id, display_name="A")
    dump = p.export_dump(view["id"])
    assert org.token not in dump
    assert member.token not in dump
