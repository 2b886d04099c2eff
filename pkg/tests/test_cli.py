"""Operator CLI: seed, phase, report, export/import, config precedence."""

from __future__ import annotations

import json
import os
from pathlib import Path

from agorum import cli
from agorum.service import Platform
from agorum.store import SqliteEventLog

SEED_DIR = Path(__file__).resolve().parent.parent / "seeds"


def _run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_seed_then_report_via_cli(tmp_path, capsys):
    db = str(tmp_path / "store.db")
    code, out, _ = _run(capsys, "seed", str(SEED_DIR / "ai_course_campaign.json"), "--store", db)
    assert code == 0
    seeded = json.loads(out)
    cid = seeded["campaign_id"]
    assert seeded["organizer_token"]

    # Walk the campaign to finalization and vote a little, out of band.
    platform = Platform(log=SqliteEventLog(db))
    from agorum.model import Phase, VoteDirection

    org = seeded["organizer_user_id"]
    voters = [platform.invite(cid, actor=org, display_name=f"V{i}").user_id for i in range(3)]
    platform.advance_phase(cid, actor=org, target=Phase.DELIBERATION)

    code, out, _ = _run(capsys, "phase", cid, "finalization", "--store", db)
    assert code == 0 and json.loads(out)["phase"] == "finalization"

    platform = Platform(log=SqliteEventLog(db))
    for voter in voters:
        ballot = platform.ballot_view(cid, viewer=voter)
        for entry in ballot:
            platform.cast_policy_vote(cid, voter=voter, policy_id=entry["policy_id"], direction=VoteDirection.UP)

    code, out, _ = _run(capsys, "report", cid, "--store", db, "--format", "json")
    report = json.loads(out)
    assert report["n_policies"] == 3
    assert report["n_majority"] == 3
    assert report["weighted_gini"] == 0.0

    code, out, _ = _run(capsys, "report", cid, "--store", db, "--format", "csv")
    assert out.splitlines()[0] == "policy_id,v_u,v_d,gini,majority_supported"
    assert len(out.strip().splitlines()) == 4

    code, out, _ = _run(capsys, "report", cid, "--store", db)
    assert "majority-supported:  3 (100%)" in out


def test_export_import_round_trip_via_cli(tmp_path, capsys):
    db1, db2 = str(tmp_path / "a.db"), str(tmp_path / "b.db")
    code, out, _ = _run(capsys, "seed", str(SEED_DIR / "ai_course_campaign_baseline.yaml"), "--store", db1)
    cid = json.loads(out)["campaign_id"]

    dump_file = tmp_path / "dump.jsonl"
    code, out, _ = _run(capsys, "export", cid, "--store", db1, "-o", str(dump_file))
    assert code == 0
    assert dump_file.read_text("utf-8").startswith('{"campaign_id"')

    code, out, _ = _run(capsys, "import", str(dump_file), "--store", db2)
    assert code == 0 and json.loads(out)["campaign_id"] == cid

    first = Platform(log=SqliteEventLog(db1))
    second = Platform(log=SqliteEventLog(db2))
    assert first.state(cid) == second.state(cid)


def test_report_before_finalization_is_a_clean_error(tmp_path, capsys):
    db = str(tmp_path / "store.db")
    code, out, _ = _run(capsys, "seed", str(SEED_DIR / "ai_course_campaign.json"), "--store", db)
    cid = json.loads(out)["campaign_id"]
    code, out, err = _run(capsys, "report", cid, "--store", db)
    assert code == 2
    assert json.loads(err)["error"]["code"] == "phase_closed"


def test_config_precedence_flags_env_file(tmp_path, monkeypatch):
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"store": "from-file.db", "addr": "0.0.0.0:1111"}), "utf-8")
    config = json.loads(config_file.read_text("utf-8"))

    assert cli.resolve_setting("store", "from-flag.db", config) == "from-flag.db"
    monkeypatch.setenv("AGORUM_STORE", "from-env.db")
    assert cli.resolve_setting("store", None, config) == "from-env.db"
    monkeypatch.delenv("AGORUM_STORE")
    assert cli.resolve_setting("store", None, config) == "from-file.db"
    assert cli.resolve_setting("store", None, {}, cli.DEFAULT_STORE) == "agorum.db"


def test_missing_seed_file_is_a_clean_error(tmp_path, capsys):
    code, out, err = _run(capsys, "seed", str(tmp_path / "nope.json"), "--store", str(tmp_path / "s.db"))
    assert code == 2
    assert json.loads(err)["error"]["code"] == "file_not_found"


def test_store_path_flag_alias(tmp_path, capsys):
    db = str(tmp_path / "alias.db")
    code, out, _ = _run(capsys, "seed", str(SEED_DIR / "ai_course_campaign.json"), "--store-path", db)
    assert code == 0
    assert json.loads(out)["store"] == db
