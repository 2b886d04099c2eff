"""Operator CLI: seed, export, import, report, phase control, and serve.

Configuration precedence: command-line flags, then AGORUM_* environment
variables, then an optional JSON config file (--config / AGORUM_CONFIG).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import analytics, seeds
from .errors import DomainError
from .model import Phase
from .service import Platform
from .store import SqliteEventLog

ENV_PREFIX = "AGORUM"
DEFAULT_STORE = "agorum.db"
DEFAULT_ADDR = "127.0.0.1:8700"


def _load_config_file(path: Optional[str]) -> dict:
    path = path or os.environ.get(f"{ENV_PREFIX}_CONFIG")
    if not path:
        return {}
    return json.loads(Path(path).read_text("utf-8"))


def resolve_setting(name: str, flag_value: Optional[str], config: dict, default: Optional[str] = None) -> Optional[str]:
    if flag_value is not None:
        return flag_value
    env_value = os.environ.get(f"{ENV_PREFIX}_{name.upper()}")
    if env_value is not None:
        return env_value
    if name in config:
        return config[name]
    return default


def _platform(store_path: str) -> Platform:
    return Platform(log=SqliteEventLog(store_path))


def _print(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def cmd_seed(args, config) -> int:
    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    platform = _platform(store_path)
    campaign_id, organizer = seeds.seed_from_file(platform, args.file)
    _print(
        {
            "campaign_id": campaign_id,
            "organizer_user_id": organizer.user_id,
            "organizer_token": organizer.token,
            "store": store_path,
        }
    )
    return 0


def cmd_export(args, config) -> int:
    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    platform = _platform(store_path)
    dump = platform.export_dump(args.campaign_id)
    if args.output:
        Path(args.output).write_text(dump, "utf-8")
    else:
        sys.stdout.write(dump)
    return 0


def cmd_import(args, config) -> int:
    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    platform = _platform(store_path)
    campaign_id = platform.import_dump(Path(args.file).read_text("utf-8"))
    _print({"campaign_id": campaign_id, "store": store_path})
    return 0


def _format_report_table(report: analytics.CampaignReport) -> str:
    data = report.to_dict()
    lines = [
        f"participants:        {data['n_participants']}",
        f"policies:            {data['n_policies']}",
        f"majority-supported:  {data['n_majority']} ({data['pct_majority']}%)",
        f"weighted gini:       {data['weighted_gini'] if data['weighted_gini'] is not None else 'n/a'}",
        f"pct inspired by others' cases: {data['pct_specific_case_other'] if data['pct_specific_case_other'] is not None else 'n/a'}",
        "",
        f"{'policy':<28} {'up':>4} {'down':>5} {'gini':>8} {'majority':>9}",
    ]
    for row in data["per_policy"]:
        gini_cell = f"{row['gini']:.4f}" if row["gini"] is not None else "-"
        supported = {True: "yes", False: "no", None: "-"}[row["majority_supported"]]
        lines.append(f"{row['policy_id']:<28} {row['v_u']:>4} {row['v_d']:>5} {gini_cell:>8} {supported:>9}")
    return "\n".join(lines)


def cmd_report(args, config) -> int:
    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    platform = _platform(store_path)
    report = platform.report(args.campaign_id)
    if args.format == "json":
        _print(report.to_dict())
    elif args.format == "csv":
        sys.stdout.write(analytics.report_csv(report))
    else:
        print(_format_report_table(report))
    return 0


def cmd_phase(args, config) -> int:
    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    platform = _platform(store_path)
    state = platform.state(args.campaign_id)
    actor = args.actor or sorted(state.require_campaign().organizer_ids)[0]
    view = platform.advance_phase(args.campaign_id, actor=actor, target=Phase(args.target))
    _print({"campaign_id": args.campaign_id, "phase": view["phase"]})
    return 0


def cmd_serve(args, config) -> int:
    import uvicorn

    from .gateway import create_app

    store_path = resolve_setting("store", args.store, config, DEFAULT_STORE)
    addr = resolve_setting("addr", args.addr, config, DEFAULT_ADDR)
    frontend = resolve_setting("frontend", args.frontend, config)
    host, _, port = addr.rpartition(":")
    platform = _platform(store_path)
    app = create_app(platform, frontend_dir=frontend)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agorum", description="Case-grounded policy deliberation platform.")
    parser.add_argument("--config", help="path to a JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seed", help="create a campaign from a seed file")
    p.add_argument("file")
    p.add_argument("--store", "--store-path", dest="store")
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("export", help="dump a campaign's event log as JSON lines")
    p.add_argument("campaign_id")
    p.add_argument("--store", "--store-path", dest="store")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", help="load an event dump into the store")
    p.add_argument("file")
    p.add_argument("--store", "--store-path", dest="store")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("report", help="print a campaign's consensus report")
    p.add_argument("campaign_id")
    p.add_argument("--store", "--store-path", dest="store")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("phase", help="advance a campaign to the next phase")
    p.add_argument("campaign_id")
    p.add_argument("target", choices=[phase.value for phase in Phase])
    p.add_argument("--store", "--store-path", dest="store")
    p.add_argument("--actor", help="organizer user id (defaults to the first organizer)")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--addr", help=f"host:port (default {DEFAULT_ADDR})")
    p.add_argument("--store", "--store-path", dest="store")
    p.add_argument("--frontend", help="directory of built UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config_file(args.config)
        return args.func(args, config)
    except DomainError as exc:
        print(json.dumps({"error": exc.to_dict()}), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(json.dumps({"error": {"code": "file_not_found", "message": str(exc)}}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
