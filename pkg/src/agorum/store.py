"""Durable persistence: append-only event logs plus snapshot/replay helpers.

The log is the source of truth; materialized state is always recomputable by
folding it (see :func:`agorum.engine.replay`). Appends for one campaign are
serialized by the hosting service; ``seq`` continues without gaps across
restarts because the next value is derived from the stored maximum.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path
from typing import Callable, Iterator, Optional

from .errors import ValidationError
from .events import Event
from . import engine

EXPORT_FORMAT = "agorum-events"
EXPORT_VERSION = 1


class EventLog:
    """Append-only event storage, totally ordered per campaign."""

    def append(self, events: list[Event]) -> list[Event]:
        """Atomically append a batch, assigning consecutive seq numbers.

        Returns the stored events (with ``seq`` filled in)."""
        raise NotImplementedError

    def read(self, campaign_id: str, from_seq: int = 1) -> list[Event]:
        raise NotImplementedError

    def campaign_ids(self) -> list[str]:
        raise NotImplementedError

    def next_seq(self, campaign_id: str) -> int:
        raise NotImplementedError

    def close(self) -> None:  # pragma: no cover - trivial default
        pass


class MemoryEventLog(EventLog):
    def __init__(self):
        self._events: dict[str, list[Event]] = {}
        self._lock = threading.Lock()

    def append(self, events: list[Event]) -> list[Event]:
        if not events:
            return []
        campaign_id = events[0].campaign_id
        if any(e.campaign_id != campaign_id for e in events):
            raise ValidationError("events", "a batch must belong to a single campaign")
        with self._lock:
            log = self._events.setdefault(campaign_id, [])
            seq = len(log) + 1
            stored = [e.with_seq(seq + i) for i, e in enumerate(events)]
            log.extend(stored)
            return stored

    def read(self, campaign_id: str, from_seq: int = 1) -> list[Event]:
        with self._lock:
            return [e for e in self._events.get(campaign_id, []) if e.seq >= from_seq]

    def campaign_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._events)

    def next_seq(self, campaign_id: str) -> int:
        with self._lock:
            return len(self._events.get(campaign_id, [])) + 1


class SqliteEventLog(EventLog):
    """Single-file embedded log; committed appends survive process death."""

    ON_DISK_VERSION = 1

    def __init__(self, path: str | Path):
        self._path = str(path)
        self._conn = sqlite3.connect(self._path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA synchronous=FULL")
        self._lock = threading.RLock()
        stored = self._conn.execute("PRAGMA user_version").fetchone()[0]
        if stored == 0:
            self._conn.execute(f"PRAGMA user_version={self.ON_DISK_VERSION}")
        elif stored != self.ON_DISK_VERSION:
            raise ValidationError("store", f"unsupported on-disk format version {stored}")
        with self._lock, self._conn:
            self._conn.execute(
                """
                CREATE TABLE IF NOT EXISTS events (
                    campaign_id TEXT NOT NULL,
                    seq INTEGER NOT NULL,
                    actor TEXT NOT NULL,
                    kind TEXT NOT NULL,
                    payload TEXT NOT NULL,
                    occurred_at TEXT NOT NULL,
                    PRIMARY KEY (campaign_id, seq)
                )
                """
            )
            self._conn.execute(
                """
                CREATE TABLE IF NOT EXISTS principals (
                    token TEXT PRIMARY KEY,
                    campaign_id TEXT NOT NULL,
                    user_id TEXT NOT NULL,
                    display_name TEXT NOT NULL,
                    roles TEXT NOT NULL
                )
                """
            )

    def append(self, events: list[Event]) -> list[Event]:
        if not events:
            return []
        campaign_id = events[0].campaign_id
        if any(e.campaign_id != campaign_id for e in events):
            raise ValidationError("events", "a batch must belong to a single campaign")
        with self._lock, self._conn:
            seq = self._next_seq_locked(campaign_id)
            stored = [e.with_seq(seq + i) for i, e in enumerate(events)]
            self._conn.executemany(
                "INSERT INTO events VALUES (?, ?, ?, ?, ?, ?)",
                [
                    (
                        e.campaign_id,
                        e.seq,
                        e.actor,
                        e.kind,
                        json.dumps(e.payload, sort_keys=True),
                        e.to_dict()["occurred_at"],
                    )
                    for e in stored
                ],
            )
            return stored

    def _next_seq_locked(self, campaign_id: str) -> int:
        row = self._conn.execute(
            "SELECT COALESCE(MAX(seq), 0) FROM events WHERE campaign_id = ?", (campaign_id,)
        ).fetchone()
        return int(row[0]) + 1

    def next_seq(self, campaign_id: str) -> int:
        with self._lock:
            return self._next_seq_locked(campaign_id)

    def read(self, campaign_id: str, from_seq: int = 1) -> list[Event]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT seq, actor, kind, payload, occurred_at FROM events "
                "WHERE campaign_id = ? AND seq >= ? ORDER BY seq",
                (campaign_id, from_seq),
            ).fetchall()
        return [
            Event.from_dict(
                {
                    "seq": seq,
                    "campaign_id": campaign_id,
                    "actor": actor,
                    "kind": kind,
                    "payload": json.loads(payload),
                    "occurred_at": occurred_at,
                }
            )
            for seq, actor, kind, payload, occurred_at in rows
        ]

    def campaign_ids(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute("SELECT DISTINCT campaign_id FROM events ORDER BY campaign_id")
            return [r[0] for r in rows.fetchall()]

    # Principal storage is infrastructure (auth tokens never enter the event log).

    def save_principal(self, token: str, campaign_id: str, user_id: str, display_name: str, roles: list[str]) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO principals VALUES (?, ?, ?, ?, ?)",
                (token, campaign_id, user_id, display_name, json.dumps(sorted(roles))),
            )

    def load_principals(self) -> list[tuple[str, str, str, str, list[str]]]:
        with self._lock:
            rows = self._conn.execute("SELECT token, campaign_id, user_id, display_name, roles FROM principals")
            return [(t, c, u, d, json.loads(r)) for t, c, u, d, r in rows.fetchall()]

    def close(self) -> None:
        with self._lock:
            self._conn.close()


# ---------------------------------------------------------------------------
# Snapshot / replay / feed


def snapshot(log: EventLog, campaign_id: str, upto_seq: Optional[int] = None) -> engine.CampaignState:
    """Materialize the campaign's state as of ``upto_seq`` (default: latest)."""
    events = log.read(campaign_id)
    if upto_seq is not None:
        events = [e for e in events if e.seq <= upto_seq]
    return engine.replay(events)


def replay_from(
    log: EventLog, campaign_id: str, state: engine.CampaignState, from_seq: int
) -> engine.CampaignState:
    """Deterministic fold of the tail of the log onto an existing state."""
    for event in log.read(campaign_id, from_seq):
        engine.apply_event(state, event)
    return state


def change_feed(
    log: EventLog,
    campaign_id: str,
    from_seq: int = 1,
    *,
    wakeup: Optional[threading.Condition] = None,
    stop: Optional[Callable[[], bool]] = None,
    poll_interval: float = 0.5,
) -> Iterator[Event]:
    """Ordered event stream resuming exactly at ``from_seq``.

    Without a ``wakeup`` condition the feed ends once it catches up; with one
    it blocks (never holding the writer's lock) until new events arrive or
    ``stop()`` turns true.
    """
    next_seq = from_seq
    while True:
        batch = log.read(campaign_id, next_seq)
        for event in batch:
            yield event
            next_seq = event.seq + 1
        if wakeup is None:
            return
        if stop is not None and stop():
            return
        with wakeup:
            wakeup.wait(timeout=poll_interval)


# ---------------------------------------------------------------------------
# JSON-lines export / import


def export_events(log: EventLog, campaign_id: str) -> str:
    """Event dump: schema-versioned header line, then one event per line."""
    header = {"format": EXPORT_FORMAT, "version": EXPORT_VERSION, "campaign_id": campaign_id}
    lines = [json.dumps(header, sort_keys=True)]
    for event in log.read(campaign_id):
        lines.append(json.dumps(event.to_dict(), sort_keys=True))
    return "\n".join(lines) + "\n"


def import_events(log: EventLog, dump: str) -> str:
    """Load a JSON-lines dump into an empty campaign slot; returns campaign id."""
    lines = [line for line in dump.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("dump", "empty event dump")
    header = json.loads(lines[0])
    if header.get("format") != EXPORT_FORMAT:
        raise ValidationError("dump", f"not an event dump (format={header.get('format')!r})")
    if header.get("version") != EXPORT_VERSION:
        raise ValidationError("dump", f"unsupported dump version {header.get('version')!r}")
    campaign_id = header.get("campaign_id")
    if not campaign_id:
        raise ValidationError("dump", "dump header missing campaign_id")
    if log.next_seq(campaign_id) != 1:
        raise ValidationError("dump", f"campaign {campaign_id} already has events")
    events = [Event.from_dict(json.loads(line)) for line in lines[1:]]
    for expected, event in enumerate(events, start=1):
        if event.seq != expected or event.campaign_id != campaign_id:
            raise ValidationError("dump", f"dump is not a gapless log for {campaign_id}")
    log.append([e.with_seq(None) for e in events])
    return campaign_id
