"""Append-only event log: the system of record.

One JSON object per line, UTF-8, snake_case fields, canonical key order, so
that serialize -> replay -> serialize is byte-identical and the file diffs
cleanly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator


class EventKind(str, Enum):
    CYCLE_OPENED = "CycleOpened"
    WISH_SUBMITTED = "WishSubmitted"
    WISH_WITHDRAWN = "WishWithdrawn"
    PLANNER_WISH_ENTERED = "PlannerWishEntered"
    CONFLICTS_RECOMPUTED = "ConflictsRecomputed"
    SWAP_PROPOSED = "SwapProposed"
    SWAP_ACCEPTED = "SwapAccepted"
    STAND_IN_RECORDED = "StandInRecorded"
    OVERRIDE_APPLIED = "OverrideApplied"
    SCHEDULE_RELEASED = "ScheduleReleased"
    KUDOS_GIVEN = "KudosGiven"


class CorruptLog(Exception):
    def __init__(self, seq: int, reason: str):
        super().__init__(f"corrupt log at seq {seq}: {reason}")
        self.seq = seq


@dataclass(frozen=True)
class Event:
    seq: int
    timestamp: str
    actor: str
    kind: EventKind
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "timestamp": self.timestamp,
                "actor": self.actor,
                "kind": self.kind.value,
                "payload": self.payload,
            },
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str, expect_seq: int) -> "Event":
        try:
            raw = json.loads(line)
            event = cls(
                seq=int(raw["seq"]),
                timestamp=str(raw["timestamp"]),
                actor=str(raw["actor"]),
                kind=EventKind(raw["kind"]),
                payload=dict(raw["payload"]),
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptLog(expect_seq, f"unparseable line: {exc}") from exc
        if event.seq != expect_seq:
            raise CorruptLog(expect_seq, f"expected seq {expect_seq}, found {event.seq}")
        return event


class EventLog:
    """In-memory list of events with optional file persistence."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.events: list[Event] = []
        if self.path is not None and self.path.exists():
            self.events = list(read_log(self.path))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    @property
    def next_seq(self) -> int:
        return len(self.events) + 1

    def append(self, event: Event) -> int:
        if event.seq != self.next_seq:
            raise CorruptLog(self.next_seq, f"append out of order ({event.seq})")
        self.events.append(event)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(event.to_json() + "\n")
        return event.seq

    def dump(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.events)


def read_log(path: str | Path) -> list[Event]:
    events = []
    with open(path, encoding="utf-8") as f:
        for i, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            events.append(Event.from_json(line, expect_seq=i))
    return events


def parse_log(text: str) -> list[Event]:
    events = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        events.append(Event.from_json(line, expect_seq=i))
    return events


def write_log(events: Iterable[Event], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for e in events:
            f.write(e.to_json() + "\n")
