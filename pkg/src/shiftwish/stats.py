"""Usage statistics folded from the event log."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .events import Event, EventKind

_WISH_KINDS = (EventKind.WISH_SUBMITTED, EventKind.PLANNER_WISH_ENTERED)


@dataclass(frozen=True)
class UsageStats:
    total_wishes: int
    wishes_per_month: Mapping[str, int]
    wishes_per_worker: Mapping[str, int]
    scope_breakdown: Mapping[str, int]
    distinct_workers: int

    @property
    def max_per_worker(self) -> int:
        return max(self.wishes_per_worker.values(), default=0)

    def to_dict(self) -> dict:
        return {
            "total_wishes": self.total_wishes,
            "wishes_per_month": dict(sorted(self.wishes_per_month.items())),
            "wishes_per_worker": dict(sorted(self.wishes_per_worker.items())),
            "scope_breakdown": dict(self.scope_breakdown),
            "distinct_workers": self.distinct_workers,
            "max_per_worker": self.max_per_worker,
        }


def stats_report(
    events: Iterable[Event],
    months: tuple[str, str] | None = None,
    exclude_months: Iterable[str] = (),
) -> UsageStats:
    """Aggregate submitted wishes (worker- and planner-entered alike) by the
    planning month of the wished date; `exclude_months` reproduces views like
    "excluding November"."""
    excluded = set(exclude_months)
    per_month: dict[str, int] = {}
    per_worker: dict[str, int] = {}
    scopes = {"morning": 0, "afternoon": 0, "whole_day": 0}
    total = 0
    for event in events:
        if event.kind not in _WISH_KINDS:
            continue
        month = event.payload["month"]
        if month in excluded:
            continue
        if months is not None and not (months[0] <= month <= months[1]):
            continue
        total += 1
        per_month[month] = per_month.get(month, 0) + 1
        worker = event.payload["worker_id"]
        per_worker[worker] = per_worker.get(worker, 0) + 1
        scopes[event.payload["scope"]] += 1
    return UsageStats(
        total_wishes=total,
        wishes_per_month=per_month,
        wishes_per_worker=per_worker,
        scope_breakdown=scopes,
        distinct_workers=len(per_worker),
    )
