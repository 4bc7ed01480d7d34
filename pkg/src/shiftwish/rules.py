"""Stateless feasibility and legality checks: coverage, skill mix, rest times,
consecutive-day caps, weekend parity, and holiday reciprocity.

Everything here is a pure function over immutable inputs; callers decide what
"available" means (conflict detection counts wishes as honored, validation
counts actual assignments).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .core import (
    Month,
    Roster,
    Shift,
    ShiftSlot,
    SystemConfig,
    WeekendStatus,
    Worker,
    weekend_status,
)


class SlotOutsideCycle(ValueError):
    pass


class ViolationKind(str, Enum):
    COVERAGE = "coverage"
    SKILL_MIX = "skill_mix"
    REST = "rest"
    CONSECUTIVE_DAYS = "consecutive_days"
    PARITY = "parity"
    WISH_VIOLATION = "wish_violation"
    RECIPROCITY = "reciprocity"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    subject: str  # slot key or worker_id
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    hard_violations: tuple[Violation, ...]
    soft_penalty: float

    @property
    def ok(self) -> bool:
        return not self.hard_violations

    def of_kind(self, kind: ViolationKind) -> list[Violation]:
        return [v for v in self.hard_violations if v.kind is kind]


@dataclass
class HolidayLedger:
    """Which side of each reciprocity pair a worker has actually been assigned."""

    # (worker_id, pair_index) -> {"a", "b"} membership
    worked: dict[tuple[str, int], set[str]] = field(default_factory=dict)

    def mark(self, worker_id: str, day: date, pairs: Sequence[tuple[frozenset[date], frozenset[date]]]):
        for i, (side_a, side_b) in enumerate(pairs):
            if day in side_a:
                self.worked.setdefault((worker_id, i), set()).add("a")
            if day in side_b:
                self.worked.setdefault((worker_id, i), set()).add("b")

    def worked_side(self, worker_id: str, pair_index: int, side: str) -> bool:
        return side in self.worked.get((worker_id, pair_index), set())

    def summary(self, worker_id: str) -> dict[int, tuple[bool, bool]]:
        out = {}
        for (wid, i), sides in self.worked.items():
            if wid == worker_id:
                out[i] = ("a" in sides, "b" in sides)
        return out

    def copy(self) -> "HolidayLedger":
        return HolidayLedger({k: set(v) for k, v in self.worked.items()})


def ledger_from_assignments(
    assignments: Mapping[ShiftSlot, Iterable[str]],
    pairs: Sequence[tuple[frozenset[date], frozenset[date]]],
    base: HolidayLedger | None = None,
) -> HolidayLedger:
    ledger = base.copy() if base is not None else HolidayLedger()
    for slot, workers in assignments.items():
        for wid in workers:
            ledger.mark(wid, slot.date, pairs)
    return ledger


@dataclass(frozen=True)
class RuleSet:
    """The staffing/rest view of SystemConfig that the checks need."""

    min_staff: Mapping[Shift, int]
    min_certified: Mapping[Shift, int]
    rest_hours_min: float
    shift_times: Mapping[Shift, tuple]
    reciprocity_enabled: bool = False
    holiday_pairs: tuple = ()
    apprenticeship_counts_certified: bool = False
    holiday_ledger: HolidayLedger = field(default_factory=HolidayLedger)

    @classmethod
    def from_config(cls, config: SystemConfig, ledger: HolidayLedger | None = None) -> "RuleSet":
        return cls(
            min_staff=dict(config.min_staff),
            min_certified=dict(config.min_certified),
            rest_hours_min=config.rest_hours_min,
            shift_times=dict(config.shift_times),
            reciprocity_enabled=config.reciprocity_enabled,
            holiday_pairs=tuple(config.holiday_pairs),
            apprenticeship_counts_certified=config.apprenticeship_counts_certified,
            holiday_ledger=ledger if ledger is not None else HolidayLedger(),
        )

    def slot_start(self, slot: ShiftSlot) -> datetime:
        return datetime.combine(slot.date, self.shift_times[slot.shift][0])

    def slot_end(self, slot: ShiftSlot) -> datetime:
        return datetime.combine(slot.date, self.shift_times[slot.shift][1])

    def shift_hours(self, shift: Shift) -> float:
        start, end = self.shift_times[shift]
        return ((end.hour * 60 + end.minute) - (start.hour * 60 + start.minute)) / 60.0


def coverage_deficit(
    available: Iterable[Worker],
    slot: ShiftSlot,
    rules: RuleSet,
    month: Month | None = None,
) -> tuple[int, int]:
    """(staff_deficit, certified_deficit) = max(0, required - available) for the slot.

    `available` is whatever the caller considers available: conflict detection
    excludes absences, free weekends and active wish holders; validation passes
    the actually assigned, non-absent workers.
    """
    if month is not None and Month.of(slot.date) != month:
        raise SlotOutsideCycle(f"{slot.key()} not in {month}")
    workers = list(available)
    staff = len(workers)
    certified = sum(
        1 for w in workers if w.is_certified(rules.apprenticeship_counts_certified)
    )
    return (
        max(0, rules.min_staff.get(slot.shift, 0) - staff),
        max(0, rules.min_certified.get(slot.shift, 0) - certified),
    )


def rest_gap_hours(prev: ShiftSlot, nxt: ShiftSlot, rules: RuleSet) -> float:
    return (rules.slot_start(nxt) - rules.slot_end(prev)).total_seconds() / 3600.0


def rest_check(assignments: Iterable[ShiftSlot], rules: RuleSet) -> list[Violation]:
    """Rest violations for one worker's assignments; input order is irrelevant."""
    slots = sorted(set(assignments), key=lambda s: s.sort_key)
    violations = []
    for prev, nxt in zip(slots, slots[1:]):
        gap = rest_gap_hours(prev, nxt, rules)
        if gap < rules.rest_hours_min:
            violations.append(
                Violation(
                    ViolationKind.REST,
                    nxt.key(),
                    f"gap {gap:.1f}h after {prev.key()} below {rules.rest_hours_min}h",
                )
            )
    return violations


def consecutive_day_runs(days: Iterable[date]) -> list[tuple[date, int]]:
    """(run_start, length) for each maximal run of consecutive worked dates."""
    ordered = sorted(set(days))
    runs = []
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and (ordered[j + 1] - ordered[j]).days == 1:
            j += 1
        runs.append((ordered[i], j - i + 1))
        i = j + 1
    return runs


def consecutive_days_check(
    worker: Worker, assignments: Iterable[ShiftSlot]
) -> list[Violation]:
    violations = []
    for start, length in consecutive_day_runs(s.date for s in assignments):
        if length > worker.max_consecutive_days:
            violations.append(
                Violation(
                    ViolationKind.CONSECUTIVE_DAYS,
                    worker.worker_id,
                    f"{length} consecutive days from {start} exceed cap "
                    f"{worker.max_consecutive_days}",
                )
            )
    return violations


def reciprocity_check(
    ledger: HolidayLedger,
    assignment: Mapping[ShiftSlot, Iterable[str]],
    rules: RuleSet,
) -> list[Violation]:
    """Workers who worked one side of a holiday pair must be free on the other.

    The draft's own assignments count toward the flags, so a schedule that puts
    the same worker on both Christmas and New Year's is flagged by itself.
    """
    if not rules.holiday_pairs:
        return []
    combined = ledger_from_assignments(assignment, rules.holiday_pairs, base=ledger)
    violations = []
    for slot in sorted(assignment, key=lambda s: s.sort_key):
        for wid in sorted(assignment[slot]):
            for i, (side_a, side_b) in enumerate(rules.holiday_pairs):
                if slot.date in side_b and combined.worked_side(wid, i, "a"):
                    violations.append(
                        Violation(
                            ViolationKind.RECIPROCITY,
                            slot.key(),
                            f"{wid} worked the paired holiday and must be free on {slot.date}",
                        )
                    )
                elif slot.date in side_a and combined.worked_side(wid, i, "b"):
                    violations.append(
                        Violation(
                            ViolationKind.RECIPROCITY,
                            slot.key(),
                            f"{wid} worked the paired holiday and must be free on {slot.date}",
                        )
                    )
    return violations


def validate_schedule(
    assignment: Mapping[ShiftSlot, Iterable[str]],
    roster: Roster,
    rules: RuleSet,
    *,
    month: Month,
    wishes: Iterable = (),
    acknowledged: frozenset[tuple[str, str]] = frozenset(),
    external_ledger: HolidayLedger | None = None,
    days: Iterable[date] | None = None,
) -> ValidationReport:
    """Full legality check of an assignment map for one month.

    `wishes` are the honored (active or granted) wishes; an assignment on a
    wished slot is a hard violation unless (wish_id, slot_key) was explicitly
    acknowledged through a planner override. Coverage is checked for every
    slot of the grid (default: the whole month), so an entirely unstaffed
    slot is a violation too.
    """
    hard: list[Violation] = []
    assignment = {s: set(ws) for s, ws in assignment.items()}
    grid_days = list(days) if days is not None else month.days()
    grid = {
        ShiftSlot(d, s)
        for d in grid_days
        for s in Shift
        if rules.min_staff.get(s, 0) > 0
    }
    grid.update(assignment)

    per_worker: dict[str, list[ShiftSlot]] = {}
    for slot in sorted(grid, key=lambda s: s.sort_key):
        effective = []
        for wid in sorted(assignment.get(slot, ())):
            worker = roster.get(wid)
            per_worker.setdefault(wid, []).append(slot)
            if not worker.absent_on(slot.date):
                effective.append(worker)
            if weekend_status(worker, slot.date) is WeekendStatus.FREE_WEEKEND:
                hard.append(
                    Violation(
                        ViolationKind.PARITY,
                        slot.key(),
                        f"{wid} assigned on a free weekend",
                    )
                )
        staff_deficit, certified_deficit = coverage_deficit(effective, slot, rules, month=month)
        if staff_deficit:
            hard.append(
                Violation(
                    ViolationKind.COVERAGE,
                    slot.key(),
                    f"short {staff_deficit} of {rules.min_staff.get(slot.shift, 0)} staff",
                )
            )
        if certified_deficit:
            hard.append(
                Violation(
                    ViolationKind.SKILL_MIX,
                    slot.key(),
                    f"short {certified_deficit} certified of "
                    f"{rules.min_certified.get(slot.shift, 0)}",
                )
            )

    for wid, slots in sorted(per_worker.items()):
        hard.extend(rest_check(slots, rules))
        hard.extend(consecutive_days_check(roster.get(wid), slots))

    for wish in sorted(wishes, key=lambda w: (w.worker_id, w.date, w.wish_id)):
        for slot in wish.scope.slots(wish.date):
            if wish.worker_id in assignment.get(slot, ()):
                if (wish.wish_id, slot.key()) in acknowledged:
                    continue
                hard.append(
                    Violation(
                        ViolationKind.WISH_VIOLATION,
                        slot.key(),
                        f"{wish.worker_id} assigned on wished {wish.scope.value}",
                    )
                )

    if rules.reciprocity_enabled:
        base = external_ledger if external_ledger is not None else rules.holiday_ledger
        hard.extend(reciprocity_check(base, assignment, rules))

    soft = 0.0
    for wid, slots in per_worker.items():
        worker = roster.get(wid)
        if worker.shift_preference != "none":
            soft += sum(1 for s in slots if s.shift.value != worker.shift_preference)
    soft += contract_hour_deviation(assignment, roster, rules, month)

    return ValidationReport(hard_violations=tuple(hard), soft_penalty=soft)


def contract_hour_deviation(
    assignment: Mapping[ShiftSlot, Iterable[str]],
    roster: Roster,
    rules: RuleSet,
    month: Month,
) -> float:
    """Sum over workers of |assigned hours - pro-rated contract hours|."""
    assigned: dict[str, float] = {w.worker_id: 0.0 for w in roster}
    for slot, wids in assignment.items():
        for wid in wids:
            assigned[wid] = assigned.get(wid, 0.0) + rules.shift_hours(slot.shift)
    total = 0.0
    for w in roster:
        target = w.contract_hours_per_week * month.num_days() / 7.0
        total += abs(assigned.get(w.worker_id, 0.0) - target)
    return total


def slot_availability(
    roster: Roster,
    slot: ShiftSlot,
    wishes: Iterable = (),
) -> list[Worker]:
    """Workers free to staff a slot before any assignment exists.

    Excludes absences, free weekends, and holders of a live wish covering the
    slot; this is the availability model conflict detection runs on.
    """
    wished_out = {
        w.worker_id
        for w in wishes
        if w.date == slot.date and w.scope.covers(slot.shift)
    }
    available = []
    for worker in roster:
        if worker.absent_on(slot.date):
            continue
        if weekend_status(worker, slot.date) is WeekendStatus.FREE_WEEKEND:
            continue
        if worker.worker_id in wished_out:
            continue
        available.append(worker)
    return available
