"""Builds the finalized monthly schedule around honored wishes, preferences
and staffing rules; planner overrides with wish-collision warnings; release;
fairness reporting.

The fill algorithm is deterministic backtracking: most-constrained slot first,
candidates ordered by marginal soft cost then worker id, bounded by a node
budget. It is complete for feasibility (within budget); the soft objective is
minimized greedily, not proven optimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Mapping, Sequence

from .core import (
    Month,
    Roster,
    Shift,
    ShiftSlot,
    WeekendStatus,
    Worker,
    weekend_saturday,
    weekend_status,
)
from .rules import (
    HolidayLedger,
    RuleSet,
    ValidationReport,
    consecutive_day_runs,
    ledger_from_assignments,
    rest_gap_hours,
    validate_schedule,
)
from .workflow import (
    PlanningCycle,
    ReleasedSchedule,
    ValidationFailed,
    Wish,
    WishCollisionWarning,
    WishStatus,
)


class UnresolvedConflicts(Exception):
    pass


class HardViolationsPresent(Exception):
    def __init__(self, report: ValidationReport):
        kinds = sorted({v.kind.value for v in report.hard_violations})
        super().__init__(f"hard violations present: {', '.join(kinds)}")
        self.report = report


class EmptyWindow(Exception):
    pass


@dataclass
class ScheduleDraft:
    month: Month
    assignment: dict[ShiftSlot, set[str]]
    status: str = "draft"
    provenance: dict[tuple[str, str], str] = field(default_factory=dict)
    warnings: list[WishCollisionWarning] = field(default_factory=list)
    soft_penalty: float = 0.0
    days: tuple[date, ...] = ()

    def acknowledged(self) -> frozenset[tuple[str, str]]:
        return frozenset((w.wish_id, w.slot_key) for w in self.warnings)

    def workers_on(self, slot: ShiftSlot) -> set[str]:
        return self.assignment.get(slot, set())


@dataclass(frozen=True)
class InfeasibilityReport:
    slot: ShiftSlot | None
    binding_constraints: tuple[str, ...]
    partial: Mapping[ShiftSlot, frozenset[str]]
    budget_exhausted: bool = False


@dataclass(frozen=True)
class OverrideChange:
    slot: ShiftSlot
    add: tuple[str, ...] = ()
    remove: tuple[str, ...] = ()


@dataclass(frozen=True)
class FairnessReport:
    months: tuple[str, ...]
    free_weekends: Mapping[str, int]
    spread: int
    flagged: tuple[str, ...]
    holiday_summary: Mapping[str, dict]


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _target_hours(worker: Worker, num_days: int) -> float:
    return worker.contract_hours_per_week * num_days / 7.0


def autofill(
    month: Month,
    roster: Roster,
    rules: RuleSet,
    wishes: Iterable[Wish] = (),
    *,
    days: Sequence[date] | None = None,
    preferences: Mapping[str, str] | None = None,
    pinned: Iterable[tuple[str, ShiftSlot]] = (),
    node_budget: int = 1_000_000,
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> ScheduleDraft | InfeasibilityReport:
    """Fill every slot to its staffing minimum without breaking a hard rule.

    Hard: coverage and skill mix, honored wishes, free weekends, absences,
    rest minimum, per-worker consecutive-day caps, reciprocity when enabled.
    Soft (greedy order only): shift-preference mismatch and contract-hour
    pressure. Returns an InfeasibilityReport naming a blocked slot when no
    legal fill exists or the node budget runs out.
    """
    window = list(days) if days is not None else month.days()
    live = [w for w in wishes if w.status in (WishStatus.ACTIVE, WishStatus.GRANTED)]
    prefs = {w.worker_id: w.shift_preference for w in roster}
    if preferences:
        prefs.update(preferences)

    slots = [
        ShiftSlot(d, s)
        for d in window
        for s in sorted(Shift, key=lambda s: s.order)
        if rules.min_staff.get(s, 0) > 0
    ]
    required = {s: rules.min_staff[s.shift] for s in slots}
    cert_required = {s: rules.min_certified.get(s.shift, 0) for s in slots}

    wished_out: dict[ShiftSlot, set[str]] = {}
    for w in live:
        for slot in w.covered_slots():
            wished_out.setdefault(slot, set()).add(w.worker_id)

    def base_eligible(worker: Worker, slot: ShiftSlot) -> bool:
        if worker.absent_on(slot.date):
            return False
        if weekend_status(worker, slot.date) is WeekendStatus.FREE_WEEKEND:
            return False
        if worker.worker_id in wished_out.get(slot, ()):
            return False
        if rules.reciprocity_enabled:
            for i, (side_a, side_b) in enumerate(rules.holiday_pairs):
                if slot.date in side_b and rules.holiday_ledger.worked_side(
                    worker.worker_id, i, "a"
                ):
                    return False
                if slot.date in side_a and rules.holiday_ledger.worked_side(
                    worker.worker_id, i, "b"
                ):
                    return False
        return True

    pool: dict[ShiftSlot, list[Worker]] = {
        s: [w for w in roster if base_eligible(w, s)] for s in slots
    }

    # a slot whose static pool is already too small can never be filled,
    # regardless of choices elsewhere
    for s in slots:
        certified = sum(
            1 for w in pool[s] if w.is_certified(rules.apprenticeship_counts_certified)
        )
        if len(pool[s]) < required[s] or certified < cert_required[s]:
            return InfeasibilityReport(
                slot=s,
                binding_constraints=(
                    f"need {required[s]} staff / {cert_required[s]} certified, "
                    f"only {len(pool[s])} / {certified} can work the slot",
                ),
                partial={},
            )

    # when the rest minimum forbids working both shifts of one day, a day's
    # combined seats cannot exceed the union of workers available that day;
    # this catches weekend pigeonholes the per-slot check cannot see
    same_day_double_legal = (
        rest_gap_hours(
            ShiftSlot(month.first_day(), Shift.MORNING),
            ShiftSlot(month.first_day(), Shift.AFTERNOON),
            rules,
        )
        >= rules.rest_hours_min
    )
    if not same_day_double_legal:
        by_day: dict[date, list[ShiftSlot]] = {}
        for s in slots:
            by_day.setdefault(s.date, []).append(s)
        for day, day_slots in sorted(by_day.items()):
            seats = sum(required[s] for s in day_slots)
            cert_seats = sum(cert_required[s] for s in day_slots)
            day_pool = {w.worker_id for s in day_slots for w in pool[s]}
            day_certified = {
                w.worker_id
                for s in day_slots
                for w in pool[s]
                if w.is_certified(rules.apprenticeship_counts_certified)
            }
            if len(day_pool) < seats or len(day_certified) < cert_seats:
                first = min(day_slots, key=lambda s: s.sort_key)
                return InfeasibilityReport(
                    slot=first,
                    binding_constraints=(
                        f"{day} needs {seats} staff ({cert_seats} certified) across "
                        f"its shifts, but only {len(day_pool)} workers "
                        f"({len(day_certified)} certified) can work that day "
                        f"and nobody may take both shifts",
                    ),
                    partial={},
                )

    assignment: dict[ShiftSlot, set[str]] = {s: set() for s in slots}
    worker_slots: dict[str, set[ShiftSlot]] = {w.worker_id: set() for w in roster}
    worker_days: dict[str, set[date]] = {w.worker_id: set() for w in roster}
    hours: dict[str, float] = {w.worker_id: 0.0 for w in roster}
    draft_pairs: dict[str, set[tuple[int, str]]] = {w.worker_id: set() for w in roster}

    for worker_id, slot in pinned:
        if slot in assignment:
            _place(
                roster.get(worker_id), slot, assignment, worker_slots, worker_days,
                hours, draft_pairs, rules,
            )

    def dynamic_ok(worker: Worker, slot: ShiftSlot) -> bool:
        wid = worker.worker_id
        if wid in assignment[slot]:
            return False
        for other in worker_slots[wid]:
            if abs((other.date - slot.date).days) <= 1:
                lo, hi = sorted((other, slot), key=lambda s: s.sort_key)
                if rest_gap_hours(lo, hi, rules) < rules.rest_hours_min:
                    return False
        if slot.date not in worker_days[wid]:
            for start, length in consecutive_day_runs(worker_days[wid] | {slot.date}):
                if length > worker.max_consecutive_days:
                    return False
        if rules.reciprocity_enabled:
            for i, (side_a, side_b) in enumerate(rules.holiday_pairs):
                if slot.date in side_b and (i, "a") in draft_pairs[wid]:
                    return False
                if slot.date in side_a and (i, "b") in draft_pairs[wid]:
                    return False
        return True

    num_days = len(window)
    w_mismatch, w_hours, _w_spread = weights
    shift_len = {s: rules.shift_hours(s) for s in Shift}

    def candidate_cost(worker: Worker, slot: ShiftSlot) -> tuple:
        # marginal objective increase first, then hours-behind-target so the
        # load spreads instead of clumping on low worker ids, then the id
        pref = prefs.get(worker.worker_id, "none")
        mismatch = 1.0 if pref != "none" and pref != slot.shift.value else 0.0
        target = _target_hours(worker, num_days)
        before = abs(hours[worker.worker_id] - target)
        after_hours = hours[worker.worker_id] + shift_len[slot.shift]
        after = abs(after_hours - target)
        return (
            w_mismatch * mismatch + w_hours * (after - before),
            after_hours - target,
            worker.worker_id,
        )

    budget = _Budget(node_budget)
    best_partial: dict[ShiftSlot, frozenset[str]] = {}
    best_count = -1
    fail_slot: ShiftSlot | None = None

    class _BudgetExhausted(Exception):
        pass

    def open_slots() -> list[ShiftSlot]:
        return [s for s in slots if len(assignment[s]) < required[s]]

    def static_tightness(slot: ShiftSlot) -> tuple:
        # cheap most-constrained ordering: static pool slack, then date; the
        # true candidate list is only computed for the slot actually chosen
        return (len(pool[slot]) - required[slot], slot.sort_key)

    def candidates_for(slot: ShiftSlot) -> list[Worker]:
        need_cert = cert_required[slot] - sum(
            1
            for wid in assignment[slot]
            if roster.get(wid).is_certified(rules.apprenticeship_counts_certified)
        )
        remaining = required[slot] - len(assignment[slot])
        if need_cert > remaining:
            # pinned seats ate the room for certified staff; dead end
            return []
        cands = [w for w in pool[slot] if dynamic_ok(w, slot)]
        if need_cert >= remaining:
            # every remaining seat must go to certified staff
            cands = [
                w for w in cands if w.is_certified(rules.apprenticeship_counts_certified)
            ]
        return cands

    def fill() -> bool:
        nonlocal best_partial, best_count, fail_slot
        pending = open_slots()
        if not pending:
            return True
        slot = min(pending, key=static_tightness)
        cands = candidates_for(slot)
        placed = sum(len(v) for v in assignment.values())
        if placed > best_count:
            best_count = placed
            best_partial = {s: frozenset(v) for s, v in assignment.items() if v}
            fail_slot = slot if not cands else fail_slot
        if not cands:
            if fail_slot is None:
                fail_slot = slot
            return False
        for worker in sorted(cands, key=lambda w: candidate_cost(w, slot)):
            if not budget.spend():
                raise _BudgetExhausted()
            _place(
                worker, slot, assignment, worker_slots, worker_days, hours,
                draft_pairs, rules,
            )
            if fill():
                return True
            _unplace(
                worker, slot, assignment, worker_slots, worker_days, hours,
                draft_pairs, rules,
            )
        return False

    try:
        solved = fill()
    except _BudgetExhausted:
        return InfeasibilityReport(
            slot=fail_slot,
            binding_constraints=(f"node budget {node_budget} exhausted",),
            partial=best_partial,
            budget_exhausted=True,
        )

    if not solved:
        return InfeasibilityReport(
            slot=fail_slot,
            binding_constraints=("no legal candidate under rest/parity/cap rules",),
            partial=best_partial,
        )

    draft = ScheduleDraft(
        month=month,
        assignment={s: set(v) for s, v in assignment.items()},
        provenance={
            (s.key(), wid): "autofill" for s, v in assignment.items() for wid in v
        },
        days=tuple(window),
    )
    # pinned pre-assignments bypass the search's eligibility checks; the
    # closure guarantee (every returned draft validates clean) stays absolute
    report = validate_draft(draft, roster, rules, live)
    if report.hard_violations:
        first = report.hard_violations[0]
        try:
            bad_slot = ShiftSlot.from_key(first.subject)
        except ValueError:
            bad_slot = None
        return InfeasibilityReport(
            slot=bad_slot,
            binding_constraints=tuple(
                f"{v.kind.value}: {v.detail}" for v in report.hard_violations[:3]
            ),
            partial={s: frozenset(v) for s, v in assignment.items() if v},
        )
    draft.soft_penalty = draft_objective(draft, roster, rules, prefs, weights)
    return draft


def _place(worker, slot, assignment, worker_slots, worker_days, hours, pairs, rules):
    assignment[slot].add(worker.worker_id)
    worker_slots[worker.worker_id].add(slot)
    worker_days[worker.worker_id].add(slot.date)
    hours[worker.worker_id] += rules.shift_hours(slot.shift)
    for i, (side_a, side_b) in enumerate(rules.holiday_pairs):
        if slot.date in side_a:
            pairs[worker.worker_id].add((i, "a"))
        if slot.date in side_b:
            pairs[worker.worker_id].add((i, "b"))


def _unplace(worker, slot, assignment, worker_slots, worker_days, hours, pairs, rules):
    wid = worker.worker_id
    assignment[slot].discard(wid)
    worker_slots[wid].discard(slot)
    if not any(s.date == slot.date for s in worker_slots[wid]):
        worker_days[wid].discard(slot.date)
    hours[wid] -= rules.shift_hours(slot.shift)
    for i, (side_a, side_b) in enumerate(rules.holiday_pairs):
        for side, dates in (("a", side_a), ("b", side_b)):
            if slot.date in dates and not any(
                s.date in dates for s in worker_slots[wid]
            ):
                pairs[wid].discard((i, side))


def draft_objective(
    draft: ScheduleDraft,
    roster: Roster,
    rules: RuleSet,
    prefs: Mapping[str, str],
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> float:
    """Reported soft objective: mismatches + hour deviation + weekend spread."""
    w_mismatch, w_hours, w_spread = weights
    mismatches = 0
    hours: dict[str, float] = {w.worker_id: 0.0 for w in roster}
    for slot, wids in draft.assignment.items():
        for wid in wids:
            hours[wid] += rules.shift_hours(slot.shift)
            pref = prefs.get(wid, "none")
            if pref != "none" and pref != slot.shift.value:
                mismatches += 1
    num_days = len(draft.days) or draft.month.num_days()
    deviation = sum(
        abs(hours[w.worker_id] - _target_hours(w, num_days)) for w in roster
    )
    counts = _free_weekend_counts(draft.assignment, roster, draft.days or draft.month.days())
    spread = (max(counts.values()) - min(counts.values())) if counts else 0
    return w_mismatch * mismatches + w_hours * deviation + w_spread * spread


def _free_weekend_counts(
    assignment: Mapping[ShiftSlot, Iterable[str]],
    roster: Roster,
    days: Iterable[date],
) -> dict[str, int]:
    saturdays = sorted({weekend_saturday(d) for d in days if weekend_saturday(d)})
    worked_days: dict[str, set[date]] = {w.worker_id: set() for w in roster}
    for slot, wids in assignment.items():
        for wid in wids:
            worked_days[wid].add(slot.date)
    counts = {}
    for w in roster:
        free = 0
        for sat in saturdays:
            sun = sat.fromordinal(sat.toordinal() + 1)
            if sat not in worked_days[w.worker_id] and sun not in worked_days[w.worker_id]:
                free += 1
        counts[w.worker_id] = free
    return counts


def validate_draft(
    draft: ScheduleDraft,
    roster: Roster,
    rules: RuleSet,
    wishes: Iterable[Wish] = (),
    external_ledger: HolidayLedger | None = None,
) -> ValidationReport:
    live = [w for w in wishes if w.status in (WishStatus.ACTIVE, WishStatus.GRANTED)]
    return validate_schedule(
        draft.assignment,
        roster,
        rules,
        month=draft.month,
        wishes=live,
        acknowledged=draft.acknowledged(),
        external_ledger=external_ledger,
        days=draft.days or None,
    )


def apply_override(
    draft: ScheduleDraft,
    change: OverrideChange,
    roster: Roster,
    rules: RuleSet,
    wishes: Iterable[Wish] = (),
) -> ScheduleDraft:
    """Apply a planner change to a draft.

    A collision with a honored wish does not block: it is recorded as an
    explicit warning and the worker is flagged for notification. Any other
    hard violation rejects the change.
    """
    live = [w for w in wishes if w.status in (WishStatus.ACTIVE, WishStatus.GRANTED)]
    assignment = {s: set(v) for s, v in draft.assignment.items()}
    slot_set = assignment.setdefault(change.slot, set())
    for wid in change.remove:
        slot_set.discard(wid)
    for wid in change.add:
        roster.get(wid)  # must exist
        slot_set.add(wid)

    new_warnings = list(draft.warnings)
    for wid in change.add:
        for w in live:
            if w.worker_id == wid and change.slot in w.covered_slots():
                warning = WishCollisionWarning(w.wish_id, change.slot.key(), wid)
                if warning not in new_warnings:
                    new_warnings.append(warning)

    acknowledged = frozenset((w.wish_id, w.slot_key) for w in new_warnings)
    report = validate_schedule(
        assignment,
        roster,
        rules,
        month=draft.month,
        wishes=live,
        acknowledged=acknowledged,
        days=draft.days or None,
    )
    if report.hard_violations:
        raise ValidationFailed(report)

    provenance = dict(draft.provenance)
    for wid in change.remove:
        provenance.pop((change.slot.key(), wid), None)
    for wid in change.add:
        provenance[(change.slot.key(), wid)] = "override"
    return ScheduleDraft(
        month=draft.month,
        assignment=assignment,
        status=draft.status,
        provenance=provenance,
        warnings=new_warnings,
        soft_penalty=report.soft_penalty,
        days=draft.days,
    )


def release(
    draft: ScheduleDraft,
    cycle: PlanningCycle,
    wishes: Mapping[str, Wish],
    roster: Roster,
    rules: RuleSet,
    as_of: date,
) -> ReleasedSchedule:
    """Freeze the draft into the month's schedule and grant honored wishes.

    Hard violations block; releasing after the publication deadline is allowed
    but recorded as a late-release advisory.
    """
    live = [w for w in wishes.values() if w.live]
    report = validate_schedule(
        draft.assignment,
        roster,
        rules,
        month=draft.month,
        wishes=live,
        acknowledged=draft.acknowledged(),
        external_ledger=rules.holiday_ledger,
        days=draft.days or None,
    )
    if report.hard_violations:
        raise HardViolationsPresent(report)

    collided = {w.wish_id for w in draft.warnings}
    granted = set()
    for w in live:
        if Month.of(w.date) != draft.month:
            continue
        if w.wish_id in collided:
            continue
        granted.add(w.wish_id)

    return ReleasedSchedule(
        month=draft.month,
        assignment={s: set(v) for s, v in draft.assignment.items()},
        provenance=dict(draft.provenance),
        warnings=list(draft.warnings),
        granted_wish_ids=granted,
        released_on=as_of,
        late=as_of > cycle.release_date,
    )


def fairness_report(
    schedules: Sequence[ReleasedSchedule],
    roster: Roster,
    rules: RuleSet,
    spread_threshold: int = 1,
) -> FairnessReport:
    """Free-weekend counts per worker over the window, their spread, and who
    falls outside the tolerated band."""
    if not schedules:
        raise EmptyWindow("no finalized months in window")
    days: list[date] = []
    merged: dict[ShiftSlot, set[str]] = {}
    for sched in schedules:
        days.extend(sched.month.days())
        for slot, wids in sched.assignment.items():
            merged.setdefault(slot, set()).update(wids)
    counts = _free_weekend_counts(merged, roster, days)
    values = sorted(counts.values())
    median = values[len(values) // 2]
    flagged = tuple(
        sorted(wid for wid, c in counts.items() if abs(c - median) > spread_threshold)
    )
    ledger = ledger_from_assignments(merged, rules.holiday_pairs)
    holiday_summary = {
        w.worker_id: {
            str(i): {"first": a, "second": b}
            for i, (a, b) in ledger.summary(w.worker_id).items()
        }
        for w in roster
    }
    return FairnessReport(
        months=tuple(str(s.month) for s in schedules),
        free_weekends=counts,
        spread=max(values) - min(values),
        flagged=flagged,
        holiday_summary=holiday_summary,
    )
