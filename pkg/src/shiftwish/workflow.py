"""The planning-cycle state machine: wish submission and withdrawal under
quota and calendar rules, short-notice swaps, stand-ins with kudos, and the
per-worker hours statement.

These are pure checks and data types; the service layer serializes mutations
through the event log and applies them to this state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Iterable, Mapping

from .core import (
    Month,
    Roster,
    ShiftSlot,
    WeekendStatus,
    WishScope,
    Worker,
    weekend_status,
)
from .rules import (
    RuleSet,
    ValidationReport,
    Violation,
    ViolationKind,
    consecutive_days_check,
    rest_check,
)


class WorkflowError(Exception):
    pass


class CycleExists(WorkflowError):
    pass


class CycleNotFound(WorkflowError):
    pass


class PhaseClosed(WorkflowError):
    pass


class QuotaExceeded(WorkflowError):
    def __init__(self, worker_id: str, quota: int):
        super().__init__(f"{worker_id} already has {quota} live wishes this month")
        self.worker_id = worker_id
        self.quota = quota
        self.remaining = 0


class FreeWeekend(WorkflowError):
    pass


class WholeDayOnWeekend(WorkflowError):
    pass


class DuplicateWish(WorkflowError):
    pass


class PriorityAlreadyUsed(WorkflowError):
    pass


class PriorityDisabled(WorkflowError):
    pass


class WishOutsideMonth(WorkflowError):
    pass


class NotOwner(WorkflowError):
    pass


class NotAuthorized(WorkflowError):
    pass


class AlreadyWithdrawn(WorkflowError):
    pass


class SelfSwap(WorkflowError):
    pass


class NotAssigned(WorkflowError):
    pass


class ValidationFailed(WorkflowError):
    def __init__(self, report: ValidationReport):
        kinds = sorted({v.kind.value for v in report.hard_violations})
        super().__init__(f"validation failed: {', '.join(kinds)}")
        self.report = report


class VolunteerUnavailable(WorkflowError):
    def __init__(self, report: ValidationReport):
        kinds = sorted({v.kind.value for v in report.hard_violations})
        super().__init__(f"volunteer unavailable: {', '.join(kinds)}")
        self.report = report


class WishStatus(str, Enum):
    ACTIVE = "active"
    WITHDRAWN = "withdrawn"
    IN_CONFLICT = "in_conflict"  # derived view of an active wish inside a conflict
    GRANTED = "granted"


class WishOrigin(str, Enum):
    WORKER = "worker"
    PLANNER = "planner"


@dataclass
class Wish:
    # deliberately no justification field: reasons stay in face-to-face talk
    wish_id: str
    worker_id: str
    date: date
    scope: WishScope
    status: WishStatus = WishStatus.ACTIVE
    priority: bool = False
    origin: WishOrigin = WishOrigin.WORKER

    @property
    def live(self) -> bool:
        return self.status in (WishStatus.ACTIVE, WishStatus.IN_CONFLICT)

    def covered_slots(self) -> tuple[ShiftSlot, ...]:
        return self.scope.slots(self.date)


class SwapState(str, Enum):
    PROPOSED = "proposed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    INVALIDATED = "invalidated"


@dataclass
class SwapProposal:
    proposal_id: str
    month: Month
    proposer: str
    counterpart: str
    proposer_slot: ShiftSlot
    counterpart_slot: ShiftSlot
    state: SwapState = SwapState.PROPOSED


@dataclass(frozen=True)
class StandInEvent:
    absent_worker: str
    volunteer: str
    slot: ShiftSlot
    timestamp: str


@dataclass(frozen=True)
class WishCollisionWarning:
    wish_id: str
    slot_key: str
    worker_id: str


@dataclass
class ReleasedSchedule:
    """The finalized month: mutable only through swap, stand-in and override."""

    month: Month
    assignment: dict[ShiftSlot, set[str]]
    provenance: dict[tuple[str, str], str] = field(default_factory=dict)
    warnings: list[WishCollisionWarning] = field(default_factory=list)
    granted_wish_ids: set[str] = field(default_factory=set)
    released_on: date | None = None
    late: bool = False

    def slots_of(self, worker_id: str) -> list[ShiftSlot]:
        return sorted(
            (s for s, ws in self.assignment.items() if worker_id in ws),
            key=lambda s: s.sort_key,
        )

    def acknowledged(self) -> frozenset[tuple[str, str]]:
        return frozenset((w.wish_id, w.slot_key) for w in self.warnings)


@dataclass
class PlanningCycle:
    month: Month
    quota: int
    priority_enabled: bool
    release_date: date
    wish_ids: list[str] = field(default_factory=list)
    released: ReleasedSchedule | None = None

    @property
    def phase(self) -> str:
        return "running" if self.released is not None else "preparation"

    def phase_as_of(self, as_of: date) -> str:
        """Forward-only derived phase; retrospective and closed need no event."""
        if self.released is None:
            return "preparation"
        last_day = self.month.days()[-1]
        if as_of <= last_day:
            return "running"
        next_month_end = self.month.next().days()[-1]
        return "retrospective" if as_of <= next_month_end else "closed"


def release_date_for(month: Month, lead_days: int) -> date:
    from datetime import timedelta

    return month.first_day() - timedelta(days=lead_days)


def check_wish(
    cycle: PlanningCycle,
    roster: Roster,
    existing: Iterable[Wish],
    worker_id: str,
    day: date,
    scope: WishScope,
    *,
    priority: bool = False,
    enforce_quota: bool = True,
) -> None:
    """Raise the first rule the wish breaks; silent return means admissible."""
    if cycle.phase != "preparation":
        raise PhaseClosed(f"cycle {cycle.month} is {cycle.phase}")
    if Month.of(day) != cycle.month:
        raise WishOutsideMonth(f"{day} not in cycle {cycle.month}")
    worker = roster.get(worker_id)
    status = weekend_status(worker, day)
    if status is WeekendStatus.FREE_WEEKEND:
        raise FreeWeekend(f"{day} is a free weekend for {worker_id}")
    if status is WeekendStatus.WORK_WEEKEND and scope is WishScope.WHOLE_DAY:
        raise WholeDayOnWeekend(f"only part-day wishes on work weekends ({day})")

    own_live = [w for w in existing if w.worker_id == worker_id and w.live]
    for w in own_live:
        if w.date == day and w.scope.overlaps(scope):
            raise DuplicateWish(f"overlaps wish {w.wish_id} on {day}")
    if priority:
        if not cycle.priority_enabled:
            raise PriorityDisabled("priority wishes are disabled")
        if any(w.priority for w in own_live):
            raise PriorityAlreadyUsed(f"{worker_id} already used the priority wish")
    if enforce_quota:
        worker_origin = [w for w in own_live if w.origin is WishOrigin.WORKER]
        if len(worker_origin) >= cycle.quota:
            raise QuotaExceeded(worker_id, cycle.quota)


def quota_remaining(cycle: PlanningCycle, wishes: Iterable[Wish], worker_id: str) -> int:
    used = sum(
        1
        for w in wishes
        if w.worker_id == worker_id and w.live and w.origin is WishOrigin.WORKER
    )
    return max(0, cycle.quota - used)


def check_swap(
    released: ReleasedSchedule,
    proposal: SwapProposal,
) -> None:
    """Both parties must still hold the shifts they propose to exchange."""
    if proposal.proposer == proposal.counterpart:
        raise SelfSwap(proposal.proposer)
    if proposal.proposer not in released.assignment.get(proposal.proposer_slot, ()):
        raise NotAssigned(f"{proposal.proposer} not on {proposal.proposer_slot.key()}")
    if proposal.counterpart not in released.assignment.get(proposal.counterpart_slot, ()):
        raise NotAssigned(
            f"{proposal.counterpart} not on {proposal.counterpart_slot.key()}"
        )


def swapped_assignment(
    released: ReleasedSchedule, proposal: SwapProposal
) -> dict[ShiftSlot, set[str]]:
    """The assignment map as it would look after the exchange."""
    assignment = {s: set(ws) for s, ws in released.assignment.items()}
    assignment[proposal.proposer_slot].discard(proposal.proposer)
    assignment[proposal.counterpart_slot].discard(proposal.counterpart)
    if proposal.counterpart in assignment[proposal.proposer_slot]:
        raise NotAssigned(
            f"{proposal.counterpart} already on {proposal.proposer_slot.key()}"
        )
    if proposal.proposer in assignment[proposal.counterpart_slot]:
        raise NotAssigned(
            f"{proposal.proposer} already on {proposal.counterpart_slot.key()}"
        )
    assignment[proposal.proposer_slot].add(proposal.counterpart)
    assignment[proposal.counterpart_slot].add(proposal.proposer)
    return assignment


def check_stand_in(
    released: ReleasedSchedule,
    roster: Roster,
    rules: RuleSet,
    absent_worker: str,
    volunteer: str,
    slot: ShiftSlot,
) -> None:
    """The volunteer must be genuinely available: present, off that slot, and
    legal with respect to rest, parity and their consecutive-day cap."""
    if absent_worker not in released.assignment.get(slot, ()):
        raise NotAssigned(f"{absent_worker} not on {slot.key()}")
    if volunteer == absent_worker:
        raise SelfSwap(volunteer)
    problems: list[Violation] = []
    volunteer_worker = roster.get(volunteer)
    if volunteer in released.assignment.get(slot, ()):
        problems.append(
            Violation(ViolationKind.COVERAGE, slot.key(), f"{volunteer} already on slot")
        )
    if volunteer_worker.absent_on(slot.date):
        problems.append(
            Violation(ViolationKind.COVERAGE, slot.key(), f"{volunteer} absent on {slot.date}")
        )
    if weekend_status(volunteer_worker, slot.date) is WeekendStatus.FREE_WEEKEND:
        problems.append(
            Violation(ViolationKind.PARITY, slot.key(), f"{slot.date} is {volunteer}'s free weekend")
        )
    future = released.slots_of(volunteer) + [slot]
    problems.extend(rest_check(future, rules))
    problems.extend(consecutive_days_check(volunteer_worker, future))
    if problems:
        raise VolunteerUnavailable(ValidationReport(tuple(problems), 0.0))


@dataclass(frozen=True)
class HoursStatement:
    worker_id: str
    month: Month
    target_hours: float
    assigned_hours: float

    @property
    def delta(self) -> float:
        return round(self.assigned_hours - self.target_hours, 6)


def hours_statement(
    worker: Worker,
    month: Month,
    assignment: Mapping[ShiftSlot, Iterable[str]],
    rules: RuleSet,
) -> HoursStatement:
    """Hours actually on the plan after swaps and stand-ins, against the
    contract target pro-rated to the month length."""
    assigned = 0.0
    for slot, wids in assignment.items():
        if worker.worker_id in wids:
            assigned += rules.shift_hours(slot.shift)
    target = worker.contract_hours_per_week * month.num_days() / 7.0
    return HoursStatement(
        worker_id=worker.worker_id,
        month=month,
        target_hours=round(target, 6),
        assigned_hours=round(assigned, 6),
    )
