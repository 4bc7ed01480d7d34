"""The command layer: every mutation is validated, appended to the event log
as exactly one event, and applied to in-memory state by the same function
replay uses. Reads work on the resulting snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timezone

from . import conflicts as conflict_engine
from . import finalize
from .core import Month, Roster, ShiftSlot, SystemConfig, WishScope, weekend_status
from .events import Event, EventKind, EventLog
from .rules import HolidayLedger, RuleSet, ledger_from_assignments, validate_schedule
from .workflow import (
    AlreadyWithdrawn,
    CycleExists,
    CycleNotFound,
    HoursStatement,
    NotAuthorized,
    NotOwner,
    PhaseClosed,
    PlanningCycle,
    ReleasedSchedule,
    StandInEvent,
    SwapProposal,
    SwapState,
    ValidationFailed,
    Wish,
    WishCollisionWarning,
    WishOrigin,
    WishStatus,
    check_stand_in,
    check_swap,
    check_wish,
    hours_statement,
    quota_remaining,
    release_date_for,
    swapped_assignment,
)


class StaleDraft(Exception):
    pass


class NoDraft(Exception):
    pass


@dataclass(frozen=True)
class Actor:
    actor_id: str
    role: str = "worker"  # worker | planner

    @property
    def is_planner(self) -> bool:
        return self.role == "planner"


@dataclass
class Notification:
    worker_id: str
    message: str
    slot_key: str
    wish_id: str


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class _DraftCache:
    draft: finalize.ScheduleDraft
    base_seq: int


class PlanningService:
    """Single-writer facade over roster, config and the event log."""

    def __init__(self, roster: Roster, config: SystemConfig, log: EventLog | None = None):
        self.roster = roster
        self.config = config
        self.log = log if log is not None else EventLog()
        self.cycles: dict[str, PlanningCycle] = {}
        self.wishes: dict[str, Wish] = {}
        self.proposals: dict[str, SwapProposal] = {}
        self.kudos: dict[str, int] = {}
        self.stand_ins: list[StandInEvent] = []
        self.notifications: list[Notification] = []
        self.detections: dict[str, dict] = {}
        self._draft_cache: dict[str, _DraftCache] = {}
        for event in self.log:
            self._apply(event)

    # ------------------------------------------------------------------ state

    def _append(self, actor: str, kind: EventKind, payload: dict, at: str | None) -> Event:
        event = Event(
            seq=self.log.next_seq,
            timestamp=at if at is not None else _now(),
            actor=actor,
            kind=kind,
            payload=payload,
        )
        self.log.append(event)
        self._apply(event)
        return event

    def _apply(self, event: Event) -> None:
        handler = getattr(self, "_apply_" + event.kind.name.lower())
        handler(event)

    def _cycle(self, month: Month | str) -> PlanningCycle:
        key = str(month)
        if key not in self.cycles:
            raise CycleNotFound(key)
        return self.cycles[key]

    def cycle_wishes(self, month: Month | str) -> list[Wish]:
        cycle = self._cycle(month)
        return [self.wishes[wid] for wid in cycle.wish_ids]

    def ruleset(self, month: Month | str) -> RuleSet:
        return RuleSet.from_config(self.config, ledger=self.external_ledger(month))

    def external_ledger(self, month: Month | str) -> HolidayLedger:
        """Holiday flags from every released month other than the one at hand."""
        ledger = HolidayLedger()
        for key, cycle in self.cycles.items():
            if key == str(month) or cycle.released is None:
                continue
            ledger = ledger_from_assignments(
                cycle.released.assignment, self.config.holiday_pairs, base=ledger
            )
        return ledger

    # --------------------------------------------------------------- commands

    def open_cycle(self, actor: Actor, month: Month | str, at: str | None = None) -> PlanningCycle:
        month = Month.parse(month) if isinstance(month, str) else month
        if str(month) in self.cycles:
            raise CycleExists(str(month))
        release = release_date_for(month, self.config.release_lead_days)
        self._append(
            actor.actor_id,
            EventKind.CYCLE_OPENED,
            {
                "month": str(month),
                "quota": self.config.wish_quota,
                "priority_enabled": self.config.priority_enabled,
                "release_date": release.isoformat(),
            },
            at,
        )
        return self._cycle(month)

    def _apply_cycle_opened(self, event: Event) -> None:
        p = event.payload
        month = Month.parse(p["month"])
        self.cycles[p["month"]] = PlanningCycle(
            month=month,
            quota=int(p["quota"]),
            priority_enabled=bool(p["priority_enabled"]),
            release_date=date.fromisoformat(p["release_date"]),
        )

    def submit_wish(
        self,
        actor: Actor,
        month: Month | str,
        day: date,
        scope: WishScope | str,
        *,
        priority: bool = False,
        worker_id: str | None = None,
        at: str | None = None,
    ) -> Wish:
        """A worker submits their own wish; a planner may enter one for anyone,
        bypassing the quota but no other rule."""
        cycle = self._cycle(month)
        scope = WishScope(scope)
        target = worker_id or actor.actor_id
        planner_entry = target != actor.actor_id or (actor.is_planner and worker_id is not None)
        if planner_entry and not actor.is_planner:
            raise NotAuthorized("only the planner can enter wishes for others")
        check_wish(
            cycle,
            self.roster,
            self.cycle_wishes(month),
            target,
            day,
            scope,
            priority=priority,
            enforce_quota=not planner_entry,
        )
        wish_id = f"w{self.log.next_seq:05d}"
        kind = EventKind.PLANNER_WISH_ENTERED if planner_entry else EventKind.WISH_SUBMITTED
        self._append(
            actor.actor_id,
            kind,
            {
                "wish_id": wish_id,
                "month": str(cycle.month),
                "worker_id": target,
                "date": day.isoformat(),
                "scope": scope.value,
                "priority": bool(priority),
            },
            at,
        )
        return self.wishes[wish_id]

    def _store_wish(self, event: Event, origin: WishOrigin) -> None:
        p = event.payload
        wish = Wish(
            wish_id=p["wish_id"],
            worker_id=p["worker_id"],
            date=date.fromisoformat(p["date"]),
            scope=WishScope(p["scope"]),
            priority=bool(p.get("priority", False)),
            origin=origin,
        )
        self.wishes[wish.wish_id] = wish
        self.cycles[p["month"]].wish_ids.append(wish.wish_id)

    def _apply_wish_submitted(self, event: Event) -> None:
        self._store_wish(event, WishOrigin.WORKER)

    def _apply_planner_wish_entered(self, event: Event) -> None:
        self._store_wish(event, WishOrigin.PLANNER)

    def withdraw_wish(self, actor: Actor, wish_id: str, at: str | None = None) -> Wish:
        wish = self.wishes.get(wish_id)
        if wish is None:
            raise KeyError(wish_id)
        if wish.worker_id != actor.actor_id and not actor.is_planner:
            raise NotOwner(f"{actor.actor_id} does not own {wish_id}")
        if wish.status is WishStatus.WITHDRAWN:
            raise AlreadyWithdrawn(wish_id)
        if wish.status is WishStatus.GRANTED:
            raise PhaseClosed("granted wishes are part of the released schedule")
        self._append(actor.actor_id, EventKind.WISH_WITHDRAWN, {"wish_id": wish_id}, at)
        return self.wishes[wish_id]

    def _apply_wish_withdrawn(self, event: Event) -> None:
        self.wishes[event.payload["wish_id"]].status = WishStatus.WITHDRAWN

    # -------------------------------------------------------------- conflicts

    def conflicts(self, month: Month | str) -> list[conflict_engine.Conflict]:
        """Conflicts derived from the current snapshot; wish withdrawal or
        submission re-evaluates implicitly."""
        cycle = self._cycle(month)
        return conflict_engine.detect_conflicts(
            cycle.month,
            self.roster,
            self.cycle_wishes(month),
            self.ruleset(month),
            solution_cap=self.config.solution_cap,
        )

    def recompute_conflicts(self, actor: Actor, month: Month | str, at: str | None = None) -> list:
        """Publish a detection snapshot to the log (the CLI `detect` verb)."""
        found = self.conflicts(month)
        self._append(
            actor.actor_id,
            EventKind.CONFLICTS_RECOMPUTED,
            {
                "month": str(self._cycle(month).month),
                "snapshot_seq": len(self.log),
                "conflict_ids": [c.conflict_id for c in found],
            },
            at,
        )
        return found

    def _apply_conflicts_recomputed(self, event: Event) -> None:
        self.detections[event.payload["month"]] = dict(event.payload)

    def conflicts_visible_to(self, actor: Actor, month: Month | str) -> list:
        return conflict_engine.conflicts_visible_to(
            self.conflicts(month),
            self.wishes,
            actor.actor_id,
            planner=actor.is_planner,
        )

    def conflict_views(self, actor: Actor, month: Month | str) -> list[conflict_engine.ConflictView]:
        return [
            conflict_engine.conflict_view(c, self.wishes, self.roster)
            for c in self.conflicts_visible_to(actor, month)
        ]

    def wish_effective_status(self, wish: Wish, month: Month | str | None = None) -> WishStatus:
        if wish.status is not WishStatus.ACTIVE:
            return wish.status
        month = month if month is not None else Month.of(wish.date)
        try:
            involved = conflict_engine.involved_wish_ids(self.conflicts(month))
        except CycleNotFound:
            return wish.status
        return WishStatus.IN_CONFLICT if wish.wish_id in involved else WishStatus.ACTIVE

    # -------------------------------------------------------------- finalizer

    def autofill(
        self,
        actor: Actor,
        month: Month | str,
        *,
        acknowledge_conflicts: bool = False,
        pinned: tuple = (),
    ):
        """Compute a draft from the current snapshot (no event; the draft is a
        background artifact until released)."""
        if not actor.is_planner:
            raise NotAuthorized("autofill is a planner action")
        cycle = self._cycle(month)
        if cycle.phase != "preparation":
            raise PhaseClosed(f"cycle {cycle.month} already released")
        open_conflicts = self.conflicts(month)
        if open_conflicts and not acknowledge_conflicts:
            raise finalize.UnresolvedConflicts(
                f"{len(open_conflicts)} unresolved conflicts in {cycle.month}"
            )
        result = finalize.autofill(
            cycle.month,
            self.roster,
            self.ruleset(month),
            self.cycle_wishes(month),
            pinned=pinned,
            node_budget=self.config.autofill_node_budget,
            weights=self.config.soft_weights,
        )
        if isinstance(result, finalize.ScheduleDraft):
            self._draft_cache[str(cycle.month)] = _DraftCache(result, base_seq=len(self.log))
        return result

    def current_draft(self, month: Month | str) -> finalize.ScheduleDraft:
        cached = self._draft_cache.get(str(month))
        if cached is None:
            raise NoDraft(f"no draft computed for {month}")
        return cached.draft

    def override(
        self,
        actor: Actor,
        month: Month | str,
        change: finalize.OverrideChange,
        at: str | None = None,
    ):
        """Planner change. Pre-release it edits the cached draft (no event);
        post-release it is an audited mutation of the schedule of record."""
        if not actor.is_planner:
            raise NotAuthorized("overrides are a planner action")
        cycle = self._cycle(month)
        rules = self.ruleset(month)
        if cycle.released is None:
            cached = self._draft_cache.get(str(cycle.month))
            if cached is None:
                raise NoDraft(f"run autofill for {cycle.month} first")
            new_draft = finalize.apply_override(
                cached.draft, change, self.roster, rules, self.cycle_wishes(month)
            )
            new_warnings = [w for w in new_draft.warnings if w not in cached.draft.warnings]
            cached.draft = new_draft
            for w in new_warnings:
                self.notifications.append(
                    Notification(
                        worker_id=w.worker_id,
                        message=f"planner assigned you on your wished slot {w.slot_key}",
                        slot_key=w.slot_key,
                        wish_id=w.wish_id,
                    )
                )
            return new_draft

        released = cycle.released
        as_draft = finalize.ScheduleDraft(
            month=cycle.month,
            assignment={s: set(v) for s, v in released.assignment.items()},
            provenance=dict(released.provenance),
            warnings=list(released.warnings),
        )
        new_draft = finalize.apply_override(
            as_draft, change, self.roster, rules, self.cycle_wishes(month)
        )
        fresh = [w for w in new_draft.warnings if w not in released.warnings]
        self._append(
            actor.actor_id,
            EventKind.OVERRIDE_APPLIED,
            {
                "month": str(cycle.month),
                "slot": change.slot.key(),
                "add": list(change.add),
                "remove": list(change.remove),
                "warnings": [
                    {"wish_id": w.wish_id, "slot_key": w.slot_key, "worker_id": w.worker_id}
                    for w in fresh
                ],
            },
            at,
        )
        return self._cycle(month).released

    def _apply_override_applied(self, event: Event) -> None:
        p = event.payload
        released = self.cycles[p["month"]].released
        slot = ShiftSlot.from_key(p["slot"])
        crew = released.assignment.setdefault(slot, set())
        for wid in p["remove"]:
            crew.discard(wid)
            released.provenance.pop((p["slot"], wid), None)
        for wid in p["add"]:
            crew.add(wid)
            released.provenance[(p["slot"], wid)] = "override"
        for w in p["warnings"]:
            warning = WishCollisionWarning(w["wish_id"], w["slot_key"], w["worker_id"])
            released.warnings.append(warning)
            self.notifications.append(
                Notification(
                    worker_id=w["worker_id"],
                    message=f"planner assigned you on your wished slot {w['slot_key']}",
                    slot_key=w["slot_key"],
                    wish_id=w["wish_id"],
                )
            )

    def release(
        self,
        actor: Actor,
        month: Month | str,
        as_of: date,
        at: str | None = None,
    ) -> ReleasedSchedule:
        """Version-checked release of the cached draft."""
        if not actor.is_planner:
            raise NotAuthorized("release is a planner action")
        cycle = self._cycle(month)
        if cycle.released is not None:
            raise PhaseClosed(f"{cycle.month} already released")
        cached = self._draft_cache.get(str(cycle.month))
        if cached is None:
            raise NoDraft(f"run autofill for {cycle.month} first")
        if cached.base_seq != len(self.log):
            raise StaleDraft(
                f"draft computed at seq {cached.base_seq}, log is at {len(self.log)}"
            )
        released = finalize.release(
            cached.draft,
            cycle,
            {w.wish_id: w for w in self.cycle_wishes(month)},
            self.roster,
            self.ruleset(month),
            as_of,
        )
        self._append(
            actor.actor_id,
            EventKind.SCHEDULE_RELEASED,
            {
                "month": str(cycle.month),
                "assignment": [
                    [s.key(), sorted(v)]
                    for s, v in sorted(released.assignment.items(), key=lambda kv: kv[0].sort_key)
                ],
                "provenance": [
                    [k[0], k[1], v] for k, v in sorted(released.provenance.items())
                ],
                "warnings": [
                    {"wish_id": w.wish_id, "slot_key": w.slot_key, "worker_id": w.worker_id}
                    for w in released.warnings
                ],
                "granted_wish_ids": sorted(released.granted_wish_ids),
                "released_on": as_of.isoformat(),
                "late": released.late,
            },
            at,
        )
        del self._draft_cache[str(cycle.month)]
        return self._cycle(month).released

    def _apply_schedule_released(self, event: Event) -> None:
        p = event.payload
        cycle = self.cycles[p["month"]]
        assignment = {
            ShiftSlot.from_key(key): set(wids) for key, wids in p["assignment"]
        }
        cycle.released = ReleasedSchedule(
            month=cycle.month,
            assignment=assignment,
            provenance={(a, b): c for a, b, c in p["provenance"]},
            warnings=[
                WishCollisionWarning(w["wish_id"], w["slot_key"], w["worker_id"])
                for w in p["warnings"]
            ],
            granted_wish_ids=set(p["granted_wish_ids"]),
            released_on=date.fromisoformat(p["released_on"]),
            late=bool(p["late"]),
        )
        for wid in p["granted_wish_ids"]:
            self.wishes[wid].status = WishStatus.GRANTED

    # ------------------------------------------------------- phase-2 practice

    def propose_swap(
        self,
        actor: Actor,
        month: Month | str,
        counterpart: str,
        proposer_slot: ShiftSlot,
        counterpart_slot: ShiftSlot,
        at: str | None = None,
    ) -> SwapProposal:
        cycle = self._cycle(month)
        if cycle.released is None:
            raise PhaseClosed("swaps happen on the released schedule")
        proposal_id = f"s{self.log.next_seq:05d}"
        proposal = SwapProposal(
            proposal_id=proposal_id,
            month=cycle.month,
            proposer=actor.actor_id,
            counterpart=counterpart,
            proposer_slot=proposer_slot,
            counterpart_slot=counterpart_slot,
        )
        check_swap(cycle.released, proposal)
        self._append(
            actor.actor_id,
            EventKind.SWAP_PROPOSED,
            {
                "proposal_id": proposal_id,
                "month": str(cycle.month),
                "proposer": actor.actor_id,
                "counterpart": counterpart,
                "proposer_slot": proposer_slot.key(),
                "counterpart_slot": counterpart_slot.key(),
            },
            at,
        )
        return self.proposals[proposal_id]

    def _apply_swap_proposed(self, event: Event) -> None:
        p = event.payload
        self.proposals[p["proposal_id"]] = SwapProposal(
            proposal_id=p["proposal_id"],
            month=Month.parse(p["month"]),
            proposer=p["proposer"],
            counterpart=p["counterpart"],
            proposer_slot=ShiftSlot.from_key(p["proposer_slot"]),
            counterpart_slot=ShiftSlot.from_key(p["counterpart_slot"]),
        )

    def accept_swap(self, actor: Actor, proposal_id: str, at: str | None = None) -> SwapProposal:
        """Only the counterpart accepts; the exchange must stay legal."""
        proposal = self.proposals.get(proposal_id)
        if proposal is None:
            raise KeyError(proposal_id)
        if actor.actor_id != proposal.counterpart:
            raise NotAuthorized("only the counterpart can accept a swap")
        if proposal.state is not SwapState.PROPOSED:
            raise PhaseClosed(f"proposal is {proposal.state.value}")
        cycle = self._cycle(proposal.month)
        check_swap(cycle.released, proposal)  # raises NotAssigned if invalidated
        candidate = swapped_assignment(cycle.released, proposal)
        live = [w for w in self.cycle_wishes(proposal.month) if w.live or w.status is WishStatus.GRANTED]
        report = validate_schedule(
            candidate,
            self.roster,
            self.ruleset(proposal.month),
            month=proposal.month,
            wishes=live,
            acknowledged=cycle.released.acknowledged(),
            external_ledger=self.external_ledger(proposal.month),
        )
        if report.hard_violations:
            raise ValidationFailed(report)
        self._append(actor.actor_id, EventKind.SWAP_ACCEPTED, {"proposal_id": proposal_id}, at)
        return self.proposals[proposal_id]

    def _apply_swap_accepted(self, event: Event) -> None:
        proposal = self.proposals[event.payload["proposal_id"]]
        released = self.cycles[str(proposal.month)].released
        released.assignment[proposal.proposer_slot].discard(proposal.proposer)
        released.assignment[proposal.counterpart_slot].discard(proposal.counterpart)
        released.assignment[proposal.proposer_slot].add(proposal.counterpart)
        released.assignment[proposal.counterpart_slot].add(proposal.proposer)
        released.provenance[(proposal.proposer_slot.key(), proposal.counterpart)] = "swap"
        released.provenance[(proposal.counterpart_slot.key(), proposal.proposer)] = "swap"
        proposal.state = SwapState.ACCEPTED

    def record_stand_in(
        self,
        actor: Actor,
        month: Month | str,
        absent_worker: str,
        volunteer: str,
        slot: ShiftSlot,
        at: str | None = None,
    ) -> StandInEvent:
        cycle = self._cycle(month)
        if cycle.released is None:
            raise PhaseClosed("stand-ins happen on the released schedule")
        check_stand_in(
            cycle.released, self.roster, self.ruleset(month), absent_worker, volunteer, slot
        )
        self._append(
            actor.actor_id,
            EventKind.STAND_IN_RECORDED,
            {
                "month": str(cycle.month),
                "slot": slot.key(),
                "absent_worker": absent_worker,
                "volunteer": volunteer,
            },
            at,
        )
        return self.stand_ins[-1]

    def _apply_stand_in_recorded(self, event: Event) -> None:
        p = event.payload
        released = self.cycles[p["month"]].released
        slot = ShiftSlot.from_key(p["slot"])
        released.assignment[slot].discard(p["absent_worker"])
        released.assignment[slot].add(p["volunteer"])
        released.provenance[(p["slot"], p["volunteer"])] = "stand_in"
        self.kudos[p["volunteer"]] = self.kudos.get(p["volunteer"], 0) + 1
        self.stand_ins.append(
            StandInEvent(
                absent_worker=p["absent_worker"],
                volunteer=p["volunteer"],
                slot=slot,
                timestamp=event.timestamp,
            )
        )

    def give_kudos(self, actor: Actor, to_worker: str, at: str | None = None) -> int:
        self.roster.get(to_worker)
        self._append(actor.actor_id, EventKind.KUDOS_GIVEN, {"to": to_worker}, at)
        return self.kudos[to_worker]

    def _apply_kudos_given(self, event: Event) -> None:
        to = event.payload["to"]
        self.kudos[to] = self.kudos.get(to, 0) + 1

    # ----------------------------------------------------------------- views

    def hours_for(self, worker_id: str, month: Month | str) -> HoursStatement:
        cycle = self._cycle(month)
        if cycle.released is None:
            raise PhaseClosed(f"{cycle.month} not released yet")
        return hours_statement(
            self.roster.get(worker_id),
            cycle.month,
            cycle.released.assignment,
            self.ruleset(month),
        )

    def fairness(self, months: list[str] | None = None) -> finalize.FairnessReport:
        released = [
            c.released
            for key, c in sorted(self.cycles.items())
            if c.released is not None and (months is None or key in months)
        ]
        return finalize.fairness_report(
            released,
            self.roster,
            RuleSet.from_config(self.config),
            spread_threshold=self.config.fairness_spread_threshold,
        )

    def calendar_view(self, actor: Actor, month: Month | str) -> dict:
        """The safe-harbor calendar: per-day wish counts, the caller's own
        wishes, and conflict markers only on the caller's own conflicts."""
        cycle = self._cycle(month)
        live = [w for w in self.cycle_wishes(month) if w.live or w.status is WishStatus.GRANTED]
        own_conflict_days: set[date] = set()
        for c in self.conflicts_visible_to(actor, month):
            for d in c.deficient_slots:
                own_conflict_days.add(d.slot.date)
        try:
            caller = self.roster.get(actor.actor_id)
        except KeyError:
            caller = None
        days = []
        for day in cycle.month.days():
            todays = [w for w in live if w.date == day]
            own = [w for w in todays if w.worker_id == actor.actor_id]
            count = len(todays)
            band = "none" if count == 0 else ("low" if count <= 2 else "high")
            days.append(
                {
                    "date": day.isoformat(),
                    "weekend_status": (
                        weekend_status(caller, day).value if caller else "weekday"
                    ),
                    "wish_count": count,
                    "own_wishes": [
                        {
                            "wish_id": w.wish_id,
                            "scope": w.scope.value,
                            "status": self.wish_effective_status(w, month).value,
                        }
                        for w in own
                    ],
                    "conflict": day in own_conflict_days,
                    "band": band,
                }
            )
        return {
            "month": str(cycle.month),
            "phase": cycle.phase,
            "release_date": cycle.release_date.isoformat(),
            "quota_remaining": quota_remaining(cycle, self.cycle_wishes(month), actor.actor_id),
            "wish_examples": list(self.config.wish_examples),
            "days": days,
        }

    def workers_without_wishes(self, month: Month | str) -> list[str]:
        """Mid-cycle reminder list for the leader's nudge."""
        cycle = self._cycle(month)
        active = {w.worker_id for w in self.cycle_wishes(month) if w.live}
        return sorted(w.worker_id for w in self.roster if w.worker_id not in active)
