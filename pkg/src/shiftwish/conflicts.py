"""Conflict detection and resolution options.

A conflict is a connected group of understaffed slots, linked by the wishes
that cover them. For each conflict we enumerate every minimal set of wishes
whose withdrawal restores feasibility; the system never picks one, it only
shows all of them to the involved workers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Month, Roster, ShiftSlot, WeekendStatus, weekend_status
from .rules import RuleSet, coverage_deficit, slot_availability
from .workflow import Wish


class EmptyConflict(Exception):
    pass


class NoSolution(Exception):
    """No withdrawal combination can restore feasibility (e.g. sickness alone
    breaks coverage); resolution needs resources beyond this team's wishes."""


@dataclass(frozen=True)
class DeficientSlot:
    slot: ShiftSlot
    staff_deficit: int
    certified_deficit: int


@dataclass(frozen=True)
class Conflict:
    conflict_id: str
    month: Month
    deficient_slots: tuple[DeficientSlot, ...]
    involved_wishes: tuple[str, ...]
    solutions: tuple[frozenset[str], ...]
    truncated: bool = False
    escalation_required: bool = False

    def involves(self, worker_id: str, wishes: Mapping[str, Wish]) -> bool:
        return any(wishes[wid].worker_id == worker_id for wid in self.involved_wishes)


def _conflict_id(month: Month, slots: Sequence[DeficientSlot]) -> str:
    raw = str(month) + "|" + ",".join(d.slot.key() for d in slots)
    return "c" + hashlib.sha1(raw.encode("utf-8")).hexdigest()[:10]


def _wish_sort_key(wish: Wish) -> tuple:
    return (wish.worker_id, wish.date, wish.scope.value, wish.wish_id)


def detect_conflicts(
    month: Month,
    roster: Roster,
    wishes: Iterable[Wish],
    rules: RuleSet,
    solution_cap: int = 50,
) -> list[Conflict]:
    """All conflicts for the month, treating every live wish as honored.

    Deficient slots are grouped into connected components linked by shared
    wishes (a whole-day wish links both of its slots); understaffing with no
    wish involved becomes its own conflict flagged for escalation.
    """
    live = [w for w in wishes if w.live]
    by_id = {w.wish_id: w for w in live}

    deficient: list[DeficientSlot] = []
    covering: dict[ShiftSlot, list[str]] = {}
    for day in month.days():
        for slot in (ShiftSlot(day, s) for s in sorted(rules.min_staff, key=lambda s: s.order)):
            available = slot_availability(roster, slot, live)
            staff_deficit, certified_deficit = coverage_deficit(available, slot, rules, month=month)
            if staff_deficit or certified_deficit:
                deficient.append(DeficientSlot(slot, staff_deficit, certified_deficit))
                covering[slot] = _restorable_covering(roster, slot, live)

    if not deficient:
        return []

    components = _connected_components(deficient, covering)
    conflicts = []
    for component in components:
        wish_ids = sorted(
            {wid for d in component for wid in covering[d.slot]},
            key=lambda wid: _wish_sort_key(by_id[wid]),
        )
        try:
            solutions, truncated = enumerate_solutions(
                component,
                {wid: by_id[wid] for wid in wish_ids},
                roster,
                rules,
                cap=solution_cap,
            )
            escalation = False
        except NoSolution:
            solutions, truncated = (), False
            escalation = True
        conflicts.append(
            Conflict(
                conflict_id=_conflict_id(month, component),
                month=month,
                deficient_slots=tuple(component),
                involved_wishes=tuple(wish_ids),
                solutions=tuple(solutions),
                truncated=truncated,
                escalation_required=escalation,
            )
        )
    conflicts.sort(key=lambda c: c.deficient_slots[0].slot.sort_key)
    return conflicts


def _restorable_covering(roster: Roster, slot: ShiftSlot, live: Sequence[Wish]) -> list[str]:
    # a wish only matters for this slot if it is the reason its holder is out
    out = []
    for w in live:
        if w.date != slot.date or not w.scope.covers(slot.shift):
            continue
        holder = roster.get(w.worker_id)
        if holder.absent_on(slot.date):
            continue
        if weekend_status(holder, slot.date) is WeekendStatus.FREE_WEEKEND:
            continue
        out.append(w.wish_id)
    return out


def _connected_components(
    deficient: Sequence[DeficientSlot], covering: Mapping[ShiftSlot, Sequence[str]]
) -> list[list[DeficientSlot]]:
    by_wish: dict[str, list[int]] = {}
    for i, d in enumerate(deficient):
        for wid in covering[d.slot]:
            by_wish.setdefault(wid, []).append(i)

    parent = list(range(len(deficient)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for indices in by_wish.values():
        for other in indices[1:]:
            union(indices[0], other)

    groups: dict[int, list[DeficientSlot]] = {}
    for i, d in enumerate(deficient):
        groups.setdefault(find(i), []).append(d)
    components = [sorted(g, key=lambda d: d.slot.sort_key) for g in groups.values()]
    components.sort(key=lambda g: g[0].slot.sort_key)
    return components


def enumerate_solutions(
    deficient_slots: Sequence[DeficientSlot],
    wishes: Mapping[str, Wish],
    roster: Roster,
    rules: RuleSet,
    cap: int = 50,
) -> tuple[list[frozenset[str]], bool]:
    """Exactly the minimal withdrawal sets restoring every slot in the group.

    Ordered by (set size, then the sorted (worker, date) keys of the members);
    truncated at `cap` with an explicit flag. Raises NoSolution when even
    withdrawing everything leaves a slot short, EmptyConflict on no slots.
    """
    if not deficient_slots:
        raise EmptyConflict("conflict has no deficient slots")

    ordered = sorted(wishes.values(), key=_wish_sort_key)
    ids = [w.wish_id for w in ordered]

    staff_help: dict[ShiftSlot, frozenset[str]] = {}
    cert_help: dict[ShiftSlot, frozenset[str]] = {}
    demands: list[tuple[ShiftSlot, int, int]] = []
    for d in deficient_slots:
        helpers = frozenset(_restorable_covering(roster, d.slot, ordered))
        certified = frozenset(
            wid
            for wid in helpers
            if roster.get(wishes[wid].worker_id).is_certified(
                rules.apprenticeship_counts_certified
            )
        )
        staff_help[d.slot] = helpers
        cert_help[d.slot] = certified
        demands.append((d.slot, d.staff_deficit, d.certified_deficit))

    def satisfied(chosen: frozenset[str] | set[str]) -> bool:
        for slot, staff_deficit, certified_deficit in demands:
            if len(staff_help[slot] & chosen) < staff_deficit:
                return False
            if len(cert_help[slot] & chosen) < certified_deficit:
                return False
        return True

    everything = set(ids)
    if not satisfied(everything):
        raise NoSolution("withdrawals alone cannot restore coverage")

    found: list[frozenset[str]] = []

    def dfs(i: int, chosen: set[str]):
        if satisfied(chosen):
            if all(not satisfied(chosen - {wid}) for wid in chosen):
                found.append(frozenset(chosen))
            return  # supersets of a satisfying set are never minimal
        if i == len(ids):
            return
        if not satisfied(chosen | set(ids[i:])):
            return  # nothing below here can work
        chosen.add(ids[i])
        dfs(i + 1, chosen)
        chosen.remove(ids[i])
        dfs(i + 1, chosen)

    dfs(0, set())

    def set_key(s: frozenset[str]) -> tuple:
        return (len(s), sorted(_wish_sort_key(wishes[wid]) for wid in s))

    found.sort(key=set_key)
    truncated = len(found) > cap
    return found[:cap], truncated


@dataclass(frozen=True)
class ConflictView:
    """What one involved worker (or the planner) gets to see."""

    conflict_id: str
    month: str
    slots: tuple[dict, ...]
    colleagues: tuple[str, ...]
    wishes: tuple[dict, ...]
    solutions: tuple[tuple[str, ...], ...]
    truncated: bool
    escalation_required: bool


def conflict_view(
    conflict: Conflict, wishes: Mapping[str, Wish], roster: Roster
) -> ConflictView:
    involved = [wishes[wid] for wid in conflict.involved_wishes]
    names = sorted({roster.get(w.worker_id).display_name for w in involved})
    return ConflictView(
        conflict_id=conflict.conflict_id,
        month=str(conflict.month),
        slots=tuple(
            {
                "date": d.slot.date.isoformat(),
                "shift": d.slot.shift.value,
                "staff_deficit": d.staff_deficit,
                "certified_deficit": d.certified_deficit,
            }
            for d in conflict.deficient_slots
        ),
        colleagues=tuple(names),
        wishes=tuple(
            {
                "wish_id": w.wish_id,
                "worker_id": w.worker_id,
                "worker_name": roster.get(w.worker_id).display_name,
                "date": w.date.isoformat(),
                "scope": w.scope.value,
            }
            for w in involved
        ),
        solutions=tuple(tuple(sorted(s)) for s in conflict.solutions),
        truncated=conflict.truncated,
        escalation_required=conflict.escalation_required,
    )


def conflicts_visible_to(
    conflicts: Iterable[Conflict],
    wishes: Mapping[str, Wish],
    worker_id: str | None = None,
    *,
    planner: bool = False,
) -> list[Conflict]:
    """Involved workers see their own conflicts; the planner sees everything.

    Workers without a wish in a conflict never learn of it through this path.
    """
    if planner:
        return list(conflicts)
    if worker_id is None:
        return []
    return [c for c in conflicts if c.involves(worker_id, wishes)]


def involved_wish_ids(conflicts: Iterable[Conflict]) -> set[str]:
    return {wid for c in conflicts for wid in c.involved_wishes}
