"""Seeded random instance generators for the cross-check suites."""

from __future__ import annotations

import random
from datetime import date, timedelta

from shiftwish.core import (
    AbsenceReason,
    Month,
    Qualification,
    Shift,
    SystemConfig,
    WishScope,
    Worker,
    build_roster,
    weekend_status,
)
from shiftwish.rules import RuleSet
from shiftwish.workflow import Wish

_ANCHORS = [date(2019, 3, 2), date(2019, 3, 9)]
_QUALS = [
    Qualification.CERTIFIED_NURSE,
    Qualification.CERTIFIED_NURSE,
    Qualification.AIDE,
    Qualification.APPRENTICE,
    Qualification.ONE_YEAR_APPRENTICESHIP,
]


def random_instance(
    rng: random.Random,
    *,
    max_workers: int = 8,
    max_days: int = 14,
    max_wishes: int = 10,
    month: Month = Month(2019, 3),
):
    """Roster + legal wish set + rules for a conflict-detection round."""
    n = rng.randint(2, max_workers)
    workers = []
    for i in range(n):
        absences = set()
        if rng.random() < 0.35:
            day = month.first_day() + timedelta(days=rng.randrange(max_days))
            absences.add((day, rng.choice(list(AbsenceReason))))
        workers.append(
            Worker(
                worker_id=f"w{i:02d}",
                display_name=f"W{i:02d}",
                qualification=rng.choice(_QUALS),
                contract_hours_per_week=rng.choice([19.25, 30.0, 38.5]),
                weekend_parity_anchor=rng.choice(_ANCHORS),
                max_consecutive_days=rng.randint(3, 7),
                shift_preference=rng.choice(["morning", "afternoon", "none", "none"]),
                absences=frozenset(absences),
            )
        )
    roster = build_roster(workers)

    min_staff_m = rng.randint(1, max(1, n // 2))
    min_staff_a = rng.randint(1, max(1, n // 2))
    config = SystemConfig(
        min_staff={Shift.MORNING: min_staff_m, Shift.AFTERNOON: min_staff_a},
        min_certified={
            Shift.MORNING: rng.randint(0, min_staff_m),
            Shift.AFTERNOON: rng.randint(0, min_staff_a),
        },
    )
    rules = RuleSet.from_config(config)

    days = [month.first_day() + timedelta(days=k) for k in range(max_days)]
    wishes = []
    taken: set[tuple[str, date]] = set()
    for j in range(rng.randint(0, max_wishes)):
        for _ in range(20):  # rejection-sample a legal wish
            worker = rng.choice(workers)
            day = rng.choice(days)
            if (worker.worker_id, day) in taken:
                continue
            status = weekend_status(worker, day)
            if status.value == "free_weekend":
                continue
            scope = rng.choice(list(WishScope))
            if status.value == "work_weekend" and scope is WishScope.WHOLE_DAY:
                scope = rng.choice([WishScope.MORNING, WishScope.AFTERNOON])
            wishes.append(Wish(f"g{j:03d}", worker.worker_id, day, scope))
            taken.add((worker.worker_id, day))
            break
    return roster, wishes, rules, days


def random_fill_instance(rng: random.Random, *, max_workers: int = 5, num_days: int = 7):
    """Small roster + window for autofill-vs-exhaustive-search rounds."""
    month = Month(2019, 3)
    n = rng.randint(2, max_workers)
    workers = []
    for i in range(n):
        absences = set()
        if rng.random() < 0.3:
            day = month.first_day() + timedelta(days=rng.randrange(num_days + 3))
            absences.add((day, AbsenceReason.SICK))
        workers.append(
            Worker(
                worker_id=f"w{i:02d}",
                display_name=f"W{i:02d}",
                qualification=rng.choice(_QUALS),
                contract_hours_per_week=rng.choice([19.25, 38.5]),
                weekend_parity_anchor=rng.choice(_ANCHORS),
                max_consecutive_days=rng.randint(2, 7),
                shift_preference=rng.choice(["morning", "afternoon", "none"]),
                absences=frozenset(absences),
            )
        )
    roster = build_roster(workers)
    staff_cap = max(1, n - 1)
    min_staff_m = rng.randint(1, min(2, staff_cap))
    min_staff_a = rng.randint(1, min(2, staff_cap))
    config = SystemConfig(
        min_staff={Shift.MORNING: min_staff_m, Shift.AFTERNOON: min_staff_a},
        min_certified={
            Shift.MORNING: rng.randint(0, min_staff_m),
            Shift.AFTERNOON: rng.randint(0, min_staff_a),
        },
    )
    rules = RuleSet.from_config(config)

    start = month.first_day() + timedelta(days=rng.randint(0, 31 - num_days))
    days = [start + timedelta(days=k) for k in range(rng.randint(3, num_days))]

    wishes = []
    for j in range(rng.randint(0, 2)):
        for _ in range(20):
            worker = rng.choice(workers)
            day = rng.choice(days)
            status = weekend_status(worker, day)
            if status.value == "free_weekend":
                continue
            scope = rng.choice(list(WishScope))
            if status.value == "work_weekend" and scope is WishScope.WHOLE_DAY:
                scope = rng.choice([WishScope.MORNING, WishScope.AFTERNOON])
            if any(w.worker_id == worker.worker_id and w.date == day for w in wishes):
                continue
            wishes.append(Wish(f"f{j:03d}", worker.worker_id, day, scope))
            break
    return roster, wishes, rules, days, month
