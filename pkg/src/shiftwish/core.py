"""Core vocabulary: workers, shifts, calendar math, weekend parity, configuration."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from datetime import date, time, timedelta
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping


class Shift(str, Enum):
    MORNING = "morning"
    AFTERNOON = "afternoon"

    @property
    def order(self) -> int:
        return 0 if self is Shift.MORNING else 1


class WishScope(str, Enum):
    MORNING = "morning"
    AFTERNOON = "afternoon"
    WHOLE_DAY = "whole_day"

    def covers(self, shift: Shift) -> bool:
        if self is WishScope.WHOLE_DAY:
            return True
        return self.value == shift.value

    def slots(self, day: date) -> tuple["ShiftSlot", ...]:
        if self is WishScope.WHOLE_DAY:
            return (ShiftSlot(day, Shift.MORNING), ShiftSlot(day, Shift.AFTERNOON))
        return (ShiftSlot(day, Shift(self.value)),)

    def overlaps(self, other: "WishScope") -> bool:
        if WishScope.WHOLE_DAY in (self, other):
            return True
        return self is other


class Qualification(str, Enum):
    CERTIFIED_NURSE = "certified_nurse"
    ONE_YEAR_APPRENTICESHIP = "one_year_apprenticeship"
    APPRENTICE = "apprentice"
    AIDE = "aide"


class AbsenceReason(str, Enum):
    VACATION = "vacation"
    SICK = "sick"
    OTHER = "other"


class WeekendStatus(str, Enum):
    WORK_WEEKEND = "work_weekend"
    FREE_WEEKEND = "free_weekend"
    WEEKDAY = "weekday"


class RosterError(Exception):
    """Base for roster construction failures."""


class DuplicateWorkerId(RosterError):
    pass


class AnchorNotSaturday(RosterError):
    pass


class NegativeHours(RosterError):
    pass


class InvalidMonth(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ShiftSlot:
    """One staffable unit: a date plus morning or afternoon."""

    date: date
    shift: Shift

    def __post_init__(self):
        # ordering must treat morning < afternoon on the same date
        object.__setattr__(self, "shift", Shift(self.shift))

    @property
    def sort_key(self) -> tuple:
        return (self.date, self.shift.order)

    def key(self) -> str:
        return f"{self.date.isoformat()}:{self.shift.value}"

    @classmethod
    def from_key(cls, key: str) -> "ShiftSlot":
        day, _, shift = key.partition(":")
        return cls(date.fromisoformat(day), Shift(shift))


# dataclass order=True compares fields in order; Shift is a str-enum so
# "afternoon" < "morning" lexically, which is wrong. Use sort_key explicitly
# where order matters; equality/hashing is all the dataclass provides here.


@dataclass(frozen=True)
class Worker:
    worker_id: str
    display_name: str
    qualification: Qualification
    is_leader: bool = False
    contract_hours_per_week: float = 38.5
    weekend_parity_anchor: date = date(2019, 3, 2)
    max_consecutive_days: int = 5
    shift_preference: str = "none"  # morning | afternoon | none
    absences: frozenset[tuple[date, AbsenceReason]] = frozenset()

    def __post_init__(self):
        if self.weekend_parity_anchor.isoweekday() != 6:
            raise AnchorNotSaturday(
                f"{self.worker_id}: anchor {self.weekend_parity_anchor} is not a Saturday"
            )
        if self.contract_hours_per_week < 0:
            raise NegativeHours(f"{self.worker_id}: negative contract hours")
        if self.max_consecutive_days < 1:
            raise ValueError(f"{self.worker_id}: max_consecutive_days must be >= 1")
        if self.shift_preference not in ("morning", "afternoon", "none"):
            raise ValueError(f"{self.worker_id}: bad shift_preference {self.shift_preference!r}")

    def absent_on(self, day: date) -> bool:
        return any(d == day for d, _ in self.absences)

    def is_certified(self, count_one_year_apprenticeship: bool = False) -> bool:
        if self.qualification is Qualification.CERTIFIED_NURSE:
            return True
        return (
            count_one_year_apprenticeship
            and self.qualification is Qualification.ONE_YEAR_APPRENTICESHIP
        )


@dataclass(frozen=True)
class Roster:
    workers: tuple[Worker, ...]

    def __iter__(self):
        return iter(self.workers)

    def __len__(self) -> int:
        return len(self.workers)

    def __contains__(self, worker_id: str) -> bool:
        return any(w.worker_id == worker_id for w in self.workers)

    def get(self, worker_id: str) -> Worker:
        for w in self.workers:
            if w.worker_id == worker_id:
                return w
        raise KeyError(worker_id)

    def ids(self) -> list[str]:
        return [w.worker_id for w in self.workers]


def build_roster(records: Iterable[Worker | Mapping]) -> Roster:
    """Validate worker records into a Roster; rejects duplicates and bad fields."""
    workers: list[Worker] = []
    seen: set[str] = set()
    for rec in records:
        w = rec if isinstance(rec, Worker) else worker_from_record(rec)
        if w.worker_id in seen:
            raise DuplicateWorkerId(w.worker_id)
        seen.add(w.worker_id)
        workers.append(w)
    return Roster(tuple(workers))


def worker_from_record(rec: Mapping) -> Worker:
    absences = frozenset(
        (_parse_date(d), AbsenceReason(r)) for d, r in rec.get("absences", ())
    )
    return Worker(
        worker_id=str(rec["worker_id"]),
        display_name=str(rec.get("name", rec.get("display_name", rec["worker_id"]))),
        qualification=Qualification(rec["qualification"]),
        is_leader=_parse_bool(rec.get("is_leader", False)),
        contract_hours_per_week=float(rec["contract_hours_per_week"]),
        weekend_parity_anchor=_parse_date(rec["weekend_anchor"]),
        max_consecutive_days=int(rec.get("max_consecutive_days", 5)),
        shift_preference=str(rec.get("shift_preference", "none")),
        absences=absences,
    )


def _parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "y")


def _parse_date(v) -> date:
    return v if isinstance(v, date) else date.fromisoformat(str(v).strip())


ROSTER_CSV_HEADER = [
    "worker_id",
    "name",
    "qualification",
    "is_leader",
    "contract_hours_per_week",
    "weekend_anchor",
    "max_consecutive_days",
    "shift_preference",
]


def load_roster_csv(path: str | Path, absences_path: str | Path | None = None) -> Roster:
    """Read the roster import format; optionally merge the absences file."""
    absences: dict[str, list[tuple[date, AbsenceReason]]] = {}
    if absences_path is not None:
        with open(absences_path, encoding="utf-8", newline="") as f:
            for row in csv.DictReader(f):
                absences.setdefault(row["worker_id"].strip(), []).append(
                    (_parse_date(row["date"]), AbsenceReason(row["reason"].strip()))
                )
    records = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        missing = [c for c in ROSTER_CSV_HEADER if c not in (reader.fieldnames or [])]
        if missing:
            raise RosterError(f"roster file missing columns: {missing}")
        for row in reader:
            rec = {k: (v.strip() if isinstance(v, str) else v) for k, v in row.items()}
            rec["absences"] = absences.get(rec["worker_id"], [])
            records.append(rec)
    return build_roster(records)


def with_absences(
    roster: Roster, absences: Mapping[str, Iterable[tuple[date, AbsenceReason]]]
) -> Roster:
    """Return a roster with the given absences attached (workers are immutable)."""
    out = []
    for w in roster:
        extra = absences.get(w.worker_id)
        if extra:
            out.append(replace(w, absences=w.absences | frozenset(extra)))
        else:
            out.append(w)
    return Roster(tuple(out))


@dataclass(frozen=True, order=True)
class Month:
    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise InvalidMonth(f"month {self.month} out of range")
        if not 1 <= self.year <= 9999:
            raise InvalidMonth(f"year {self.year} out of range")

    @classmethod
    def parse(cls, s: str) -> "Month":
        try:
            y, m = s.strip().split("-")
            return cls(int(y), int(m))
        except (ValueError, InvalidMonth):
            raise InvalidMonth(f"cannot parse month {s!r}")

    @classmethod
    def of(cls, d: date) -> "Month":
        return cls(d.year, d.month)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def first_day(self) -> date:
        return date(self.year, self.month, 1)

    def num_days(self) -> int:
        nxt = date(self.year + 1, 1, 1) if self.month == 12 else date(self.year, self.month + 1, 1)
        return (nxt - self.first_day()).days

    def days(self) -> list[date]:
        first = self.first_day()
        return [first + timedelta(days=i) for i in range(self.num_days())]

    def next(self) -> "Month":
        return Month(self.year + 1, 1) if self.month == 12 else Month(self.year, self.month + 1)


@dataclass(frozen=True)
class MonthGrid:
    month: Month
    days: tuple[tuple[date, bool, bool], ...]  # (date, is_weekend, is_holiday)


def month_grid(month: Month | str, holiday_calendar: Iterable[date] = ()) -> MonthGrid:
    """One ordered entry per calendar day with weekend and holiday flags."""
    if isinstance(month, str):
        month = Month.parse(month)
    holidays = set(holiday_calendar)
    days = tuple(
        (d, d.isoweekday() >= 6, d in holidays)
        for d in month.days()
    )
    return MonthGrid(month=month, days=days)


def weekend_saturday(day: date) -> date | None:
    """Saturday of the weekend `day` belongs to, or None for weekdays."""
    wd = day.isoweekday()
    if wd == 6:
        return day
    if wd == 7:
        return day - timedelta(days=1)
    return None


def weekend_status(worker: Worker, day: date) -> WeekendStatus:
    """Alternating work/free weekends anchored at the worker's known work Saturday."""
    sat = weekend_saturday(day)
    if sat is None:
        return WeekendStatus.WEEKDAY
    weeks = (sat - worker.weekend_parity_anchor).days // 7
    return WeekendStatus.WORK_WEEKEND if weeks % 2 == 0 else WeekendStatus.FREE_WEEKEND


DEFAULT_SHIFT_TIMES: dict[Shift, tuple[time, time]] = {
    Shift.MORNING: (time(6, 0), time(14, 0)),
    Shift.AFTERNOON: (time(13, 30), time(21, 30)),
}


def christmas_new_year_pair(year: int) -> tuple[frozenset[date], frozenset[date]]:
    """Default holiday reciprocity pair: Dec 24-25 <-> Dec 31-Jan 1."""
    return (
        frozenset({date(year, 12, 24), date(year, 12, 25)}),
        frozenset({date(year, 12, 31), date(year + 1, 1, 1)}),
    )


@dataclass(frozen=True)
class SystemConfig:
    wish_quota: int = 5
    priority_enabled: bool = False
    shift_times: Mapping[Shift, tuple[time, time]] = field(
        default_factory=lambda: dict(DEFAULT_SHIFT_TIMES)
    )
    min_staff: Mapping[Shift, int] = field(
        default_factory=lambda: {Shift.MORNING: 2, Shift.AFTERNOON: 2}
    )
    min_certified: Mapping[Shift, int] = field(
        default_factory=lambda: {Shift.MORNING: 1, Shift.AFTERNOON: 1}
    )
    rest_hours_min: float = 11.0
    release_lead_days: int = 14
    holiday_pairs: tuple[tuple[frozenset[date], frozenset[date]], ...] = ()
    reciprocity_enabled: bool = False
    apprenticeship_counts_certified: bool = False
    solution_cap: int = 50
    autofill_node_budget: int = 1_000_000
    soft_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)  # mismatch, hours, spread
    fairness_spread_threshold: int = 1
    wish_examples: tuple[str, ...] = (
        "a concert",
        "the Christmas market",
        "a birthday",
        "a wedding",
    )

    def __post_init__(self):
        if self.wish_quota < 1:
            raise ValueError("wish_quota must be >= 1")
        if self.rest_hours_min <= 0:
            raise ValueError("rest_hours_min must be positive")
        if self.release_lead_days < 0:
            raise ValueError("release_lead_days must not be negative")
        for s in Shift:
            if self.min_certified.get(s, 0) > self.min_staff.get(s, 0):
                raise ValueError(f"min_certified[{s.value}] exceeds min_staff")
            start, end = self.shift_times[s]
            if start >= end:
                raise ValueError(f"shift {s.value} must start before it ends")

    def shift_hours(self, shift: Shift) -> float:
        start, end = self.shift_times[shift]
        return (
            (end.hour * 60 + end.minute) - (start.hour * 60 + start.minute)
        ) / 60.0
