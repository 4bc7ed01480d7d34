"""Deterministic study fixture: an event log whose usage statistics match the
nine-month field deployment this system models (105 wishes from 11 of 16 team
members, the November planner-entry anomaly, the December holiday peak).

Wish dates are synthetic: the real per-wish dates were never published, so the
generator spreads them over weekdays deterministically. Aggregates are what
matters here, and they are pinned by tests.
"""

from __future__ import annotations

import csv
from dataclasses import replace
from datetime import date, timedelta
from io import StringIO
from pathlib import Path

from .core import Month, Roster, SystemConfig, WishScope, build_roster
from .events import EventLog, write_log
from .service import Actor, PlanningService

OLD_LEADER = "w10"
NEW_LEADER = "w11"

_NAMES = [
    "Petra", "Monika", "Sabine", "Karin", "Ulrike", "Renate", "Claudia",
    "Birgit", "Andrea", "Stefan", "Heike", "Susanne", "Gabriele", "Martina",
    "Anja", "Kerstin",
]

# wishes per worker per planning month, March 2019 .. January 2020
_MATRIX: dict[str, dict[str, int]] = {
    "w01": {"2019-03": 2, "2019-04": 1, "2019-05": 1, "2019-06": 1, "2019-07": 1,
            "2019-08": 1, "2019-09": 1, "2019-10": 1, "2019-11": 10, "2019-12": 5,
            "2020-01": 2},
    "w02": {"2019-03": 1, "2019-04": 1, "2019-05": 1, "2019-06": 1, "2019-07": 1,
            "2019-08": 1, "2019-09": 1, "2019-10": 1, "2019-11": 3, "2019-12": 3,
            "2020-01": 1},
    "w03": {"2019-03": 1, "2019-04": 1, "2019-05": 1, "2019-06": 1, "2019-07": 1,
            "2019-09": 1, "2019-10": 1, "2019-11": 3, "2019-12": 2, "2020-01": 1},
    "w04": {"2019-03": 1, "2019-04": 1, "2019-05": 1, "2019-06": 1, "2019-07": 1,
            "2019-09": 1, "2019-10": 1, "2019-11": 3, "2019-12": 2},
    "w05": {"2019-03": 1, "2019-04": 1, "2019-05": 1, "2019-06": 1, "2019-07": 1,
            "2019-08": 1, "2019-09": 1, "2019-11": 2, "2019-12": 2, "2020-01": 1},
    "w06": {"2019-03": 1, "2019-04": 1, "2019-09": 1, "2019-10": 1, "2019-11": 3,
            "2019-12": 2},
    "w07": {"2019-03": 1, "2019-11": 3, "2019-12": 3, "2020-01": 1},
    "w08": {"2019-11": 2, "2019-12": 5},
    "w09": {"2019-11": 1},
    OLD_LEADER: {"2019-05": 1},
    NEW_LEADER: {"2019-11": 1},
}

# (morning, afternoon, whole_day) per month; November reflects the planner
# entry anomaly, December the holiday peak
_SCOPES: dict[str, tuple[int, int, int]] = {
    "2019-03": (1, 2, 5),
    "2019-04": (1, 1, 4),
    "2019-05": (0, 2, 4),
    "2019-06": (1, 1, 3),
    "2019-07": (0, 2, 3),
    "2019-08": (1, 1, 1),
    "2019-09": (0, 2, 4),
    "2019-10": (1, 2, 2),
    "2019-11": (13, 4, 14),
    "2019-12": (1, 5, 18),
    "2020-01": (0, 2, 4),
}

# eleven wishes around Christmas and New Year's Eve, planned in November
_HOLIDAY_WISHES: list[tuple[str, date]] = [
    ("w01", date(2019, 12, 24)),
    ("w02", date(2019, 12, 24)),
    ("w03", date(2019, 12, 24)),
    ("w04", date(2019, 12, 24)),
    ("w05", date(2019, 12, 25)),
    ("w06", date(2019, 12, 25)),
    ("w07", date(2019, 12, 25)),
    ("w01", date(2019, 12, 31)),
    ("w02", date(2019, 12, 31)),
    ("w07", date(2019, 12, 31)),
    ("w08", date(2019, 12, 31)),
]

# in November the new leader typed some wishes in through her own interface;
# that is how one worker ended up with ten in a single month
_PLANNER_ENTERED_NOV = 5  # w01's wishes beyond the quota of five

MONTHS = [
    "2019-03", "2019-04", "2019-05", "2019-06", "2019-07", "2019-08",
    "2019-09", "2019-10", "2019-11", "2019-12", "2020-01",
]

_QUOTA_BEFORE_MAY = 3  # raised to five after the first evaluation round


def study_roster() -> Roster:
    records = []
    for i in range(1, 17):
        wid = f"w{i:02d}"
        records.append(
            {
                "worker_id": wid,
                "name": _NAMES[i - 1],
                "qualification": (
                    "certified_nurse" if i in (1, 4, 7, 10, 11, 14)
                    else "one_year_apprenticeship" if i in (2, 12)
                    else "apprentice" if i == 16
                    else "aide"
                ),
                "is_leader": wid in (OLD_LEADER, NEW_LEADER),
                "contract_hours_per_week": 19.25 if i == 13 else 38.5,
                "weekend_anchor": "2019-03-02" if i % 2 == 1 else "2019-03-09",
                "max_consecutive_days": 4 if i == 3 else 7 if i == 5 else 5,
                "shift_preference": "morning" if i % 3 == 0 else
                                    "afternoon" if i % 3 == 1 else "none",
            }
        )
    return build_roster(records)


def study_config(quota: int = 5) -> SystemConfig:
    return SystemConfig(wish_quota=quota, priority_enabled=False)


def _weekdays(month: Month) -> list[date]:
    return [d for d in month.days() if d.isoweekday() < 6]


def build_study_service(log_path: str | Path | None = None) -> PlanningService:
    """Replay the whole study period through the real command handlers."""
    roster = study_roster()
    service = PlanningService(roster, study_config(_QUOTA_BEFORE_MAY), EventLog(log_path))
    planner = Actor(NEW_LEADER, "planner")
    worker_ids = sorted(_MATRIX)

    for month_key in MONTHS:
        month = Month.parse(month_key)
        if month_key == "2019-05":
            service.config = replace(service.config, wish_quota=5)
        open_day = month.first_day() - timedelta(days=28)
        opener = OLD_LEADER if month_key < "2019-11" else NEW_LEADER
        service.open_cycle(
            Actor(opener, "planner"), month,
            at=f"{open_day.isoformat()}T08:00:00Z",
        )

        entries: list[tuple[str, date | None]] = []
        if month_key == "2019-12":
            entries.extend(_HOLIDAY_WISHES)
        for wid in worker_ids:
            count = _MATRIX[wid].get(month_key, 0)
            if month_key == "2019-12":
                count -= sum(1 for w, _ in _HOLIDAY_WISHES if w == wid)
            entries.extend((wid, None) for _ in range(count))

        morning_n, afternoon_n, whole_n = _SCOPES[month_key]
        pinned = sum(1 for _, d in entries if d is not None)
        scopes = (
            [WishScope.WHOLE_DAY] * pinned
            + [WishScope.MORNING] * morning_n
            + [WishScope.AFTERNOON] * afternoon_n
            + [WishScope.WHOLE_DAY] * (whole_n - pinned)
        )
        assert len(scopes) == len(entries)

        weekdays = _weekdays(month)
        used: dict[str, set[date]] = {}
        per_worker_seq: dict[str, int] = {}
        minute = 0
        for (wid, pinned_day), scope in zip(entries, scopes):
            taken = used.setdefault(wid, set())
            if pinned_day is not None:
                day = pinned_day
            else:
                k = worker_ids.index(wid)
                j = per_worker_seq.get(wid, 0)
                idx = (2 * k + 5 * j) % len(weekdays)
                while weekdays[idx] in taken:
                    idx = (idx + 1) % len(weekdays)
                day = weekdays[idx]
                per_worker_seq[wid] = j + 1
            taken.add(day)

            stamp = (
                f"{open_day.isoformat()}T{9 + minute // 60:02d}:{minute % 60:02d}:00Z"
            )
            minute += 7
            planner_entered = (
                month_key == "2019-11"
                and wid == "w01"
                and _worker_wish_count(service, month_key, wid) >= 5
            )
            if planner_entered:
                service.submit_wish(
                    planner, month, day, scope, worker_id=wid, at=stamp
                )
            else:
                service.submit_wish(Actor(wid), month, day, scope, at=stamp)
    return service


def _worker_wish_count(service: PlanningService, month_key: str, worker_id: str) -> int:
    return sum(1 for w in service.cycle_wishes(month_key) if w.worker_id == worker_id)


def roster_csv() -> str:
    buf = StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["worker_id", "name", "qualification", "is_leader", "contract_hours_per_week",
         "weekend_anchor", "max_consecutive_days", "shift_preference"]
    )
    for w in study_roster():
        writer.writerow(
            [w.worker_id, w.display_name, w.qualification.value,
             str(w.is_leader).lower(), w.contract_hours_per_week,
             w.weekend_parity_anchor.isoformat(), w.max_consecutive_days,
             w.shift_preference]
        )
    return buf.getvalue()


def bundled_fixture_path() -> Path:
    return Path(__file__).parent / "data" / "study_fixture.jsonl"


def write_study_fixture(path: str | Path | None = None) -> Path:
    target = Path(path) if path is not None else bundled_fixture_path()
    target.parent.mkdir(parents=True, exist_ok=True)
    service = build_study_service()
    write_log(service.log, target)
    (target.parent / "study_roster.csv").write_text(roster_csv(), encoding="utf-8")
    return target


if __name__ == "__main__":
    import sys

    out = write_study_fixture(sys.argv[1] if len(sys.argv) > 1 else None)
    print(f"wrote {out}")
