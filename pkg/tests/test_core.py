import random
from datetime import date, timedelta

import pytest

from conftest import ANCHOR_EVEN, ANCHOR_ODD, alternating_roster, make_worker
from shiftwish.core import (
    AnchorNotSaturday,
    DuplicateWorkerId,
    InvalidMonth,
    Month,
    NegativeHours,
    Shift,
    ShiftSlot,
    SystemConfig,
    WeekendStatus,
    build_roster,
    load_roster_csv,
    month_grid,
    weekend_status,
)


class TestBuildRoster:
    def test_fifteen_valid_records(self):
        records = [
            {
                "worker_id": f"w{i}",
                "name": f"Worker {i}",
                "qualification": "aide",
                "contract_hours_per_week": 30,
                "weekend_anchor": "2019-03-02",
            }
            for i in range(15)
        ]
        assert len(build_roster(records)) == 15

    def test_empty_list_is_valid(self):
        assert len(build_roster([])) == 0

    def test_duplicate_worker_id(self):
        rec = {
            "worker_id": "w3",
            "qualification": "aide",
            "contract_hours_per_week": 30,
            "weekend_anchor": "2019-03-02",
        }
        with pytest.raises(DuplicateWorkerId):
            build_roster([rec, dict(rec)])

    def test_anchor_must_be_saturday(self):
        with pytest.raises(AnchorNotSaturday):
            make_worker("w1", anchor=date(2019, 3, 3))  # a Sunday

    def test_negative_hours(self):
        with pytest.raises(NegativeHours):
            make_worker("w1", hours=-1)

    def test_validation_is_total(self):
        # every record list either builds or raises; no partial rosters escape
        rng = random.Random(7)
        for _ in range(50):
            records = []
            for i in range(rng.randint(0, 6)):
                records.append(
                    {
                        "worker_id": f"w{rng.randint(0, 3)}",
                        "qualification": "aide",
                        "contract_hours_per_week": rng.choice([30, -5]),
                        "weekend_anchor": rng.choice(["2019-03-02", "2019-03-04"]),
                    }
                )
            try:
                roster = build_roster(records)
            except (DuplicateWorkerId, AnchorNotSaturday, NegativeHours):
                continue
            assert len(roster) == len(records)


class TestWeekendStatus:
    def test_anchor_weekend_is_work(self):
        w = make_worker("w1", anchor=date(2019, 3, 2))
        assert weekend_status(w, date(2019, 3, 2)) is WeekendStatus.WORK_WEEKEND

    def test_next_weekend_is_free(self):
        w = make_worker("w1", anchor=date(2019, 3, 2))
        assert weekend_status(w, date(2019, 3, 9)) is WeekendStatus.FREE_WEEKEND

    def test_wednesday_is_weekday(self):
        w = make_worker("w1", anchor=date(2019, 3, 2))
        assert weekend_status(w, date(2019, 3, 6)) is WeekendStatus.WEEKDAY

    def test_alternation_property(self):
        # consecutive weekends always differ, before and after the anchor
        rng = random.Random(11)
        for _ in range(200):
            anchor = ANCHOR_EVEN + timedelta(weeks=rng.randint(-100, 100))
            w = make_worker("w1", anchor=anchor)
            sat = anchor + timedelta(weeks=rng.randint(-150, 150))
            this = weekend_status(w, sat)
            nxt = weekend_status(w, sat + timedelta(weeks=1))
            assert {this, nxt} == {WeekendStatus.WORK_WEEKEND, WeekendStatus.FREE_WEEKEND}

    def test_saturday_sunday_coherence(self):
        rng = random.Random(13)
        for _ in range(200):
            w = make_worker("w1", anchor=rng.choice([ANCHOR_EVEN, ANCHOR_ODD]))
            sat = ANCHOR_EVEN + timedelta(weeks=rng.randint(-150, 150))
            assert weekend_status(w, sat) == weekend_status(w, sat + timedelta(days=1))


class TestMonthGrid:
    def test_november_has_30_flagged_days(self):
        grid = month_grid(Month(2019, 11))
        assert len(grid.days) == 30
        for day, is_weekend, _ in grid.days:
            assert is_weekend == (day.isoweekday() >= 6)

    def test_holiday_flag_pass_through(self):
        grid = month_grid(Month(2019, 12), holiday_calendar=[date(2019, 12, 25)])
        flagged = [d for d, _, holiday in grid.days if holiday]
        assert flagged == [date(2019, 12, 25)]

    def test_month_13_invalid(self):
        with pytest.raises(InvalidMonth):
            Month(2019, 13)
        with pytest.raises(InvalidMonth):
            month_grid("2019-13")


class TestSlotAndConfig:
    def test_slot_ordering_morning_first(self):
        a = ShiftSlot(date(2019, 3, 5), Shift.AFTERNOON)
        m = ShiftSlot(date(2019, 3, 5), Shift.MORNING)
        assert sorted([a, m], key=lambda s: s.sort_key) == [m, a]

    def test_slot_key_round_trip(self):
        slot = ShiftSlot(date(2019, 3, 5), Shift.AFTERNOON)
        assert ShiftSlot.from_key(slot.key()) == slot

    def test_default_shift_lengths(self):
        cfg = SystemConfig()
        assert cfg.shift_hours(Shift.MORNING) == 8.0
        assert cfg.shift_hours(Shift.AFTERNOON) == 8.0

    def test_min_certified_cannot_exceed_min_staff(self):
        with pytest.raises(ValueError):
            SystemConfig(
                min_staff={Shift.MORNING: 1, Shift.AFTERNOON: 1},
                min_certified={Shift.MORNING: 2, Shift.AFTERNOON: 0},
            )

    def test_quota_lower_bound(self):
        with pytest.raises(ValueError):
            SystemConfig(wish_quota=0)


class TestRosterCsv:
    def test_import_with_absences(self, tmp_path):
        roster_file = tmp_path / "roster.csv"
        roster_file.write_text(
            "worker_id,name,qualification,is_leader,contract_hours_per_week,"
            "weekend_anchor,max_consecutive_days,shift_preference\n"
            "w1,Anna,certified_nurse,true,38.5,2019-03-02,5,morning\n"
            "w2,Ben,aide,false,30,2019-03-09,4,none\n",
            encoding="utf-8",
        )
        absence_file = tmp_path / "absences.csv"
        absence_file.write_text(
            "worker_id,date,reason\nw2,2019-03-11,vacation\n", encoding="utf-8"
        )
        roster = load_roster_csv(roster_file, absence_file)
        assert roster.get("w1").is_leader
        assert roster.get("w1").shift_preference == "morning"
        assert roster.get("w2").absent_on(date(2019, 3, 11))
        assert not roster.get("w2").absent_on(date(2019, 3, 12))

    def test_missing_column_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("worker_id,name\nw1,Anna\n", encoding="utf-8")
        with pytest.raises(Exception):
            load_roster_csv(bad)

    def test_parity_mix_in_helper(self):
        roster = alternating_roster(6, certified=3)
        statuses = {
            weekend_status(w, date(2019, 3, 2)).value for w in roster
        }
        assert statuses == {"work_weekend", "free_weekend"}
