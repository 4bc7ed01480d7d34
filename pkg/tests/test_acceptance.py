"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they pass.
"""

import random
import sys
import time
from contextlib import contextmanager
from datetime import date

import pytest

from conftest import alternating_roster
from generators import random_fill_instance, random_instance
from oracles import oracle_components, oracle_feasible, oracle_minimal_withdrawals
from shiftwish.conflicts import conflicts_visible_to, detect_conflicts
from shiftwish.core import Month, Shift, ShiftSlot, SystemConfig, christmas_new_year_pair
from shiftwish.events import parse_log, read_log
from shiftwish.finalize import ScheduleDraft, autofill, validate_draft
from shiftwish.fixture import build_study_service, bundled_fixture_path, study_config, study_roster
from shiftwish.rules import (
    HolidayLedger,
    RuleSet,
    ViolationKind,
    reciprocity_check,
    rest_check,
)
from shiftwish.service import Actor, PlanningService
from shiftwish.stats import stats_report
from shiftwish.workflow import FreeWeekend, WholeDayOnWeekend, WishOrigin

MARCH = Month(2019, 3)


@contextmanager
def criterion(name, max_seconds=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL", file=sys.stderr, flush=True)
        raise
    elapsed = time.perf_counter() - start
    if max_seconds is not None and elapsed >= max_seconds:
        print(f"[acceptance] {name}: FAIL (took {elapsed:.2f}s)", file=sys.stderr, flush=True)
        raise AssertionError(f"{name} must finish in {max_seconds}s, took {elapsed:.2f}s")
    print(f"[acceptance] {name}: PASS ({elapsed:.1f}s)", flush=True)


class TestConflictOracleEquivalence:
    def test_500_randomized_instances(self):
        with criterion("conflict oracle equivalence, 500 instances"):
            rng = random.Random(20190302)
            start = time.perf_counter()
            instances = 0
            conflicts_seen = 0
            while instances < 500:
                roster, wishes, rules, _ = random_instance(
                    rng, max_workers=8, max_days=14, max_wishes=10
                )
                live = [w for w in wishes if w.live]
                engine = detect_conflicts(MARCH, roster, wishes, rules, solution_cap=10_000)
                rerun = detect_conflicts(MARCH, roster, wishes, rules, solution_cap=10_000)
                assert [(c.conflict_id, c.solutions) for c in engine] == [
                    (c.conflict_id, c.solutions) for c in rerun
                ], "detection must be deterministic"

                deficits, components = oracle_components(MARCH, roster, live, rules)
                engine_slots = {
                    d.slot: (d.staff_deficit, d.certified_deficit)
                    for c in engine
                    for d in c.deficient_slots
                }
                assert engine_slots == deficits, "deficient slots disagree with recount"
                assert len(engine) == len(components), "conflict grouping disagrees"

                for conflict, component in zip(engine, components):
                    assert [d.slot for d in conflict.deficient_slots] == component
                    minimal, involved = oracle_minimal_withdrawals(
                        component, deficits, roster, live, rules
                    )
                    assert set(conflict.involved_wishes) == set(involved)
                    if minimal is None:
                        assert conflict.escalation_required
                        assert conflict.solutions == ()
                    else:
                        assert [set(s) for s in conflict.solutions] == [
                            set(s) for s in minimal
                        ], "withdrawal sets disagree with the brute-force oracle"
                        conflicts_seen += 1
                instances += 1
            elapsed = time.perf_counter() - start
            assert elapsed < 60.0, f"criterion demands < 60 s, took {elapsed:.1f}"
            assert conflicts_seen > 50, "generator produced too few real conflicts"


class TestAutofillFeasibilityAgreement:
    def test_200_randomized_instances(self):
        with criterion("autofill feasibility agreement, 200 instances"):
            rng = random.Random(4520)
            feasible_count = 0
            for _ in range(200):
                roster, wishes, rules, days, month = random_fill_instance(
                    rng, max_workers=5, num_days=7
                )
                result = autofill(month, roster, rules, wishes, days=days)
                oracle_says = oracle_feasible(days, roster, rules, wishes)
                if isinstance(result, ScheduleDraft):
                    assert oracle_says, "engine filled an instance the oracle rejects"
                    report = validate_draft(result, roster, rules, wishes)
                    assert report.hard_violations == (), "success output must validate clean"
                    feasible_count += 1
                else:
                    assert not result.budget_exhausted, "budget must not bind at this size"
                    assert not oracle_says, "engine missed a feasible instance"
            assert 20 < feasible_count < 200, "mix of feasible and infeasible expected"


class TestPaperStatisticsFixture:
    def test_bundled_fixture_reproduces_published_aggregates(self):
        with criterion("paper-statistics fixture"):
            events = read_log(bundled_fixture_path())
            report = stats_report(events)
            assert report.total_wishes == 105
            assert report.distinct_workers == 11
            assert report.scope_breakdown == {
                "morning": 19,
                "afternoon": 24,
                "whole_day": 62,
            }
            november_free = stats_report(events, exclude_months=("2019-11",))
            assert november_free.total_wishes == 74
            assert november_free.scope_breakdown == {
                "morning": 6,
                "afternoon": 20,
                "whole_day": 48,
            }
            assert report.max_per_worker == 26
            assert report.wishes_per_month["2019-11"] == 31
            assert report.wishes_per_month["2019-12"] == 24


class TestRulePropertySuite:
    def test_quota_invariant(self):
        with criterion("rule suite: quota invariant", max_seconds=1.0):
            rng = random.Random(41)
            svc = PlanningService(alternating_roster(6), SystemConfig())
            svc.open_cycle(Actor("w00", "planner"), "2019-03", at="2019-02-01T08:00:00Z")
            for _ in range(150):
                worker = f"w{rng.randint(0, 5):02d}"
                try:
                    svc.submit_wish(
                        Actor(worker),
                        "2019-03",
                        date(2019, 3, rng.randint(1, 31)),
                        rng.choice(["morning", "afternoon", "whole_day"]),
                    )
                except Exception:
                    pass
                for w in svc.roster:
                    live = [
                        x
                        for x in svc.wishes.values()
                        if x.worker_id == w.worker_id
                        and x.live
                        and x.origin is WishOrigin.WORKER
                    ]
                    assert len(live) <= svc.config.wish_quota

    def test_weekend_parity_rejection(self):
        with criterion("rule suite: free-weekend wish rejected", max_seconds=1.0):
            svc = PlanningService(alternating_roster(4), SystemConfig())
            svc.open_cycle(Actor("w00", "planner"), "2019-03", at="2019-02-01T08:00:00Z")
            with pytest.raises(FreeWeekend):
                svc.submit_wish(Actor("w01"), "2019-03", date(2019, 3, 2), "morning")

    def test_whole_day_on_weekend_rejection(self):
        with criterion("rule suite: whole-day weekend wish rejected", max_seconds=1.0):
            svc = PlanningService(alternating_roster(4), SystemConfig())
            svc.open_cycle(Actor("w00", "planner"), "2019-03", at="2019-02-01T08:00:00Z")
            with pytest.raises(WholeDayOnWeekend):
                svc.submit_wish(Actor("w01"), "2019-03", date(2019, 3, 9), "whole_day")

    def test_eleven_hour_rest_on_evening_to_morning(self):
        with criterion("rule suite: 21:30 to 06:00 rest violation", max_seconds=1.0):
            rules = RuleSet.from_config(SystemConfig())
            violations = rest_check(
                [
                    ShiftSlot(date(2019, 3, 5), Shift.AFTERNOON),
                    ShiftSlot(date(2019, 3, 6), Shift.MORNING),
                ],
                rules,
            )
            assert len(violations) == 1
            assert violations[0].kind is ViolationKind.REST
            assert "8.5h" in violations[0].detail

    def test_holiday_reciprocity_violation_detection(self):
        with criterion("rule suite: holiday reciprocity violation", max_seconds=1.0):
            from dataclasses import replace

            rules = replace(
                RuleSet.from_config(SystemConfig()),
                reciprocity_enabled=True,
                holiday_pairs=(christmas_new_year_pair(2019),),
            )
            ledger = HolidayLedger()
            ledger.mark("w1", date(2019, 12, 25), rules.holiday_pairs)
            violations = reciprocity_check(
                ledger,
                {ShiftSlot(date(2020, 1, 1), Shift.MORNING): {"w1"}},
                rules,
            )
            assert [v.kind for v in violations] == [ViolationKind.RECIPROCITY]

    def test_event_log_replay_determinism(self):
        with criterion("rule suite: event-log replay determinism", max_seconds=1.0):
            svc = build_study_service()
            twin = PlanningService(study_roster(), study_config())
            for event in parse_log(svc.log.dump()):
                twin.log.append(event)
                twin._apply(event)
            assert twin.log.dump() == svc.log.dump()
            assert {k: v.wish_ids for k, v in twin.cycles.items()} == {
                k: v.wish_ids for k, v in svc.cycles.items()
            }
            assert {k: w.status for k, w in twin.wishes.items()} == {
                k: w.status for k, w in svc.wishes.items()
            }


class TestConflictVisibilityPrivacy:
    def test_randomized_trials_never_leak(self):
        with criterion("conflict-visibility privacy, randomized"):
            rng = random.Random(7777)
            trials = 0
            leaks_possible = 0
            for _ in range(120):
                roster, wishes, rules, _ = random_instance(
                    rng, max_workers=8, max_days=14, max_wishes=10
                )
                by_id = {w.wish_id: w for w in wishes}
                conflicts = detect_conflicts(MARCH, roster, wishes, rules)
                if conflicts:
                    leaks_possible += 1
                for worker in roster:
                    own = {w.wish_id for w in wishes if w.worker_id == worker.worker_id}
                    visible = conflicts_visible_to(conflicts, by_id, worker.worker_id)
                    for c in visible:
                        assert own & set(c.involved_wishes), (
                            "a worker was served a conflict they are not involved in"
                        )
                    for c in conflicts:
                        if not (own & set(c.involved_wishes)):
                            assert c not in visible
                    trials += 1
            assert trials >= 500
            assert leaks_possible > 30, "too few conflicts generated to be meaningful"
