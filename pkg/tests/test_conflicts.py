import random
from datetime import date

import pytest

from conftest import make_worker
from generators import random_instance
from oracles import oracle_components, oracle_minimal_withdrawals
from shiftwish.conflicts import (
    EmptyConflict,
    conflict_view,
    conflicts_visible_to,
    detect_conflicts,
    enumerate_solutions,
)
from shiftwish.core import (
    Month,
    Shift,
    SystemConfig,
    WishScope,
    build_roster,
)
from shiftwish.rules import RuleSet
from shiftwish.workflow import Wish

MARCH = Month(2019, 3)


def rules_for(min_staff_m=2, min_staff_a=2, cert_m=1, cert_a=1) -> RuleSet:
    return RuleSet.from_config(
        SystemConfig(
            min_staff={Shift.MORNING: min_staff_m, Shift.AFTERNOON: min_staff_a},
            min_certified={Shift.MORNING: cert_m, Shift.AFTERNOON: cert_a},
        )
    )


def certified_roster(n):
    # same parity anchor everywhere is fine when staffing mins are low
    return build_roster([make_worker(f"w{i}") for i in range(n)])


class TestDetect:
    def test_no_wishes_no_conflicts(self):
        from conftest import alternating_roster

        roster = alternating_roster(4, certified=4)
        assert detect_conflicts(MARCH, roster, [], rules_for(1, 1, 0, 0)) == []

    def test_two_whole_day_wishes_same_tuesday(self):
        roster = certified_roster(3)
        wishes = [
            Wish("a", "w0", date(2019, 3, 5), WishScope.WHOLE_DAY),
            Wish("b", "w1", date(2019, 3, 5), WishScope.WHOLE_DAY),
        ]
        found = [
            c
            for c in detect_conflicts(MARCH, roster, wishes, rules_for())
            if c.involved_wishes
        ]
        assert len(found) == 1
        conflict = found[0]
        assert [(d.staff_deficit, d.certified_deficit) for d in conflict.deficient_slots] == [
            (1, 0),
            (1, 0),
        ]
        assert conflict.involved_wishes == ("a", "b")
        assert [set(s) for s in conflict.solutions] == [{"a"}, {"b"}]

    def test_certified_only_withdrawal_restores(self):
        roster = build_roster(
            [
                make_worker("C1"),
                make_worker("A1", qualification="aide"),
                make_worker("A2", qualification="aide"),
                make_worker("A3", qualification="aide"),
            ]
        )
        wishes = [
            Wish("c", "C1", date(2019, 3, 6), WishScope.MORNING),
            Wish("d", "A1", date(2019, 3, 6), WishScope.MORNING),
        ]
        found = detect_conflicts(MARCH, roster, wishes, rules_for())
        target = [c for c in found if c.deficient_slots[0].slot.date == date(2019, 3, 6)]
        assert [set(s) for s in target[0].solutions] == [{"c"}]
        # the aide's wish still covers the deficient slot, so A1 is involved
        assert set(target[0].involved_wishes) == {"c", "d"}

    def test_sickness_only_conflict_has_no_solution(self):
        absences = {(date(2019, 3, 5), "sick")}
        roster = build_roster(
            [
                make_worker("w0", absences={(date(2019, 3, 5), _reason("sick"))}),
                make_worker("w1"),
            ]
        )
        conflicts = detect_conflicts(MARCH, roster, [], rules_for(2, 2, 0, 0))
        sick_day = [c for c in conflicts if c.deficient_slots[0].slot.date == date(2019, 3, 5)]
        assert sick_day and sick_day[0].escalation_required
        assert sick_day[0].solutions == ()

    def test_withdrawal_dissolves_conflict(self):
        roster = certified_roster(3)
        wishes = [
            Wish("a", "w0", date(2019, 3, 5), WishScope.WHOLE_DAY),
            Wish("b", "w1", date(2019, 3, 5), WishScope.WHOLE_DAY),
        ]
        before = detect_conflicts(MARCH, roster, wishes, rules_for())
        assert any(c.involved_wishes for c in before)
        wishes[0].status = _withdrawn()
        after = detect_conflicts(MARCH, roster, wishes, rules_for())
        assert not any(c.involved_wishes for c in after)

    def test_deterministic_ids_and_order(self):
        rng = random.Random(99)
        for _ in range(20):
            roster, wishes, rules, _ = random_instance(rng, max_workers=5, max_wishes=6)
            first = detect_conflicts(MARCH, roster, wishes, rules)
            second = detect_conflicts(MARCH, roster, wishes, rules)
            assert [c.conflict_id for c in first] == [c.conflict_id for c in second]
            assert [c.solutions for c in first] == [c.solutions for c in second]


def _reason(value):
    from shiftwish.core import AbsenceReason

    return AbsenceReason(value)


def _withdrawn():
    from shiftwish.workflow import WishStatus

    return WishStatus.WITHDRAWN


class TestEnumerate:
    def test_three_overlapping_part_day_wishes(self):
        roster = certified_roster(3)
        wishes = {
            "a": Wish("a", "w0", date(2019, 3, 5), WishScope.MORNING),
            "b": Wish("b", "w1", date(2019, 3, 5), WishScope.MORNING),
            "c": Wish("c", "w2", date(2019, 3, 5), WishScope.MORNING),
        }
        rules = rules_for(min_staff_m=1, min_staff_a=1, cert_m=0, cert_a=0)
        conflicts = detect_conflicts(MARCH, roster, list(wishes.values()), rules)
        target = [c for c in conflicts if c.deficient_slots[0].slot.date == date(2019, 3, 5)]
        # deficit 1: three singletons, no pairs
        assert [set(s) for s in target[0].solutions] == [{"a"}, {"b"}, {"c"}]

    def test_whole_day_wish_spanning_two_slots(self):
        roster = certified_roster(2)
        wishes = [
            Wish("whole", "w0", date(2019, 3, 5), WishScope.WHOLE_DAY),
            Wish("part_m", "w1", date(2019, 3, 5), WishScope.MORNING),
            Wish("part_a", "w1", date(2019, 3, 5), WishScope.AFTERNOON),
        ]
        rules = rules_for(min_staff_m=1, min_staff_a=1, cert_m=0, cert_a=0)
        conflicts = detect_conflicts(MARCH, roster, wishes, rules)
        target = [c for c in conflicts if c.deficient_slots[0].slot.date == date(2019, 3, 5)]
        assert len(target) == 1
        sets = [set(s) for s in target[0].solutions]
        assert {"whole"} in sets  # one singleton covering both slots
        assert {"part_m", "part_a"} in sets
        assert len(sets) == 2

    def test_empty_conflict_raises(self):
        roster = certified_roster(2)
        with pytest.raises(EmptyConflict):
            enumerate_solutions([], {}, roster, rules_for())

    def test_ordering_by_size_then_members(self):
        rng = random.Random(5)
        for _ in range(30):
            roster, wishes, rules, _ = random_instance(rng, max_workers=6, max_wishes=8)
            for conflict in detect_conflicts(MARCH, roster, wishes, rules):
                sizes = [len(s) for s in conflict.solutions]
                assert sizes == sorted(sizes)

    def test_truncation_flag(self):
        # nine singleton options with a cap of three
        roster = certified_roster(9)
        wishes = [
            Wish(f"x{i}", f"w{i}", date(2019, 3, 5), WishScope.MORNING) for i in range(9)
        ]
        rules = rules_for(min_staff_m=1, min_staff_a=0, cert_m=0, cert_a=0)
        conflicts = detect_conflicts(MARCH, roster, wishes, rules, solution_cap=3)
        target = [c for c in conflicts if c.deficient_slots[0].slot.date == date(2019, 3, 5)]
        assert target[0].truncated
        assert len(target[0].solutions) == 3


class TestOracleAgreement:
    def test_small_random_instances_match_brute_force(self):
        rng = random.Random(1234)
        for _ in range(60):
            roster, wishes, rules, _ = random_instance(
                rng, max_workers=6, max_days=10, max_wishes=8
            )
            live = [w for w in wishes if w.live]
            engine = detect_conflicts(MARCH, roster, wishes, rules, solution_cap=10_000)
            deficits, components = oracle_components(MARCH, roster, live, rules)

            engine_slots = {
                d.slot: (d.staff_deficit, d.certified_deficit)
                for c in engine
                for d in c.deficient_slots
            }
            assert engine_slots == deficits

            assert len(engine) == len(components)
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
                    assert [set(s) for s in conflict.solutions] == [set(s) for s in minimal]

    def test_soundness_of_returned_sets(self):
        rng = random.Random(777)
        checked = 0
        for _ in range(40):
            roster, wishes, rules, _ = random_instance(rng, max_workers=6, max_wishes=8)
            engine = detect_conflicts(MARCH, roster, wishes, rules)
            for conflict in engine:
                for solution in conflict.solutions[:3]:
                    slots_before = {d.slot for d in conflict.deficient_slots}
                    remaining = [w for w in wishes if w.live and w.wish_id not in solution]
                    after = detect_conflicts(MARCH, roster, remaining, rules)
                    after_slots = {d.slot for c in after for d in c.deficient_slots}
                    assert not (slots_before & after_slots)
                    checked += 1
        assert checked > 10

    def test_minimality_of_returned_sets(self):
        rng = random.Random(4242)
        checked = 0
        for _ in range(40):
            roster, wishes, rules, _ = random_instance(rng, max_workers=6, max_wishes=8)
            for conflict in detect_conflicts(MARCH, roster, wishes, rules):
                slots = {d.slot for d in conflict.deficient_slots}
                for solution in conflict.solutions[:3]:
                    for dropped in solution:
                        partial = solution - {dropped}
                        remaining = [
                            w for w in wishes if w.live and w.wish_id not in partial
                        ]
                        after = detect_conflicts(MARCH, roster, remaining, rules)
                        after_slots = {
                            d.slot for c in after for d in c.deficient_slots
                        }
                        assert slots & after_slots, "a proper subset already restores"
                        checked += 1
        assert checked > 10


class TestVisibility:
    def _conflicted(self):
        roster = certified_roster(3)
        wishes = {
            "a": Wish("a", "w0", date(2019, 3, 5), WishScope.WHOLE_DAY),
            "b": Wish("b", "w1", date(2019, 3, 5), WishScope.WHOLE_DAY),
        }
        conflicts = [
            c
            for c in detect_conflicts(MARCH, roster, list(wishes.values()), rules_for())
            if c.involved_wishes
        ]
        return roster, wishes, conflicts

    def test_worker_without_wishes_sees_nothing(self):
        roster, wishes, conflicts = self._conflicted()
        assert conflicts_visible_to(conflicts, wishes, "w2") == []

    def test_involved_worker_sees_conflict_with_names(self):
        roster, wishes, conflicts = self._conflicted()
        visible = conflicts_visible_to(conflicts, wishes, "w0")
        assert len(visible) == 1
        view = conflict_view(visible[0], wishes, roster)
        assert set(view.colleagues) == {"W0", "W1"}

    def test_planner_sees_all(self):
        roster, wishes, conflicts = self._conflicted()
        assert conflicts_visible_to(conflicts, wishes, None, planner=True) == conflicts

    def test_privacy_randomized(self):
        rng = random.Random(31337)
        for _ in range(40):
            roster, wishes, rules, _ = random_instance(rng, max_workers=6, max_wishes=8)
            by_id = {w.wish_id: w for w in wishes}
            conflicts = detect_conflicts(MARCH, roster, wishes, rules)
            for worker in roster:
                visible = conflicts_visible_to(conflicts, by_id, worker.worker_id)
                own = {w.wish_id for w in wishes if w.worker_id == worker.worker_id}
                for c in visible:
                    assert own & set(c.involved_wishes)
                hidden = [c for c in conflicts if c not in visible]
                for c in hidden:
                    assert not (own & set(c.involved_wishes))
