"""
Conflicts and the people who resolve them
=========================================

When too many wishes land on the same thin day, nobody's wish is refused
automatically. The involved workers are shown who else is in the conflict
and every minimal combination of withdrawals that would resolve it; one of
them steps back (the "conflict hero") or they talk it out face to face.
"""

from datetime import date

from shiftwish import Actor, PlanningService, Shift, SystemConfig
from shiftwish.core import AbsenceReason, with_absences
from shiftwish.fixture import study_roster

config = SystemConfig(
    min_staff={Shift.MORNING: 5, Shift.AFTERNOON: 5},
    min_certified={Shift.MORNING: 1, Shift.AFTERNOON: 1},
)

# mid-June: five colleagues are on summer vacation that Friday
friday = date(2019, 6, 14)
roster = with_absences(
    study_roster(),
    {
        wid: [(friday, AbsenceReason.VACATION)]
        for wid in ("w12", "w13", "w14", "w15", "w16")
    },
)
service = PlanningService(roster, config)
planner = Actor("w11", "planner")
service.open_cycle(planner, "2019-06")

# and the same Friday gets very popular
for worker in ("w01", "w02", "w03", "w04", "w05", "w06", "w07"):
    service.submit_wish(Actor(worker), "2019-06", friday, "whole_day")

conflicts = service.conflicts("2019-06")
print(f"{len(conflicts)} conflict(s) detected")
conflict = conflicts[0]
for d in conflict.deficient_slots:
    print(f"  {d.slot.key()}: short {d.staff_deficit} staff")
print(f"  involved wishes: {len(conflict.involved_wishes)}")
print(f"  possible solutions: {len(conflict.solutions)} (all minimal)")
print(f"  smallest solution size: {len(conflict.solutions[0])}")

# only involved workers are notified; a bystander sees nothing
print("w08 sees:", service.conflicts_visible_to(Actor("w08"), "2019-06"))
views = service.conflict_views(Actor("w01"), "2019-06")
print(f"w01 sees colleagues: {', '.join(views[0].colleagues)}")

# one hero withdraws and the conflict dissolves on re-evaluation
hero_wish = next(
    w for w in service.cycle_wishes("2019-06") if w.worker_id == "w01" and w.live
)
service.withdraw_wish(Actor("w01"), hero_wish.wish_id)
remaining = service.conflicts("2019-06")
print(f"after one withdrawal: {len(remaining)} conflict(s)")

# understaffing nobody can fix by withdrawing (say, sickness) is marked
# for escalation instead: those days need resources beyond this team
