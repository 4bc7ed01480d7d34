"""
Finalizing the month and living with it
=======================================

The planner auto-fills a legal schedule around the honored wishes, may
override single slots (a collision with a wish warns, never silently), and
releases. After release the schedule changes only through swaps, stand-ins
and audited overrides; everyone's hours stay correctly counted.
"""

from datetime import date

from shiftwish import Actor, PlanningService, SystemConfig
from shiftwish.export import ical_export, schedule_matrix_csv
from shiftwish.fixture import study_roster

service = PlanningService(study_roster(), SystemConfig())
planner = Actor("w11", "planner")
service.open_cycle(planner, "2019-03")
wish = service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 14), "whole_day")

draft = service.autofill(planner, "2019-03")
print(f"draft built, soft penalty {draft.soft_penalty:.1f}")
free_day = [s for s in draft.assignment if s.date == wish.date and "w03" in draft.assignment[s]]
print(f"w03 assignments on the wished day: {free_day}")

released = service.release(planner, "2019-03", as_of=date(2019, 2, 14))
print(f"released on {released.released_on} (late: {released.late})")
print(f"granted wishes: {sorted(released.granted_wish_ids)}")
print(f"w03's wish is now: {service.wishes[wish.wish_id].status.value}")

# everyone rushes to the new schedule
matrix = schedule_matrix_csv(released, service.roster)
print("matrix preview:")
for line in matrix.splitlines()[:4]:
    print("  " + line[:72] + ("..." if len(line) > 72 else ""))

# one worker takes her calendar along
ics = ical_export(released, "w03", service.roster, service.ruleset("2019-03"))
print(f"w03.ics: {ics.count('BEGIN:VEVENT')} events")

# short-notice change: someone calls in sick, a colleague stands in
slot = released.slots_of("w05")[3]
for candidate in service.roster:
    if candidate.worker_id in released.assignment[slot] or candidate.worker_id == "w05":
        continue
    try:
        stand_in = service.record_stand_in(
            planner, "2019-03", "w05", candidate.worker_id, slot
        )
    except Exception:
        continue
    print(f"{stand_in.volunteer} stands in for w05 on {slot.key()}"
          f" (kudos now {service.kudos[stand_in.volunteer]})")
    break

# the hours ledger follows every change
for worker_id in ("w03", "w05", stand_in.volunteer):
    hours = service.hours_for(worker_id, "2019-03")
    print(f"{worker_id}: {hours.assigned_hours:.1f}h of {hours.target_hours:.1f}h"
          f" ({hours.delta:+.1f})")

# group-level fairness stays visible to the planner
report = service.fairness()
print(f"free weekends per worker: {dict(sorted(report.free_weekends.items()))}")
print(f"spread {report.spread}, flagged: {list(report.flagged) or 'nobody'}")
