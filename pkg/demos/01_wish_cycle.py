"""
Submitting wishes for free shifts
=================================

A team opens a planning month and workers ask for the free shifts they
need: a whole day for a wedding, an afternoon for a doctor's appointment.
The system enforces the quota and the weekend rules, and never asks why.
"""

from datetime import date

from shiftwish import Actor, PlanningService, SystemConfig
from shiftwish.fixture import study_roster

service = PlanningService(study_roster(), SystemConfig())
planner = Actor("w11", "planner")

# the cycle for March opens four weeks ahead; the plan is due two weeks ahead
cycle = service.open_cycle(planner, "2019-03")
print(f"March cycle open, release due {cycle.release_date}, quota {cycle.quota}")

# a worker wishes a whole free day on a weekday
wish = service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 14), "whole_day")
print(f"w03 wished {wish.date} {wish.scope.value}: {wish.status.value}")

# on a work weekend only part-day wishes are possible (w03 works Mar 2)
try:
    service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 2), "whole_day")
except Exception as err:
    print(f"whole day on a work Saturday: {type(err).__name__}")
service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 2), "morning")
print("a free morning on the work Saturday is fine")

# a free weekend is already free; wishing there is a mistake
try:
    service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 9), "morning")
except Exception as err:
    print(f"wish on own free weekend: {type(err).__name__}")

# the quota stops the sixth wish...
for day in (18, 19, 20):
    service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, day), "afternoon")
try:
    service.submit_wish(Actor("w03"), "2019-03", date(2019, 3, 21), "morning")
except Exception as err:
    print(f"sixth wish: {type(err).__name__}")

# ...but the planner can enter one on a worker's behalf when needed
extra = service.submit_wish(
    planner, "2019-03", date(2019, 3, 21), "morning", worker_id="w03"
)
print(f"planner-entered wish: origin={extra.origin.value}")

# the safe-harbor calendar shows counts to everyone, details only to the owner
calendar = service.calendar_view(Actor("w05"), "2019-03")
busy = [d for d in calendar["days"] if d["wish_count"]]
print(f"calendar shows wishes on {len(busy)} days; w05 sees no names, only counts")
