"""
Reading the usage statistics
============================

The bundled study fixture replays a nine-month deployment through the real
command handlers: 105 wishes by 11 of 16 team members, a November spike
driven by planner-entered wishes, and a December peak around the holidays.
The per-wish dates are synthetic; the aggregates are the point.
"""

from shiftwish.events import EventLog
from shiftwish.fixture import bundled_fixture_path, study_config, study_roster
from shiftwish.service import PlanningService
from shiftwish.stats import stats_report

log = EventLog(bundled_fixture_path())
report = stats_report(log)

print(f"total wishes: {report.total_wishes} by {report.distinct_workers} workers")
print(f"scopes: {report.scope_breakdown}")
print("per month:")
for month, count in sorted(report.wishes_per_month.items()):
    bar = "#" * count
    print(f"  {month}  {count:>3}  {bar}")
print(f"most active worker: {report.max_per_worker} wishes")

november_free = stats_report(log, exclude_months=("2019-11",))
print(f"excluding November: {november_free.total_wishes} "
      f"({november_free.scope_breakdown})")

# the log replays into a full service snapshot
service = PlanningService(study_roster(), study_config(), log)
print(f"replayed into {len(service.cycles)} cycles, {len(service.wishes)} wishes")
quiet = service.workers_without_wishes("2020-01")
print(f"never wished in January: {', '.join(quiet)} (the leader may want to nudge)")
