"""shiftwish: worker-centered self-scheduling for shift teams.

Workers submit wishes for free shifts under quota and calendar rules, the
conflict engine finds jointly ungrantable wishes and every minimal withdrawal
set that would resolve them, and the finalizer builds a legal monthly schedule
around the honored wishes with planner oversight.
"""

from .core import (
    AbsenceReason,
    Month,
    MonthGrid,
    Qualification,
    Roster,
    Shift,
    ShiftSlot,
    SystemConfig,
    WeekendStatus,
    Worker,
    WishScope,
    build_roster,
    christmas_new_year_pair,
    load_roster_csv,
    month_grid,
    weekend_status,
)
from .conflicts import (
    Conflict,
    DeficientSlot,
    EmptyConflict,
    NoSolution,
    conflicts_visible_to,
    detect_conflicts,
    enumerate_solutions,
)
from .events import CorruptLog, Event, EventKind, EventLog, read_log, write_log
from .finalize import (
    FairnessReport,
    InfeasibilityReport,
    OverrideChange,
    ScheduleDraft,
    apply_override,
    autofill,
    fairness_report,
    release,
)
from .rules import (
    HolidayLedger,
    RuleSet,
    ValidationReport,
    Violation,
    ViolationKind,
    coverage_deficit,
    reciprocity_check,
    rest_check,
    validate_schedule,
)
from .service import Actor, PlanningService
from .stats import UsageStats, stats_report
from .workflow import (
    HoursStatement,
    PlanningCycle,
    ReleasedSchedule,
    StandInEvent,
    SwapProposal,
    Wish,
    WishOrigin,
    WishStatus,
    hours_statement,
)

__version__ = "0.1.0"
