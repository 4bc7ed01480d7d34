"""Schedule exports: the worker-by-day matrix and personal iCalendar files."""

from __future__ import annotations

import io
from datetime import datetime

from .core import Roster, Shift, ShiftSlot
from .rules import RuleSet
from .workflow import ReleasedSchedule

CELL_FREE = "\u00b7"  # middle dot for an unassigned day


def schedule_matrix_csv(schedule: ReleasedSchedule, roster: Roster) -> str:
    """Rows = workers, columns = days, cells M / A / the free marker."""
    days = schedule.month.days()
    buf = io.StringIO()
    buf.write("worker_id," + ",".join(d.isoformat() for d in days) + "\r\n")
    for worker in roster:
        cells = []
        for day in days:
            marks = ""
            if worker.worker_id in schedule.assignment.get(ShiftSlot(day, Shift.MORNING), ()):
                marks += "M"
            if worker.worker_id in schedule.assignment.get(ShiftSlot(day, Shift.AFTERNOON), ()):
                marks += "A"
            cells.append(marks or CELL_FREE)
        buf.write(worker.worker_id + "," + ",".join(cells) + "\r\n")
    return buf.getvalue()


def _ical_escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace(";", "\\;").replace(",", "\\,").replace("\n", "\\n")
    )


def ical_export(
    schedule: ReleasedSchedule,
    worker_id: str,
    roster: Roster,
    rules: RuleSet,
    *,
    stamp: datetime | None = None,
) -> str:
    """One VEVENT per assigned shift for a single worker's calendar."""
    worker = roster.get(worker_id)
    dtstamp = (stamp or datetime(2000, 1, 1)).strftime("%Y%m%dT%H%M%SZ")
    lines = [
        "BEGIN:VCALENDAR",
        "VERSION:2.0",
        "PRODID:-//shiftwish//schedule//EN",
        "CALSCALE:GREGORIAN",
        f"X-WR-CALNAME:{_ical_escape(worker.display_name)} {schedule.month}",
    ]
    for slot in schedule.slots_of(worker_id):
        start = rules.slot_start(slot)
        end = rules.slot_end(slot)
        uid = f"{slot.key()}-{worker_id}@shiftwish"
        lines += [
            "BEGIN:VEVENT",
            f"UID:{uid}",
            f"DTSTAMP:{dtstamp}",
            f"DTSTART:{start.strftime('%Y%m%dT%H%M%S')}",
            f"DTEND:{end.strftime('%Y%m%dT%H%M%S')}",
            f"SUMMARY:{_ical_escape(slot.shift.value.capitalize() + ' shift')}",
            "END:VEVENT",
        ]
    lines.append("END:VCALENDAR")
    return "\r\n".join(lines) + "\r\n"
