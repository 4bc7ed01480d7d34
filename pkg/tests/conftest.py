import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shiftwish.core import (
    Month,
    Qualification,
    Shift,
    SystemConfig,
    Worker,
    build_roster,
)

ANCHOR_EVEN = date(2019, 3, 2)
ANCHOR_ODD = date(2019, 3, 9)


def make_worker(
    worker_id: str,
    qualification: str = "certified_nurse",
    anchor: date = ANCHOR_EVEN,
    hours: float = 38.5,
    preference: str = "none",
    max_run: int = 7,
    absences=(),
    leader: bool = False,
) -> Worker:
    return Worker(
        worker_id=worker_id,
        display_name=worker_id.upper(),
        qualification=Qualification(qualification),
        is_leader=leader,
        contract_hours_per_week=hours,
        weekend_parity_anchor=anchor,
        max_consecutive_days=max_run,
        shift_preference=preference,
        absences=frozenset(absences),
    )


def alternating_roster(n: int, certified: int | None = None):
    """n workers with alternating weekend parity; first `certified` are nurses."""
    certified = certified if certified is not None else n
    workers = [
        make_worker(
            f"w{i:02d}",
            qualification="certified_nurse" if i < certified else "aide",
            anchor=ANCHOR_EVEN if i % 2 == 0 else ANCHOR_ODD,
        )
        for i in range(n)
    ]
    return build_roster(workers)


@pytest.fixture
def config():
    return SystemConfig()


@pytest.fixture
def small_config():
    return SystemConfig(
        min_staff={Shift.MORNING: 1, Shift.AFTERNOON: 1},
        min_certified={Shift.MORNING: 1, Shift.AFTERNOON: 0},
    )


@pytest.fixture
def march():
    return Month(2019, 3)
