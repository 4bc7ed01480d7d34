"""Record real API responses as JSON fixtures for the frontend contract tests.

Scenario: June 2019, five workers on vacation on Friday the 14th, seven
whole-day wishes on that Friday -> one real conflict. Plus quota and weekend
error bodies. Deterministic; rerun after API changes and commit the diff.
"""

import io
import json
import sys
from datetime import date
from pathlib import Path

from shiftwish.api import ShiftWishApp
from shiftwish.core import AbsenceReason, Shift, SystemConfig, with_absences
from shiftwish.fixture import study_roster
from shiftwish.service import PlanningService

OUT = Path(__file__).parent.parent / "fixtures"

TOKENS = {
    "tok-planner": ("w11", "planner"),
    **{f"tok-w{i:02d}": (f"w{i:02d}", "worker") for i in range(1, 17)},
}


def call(app, method, path, token=None, body=None, query=""):
    raw = json.dumps(body).encode() if body is not None else b""
    environ = {
        "REQUEST_METHOD": method,
        "PATH_INFO": path,
        "QUERY_STRING": query,
        "CONTENT_LENGTH": str(len(raw)),
        "wsgi.input": io.BytesIO(raw),
    }
    if token:
        environ["HTTP_AUTHORIZATION"] = f"Bearer {token}"
    captured = {}

    def start_response(status, headers):
        captured["status"] = int(status.split()[0])

    payload = json.loads(b"".join(app(environ, start_response)).decode("utf-8"))
    return captured["status"], payload


def save(name, status, payload):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / f"{name}.json").write_text(
        json.dumps({"status": status, "body": payload}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"recorded {name}.json ({status})")


def main():
    friday = date(2019, 6, 14)
    roster = with_absences(
        study_roster(),
        {w: [(friday, AbsenceReason.VACATION)] for w in ("w12", "w13", "w14", "w15", "w16")},
    )
    config = SystemConfig(
        min_staff={Shift.MORNING: 5, Shift.AFTERNOON: 5},
        min_certified={Shift.MORNING: 1, Shift.AFTERNOON: 1},
    )
    service = PlanningService(roster, config)
    app = ShiftWishApp(service, TOKENS)

    call(app, "POST", "/cycles", "tok-planner", {"month": "2019-06"})
    for worker in ("w01", "w02", "w03", "w04", "w05", "w06", "w07"):
        status, _ = call(
            app,
            "POST",
            "/cycles/2019-06/wishes",
            f"tok-{worker}",
            {"date": "2019-06-14", "scope": "whole_day"},
        )
        assert status == 200, worker

    status, body = call(
        app,
        "POST",
        "/cycles/2019-06/wishes",
        "tok-w03",
        {"date": "2019-06-20", "scope": "morning"},
    )
    save("wish_created", status, body)

    save("cycle_info", *call(app, "GET", "/cycles/2019-06", "tok-w03"))
    save("calendar_involved", *call(app, "GET", "/cycles/2019-06/calendar", "tok-w01"))
    save("calendar_uninvolved", *call(app, "GET", "/cycles/2019-06/calendar", "tok-w08"))
    save("conflicts_w01", *call(app, "GET", "/me/conflicts", "tok-w01"))
    save("conflicts_planner", *call(app, "GET", "/me/conflicts", "tok-planner"))

    # error bodies the dialogs must surface
    for day in ("2019-06-03", "2019-06-04", "2019-06-05", "2019-06-06"):
        call(app, "POST", "/cycles/2019-06/wishes", "tok-w03", {"date": day, "scope": "afternoon"})
    save(
        "error_quota",
        *call(
            app,
            "POST",
            "/cycles/2019-06/wishes",
            "tok-w03",
            {"date": "2019-06-25", "scope": "morning"},
        ),
    )
    # w03 anchor Saturdays include 2019-06-08 (work) and 2019-06-01 (free)
    save(
        "error_whole_day_weekend",
        *call(
            app,
            "POST",
            "/cycles/2019-06/wishes",
            "tok-w01",
            {"date": "2019-06-08", "scope": "whole_day"},
        ),
    )
    save(
        "error_free_weekend",
        *call(
            app,
            "POST",
            "/cycles/2019-06/wishes",
            "tok-w01",
            {"date": "2019-06-01", "scope": "morning"},
        ),
    )

    # conflict-hero withdrawal round trip
    _, mine = call(app, "GET", "/me/conflicts", "tok-w01")
    conflict = mine["conflicts"][0]
    own = [w for w in conflict["wishes"] if w["worker_id"] == "w01"][0]
    save(
        "withdrawal_response",
        *call(
            app,
            "POST",
            f"/conflicts/{conflict['conflict_id']}/withdrawals",
            "tok-w01",
            {"wish_id": own["wish_id"]},
        ),
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
