"""HTTP/JSON API over the planning service.

Plain WSGI so handlers are testable without sockets; `serve` wraps it in the
stdlib reference server. Bearer tokens map to (worker_id, role); planner-only
endpoints are role-gated and workers never receive a conflict they are not
involved in.
"""

from __future__ import annotations

import json
import re
from datetime import date
from typing import Callable

from . import finalize
from .core import InvalidMonth, Shift, ShiftSlot
from .service import Actor, NoDraft, PlanningService, StaleDraft
from .stats import stats_report
from .workflow import (
    AlreadyWithdrawn,
    CycleExists,
    CycleNotFound,
    DuplicateWish,
    FreeWeekend,
    NotAssigned,
    NotAuthorized,
    NotOwner,
    PhaseClosed,
    QuotaExceeded,
    SelfSwap,
    ValidationFailed,
    VolunteerUnavailable,
    WholeDayOnWeekend,
    Wish,
    WishOutsideMonth,
)

_STATUS = {
    200: "200 OK",
    400: "400 Bad Request",
    401: "401 Unauthorized",
    403: "403 Forbidden",
    404: "404 Not Found",
    409: "409 Conflict",
    422: "422 Unprocessable Entity",
    500: "500 Internal Server Error",
}

_ERROR_CODES: list[tuple[type, int]] = [
    (NotAuthorized, 403),
    (NotOwner, 403),
    (CycleNotFound, 404),
    (KeyError, 404),
    (CycleExists, 409),
    (PhaseClosed, 409),
    (AlreadyWithdrawn, 409),
    (QuotaExceeded, 409),
    (StaleDraft, 409),
    (NoDraft, 409),
    (finalize.UnresolvedConflicts, 409),
    (finalize.HardViolationsPresent, 422),
    (finalize.EmptyWindow, 422),
    (ValidationFailed, 422),
    (VolunteerUnavailable, 422),
    (FreeWeekend, 422),
    (WholeDayOnWeekend, 422),
    (DuplicateWish, 422),
    (WishOutsideMonth, 422),
    (SelfSwap, 422),
    (NotAssigned, 422),
    (InvalidMonth, 422),
    (ValueError, 400),
]


def _error_body(exc: Exception) -> tuple[int, dict]:
    for klass, status in _ERROR_CODES:
        if isinstance(exc, klass):
            body = {"error": type(exc).__name__, "detail": str(exc)}
            if isinstance(exc, QuotaExceeded):
                body["quota"] = exc.quota
                body["remaining"] = exc.remaining
            report = getattr(exc, "report", None)
            if report is not None:
                body["violations"] = [
                    {"kind": v.kind.value, "subject": v.subject, "detail": v.detail}
                    for v in report.hard_violations
                ]
            return status, body
    return 500, {"error": type(exc).__name__, "detail": str(exc)}


def wish_payload(service: PlanningService, wish: Wish) -> dict:
    return {
        "wish_id": wish.wish_id,
        "worker_id": wish.worker_id,
        "date": wish.date.isoformat(),
        "scope": wish.scope.value,
        "status": service.wish_effective_status(wish).value,
        "priority": wish.priority,
        "origin": wish.origin.value,
    }


def _assignment_payload(assignment) -> list[dict]:
    return [
        {"date": s.date.isoformat(), "shift": s.shift.value, "workers": sorted(v)}
        for s, v in sorted(assignment.items(), key=lambda kv: kv[0].sort_key)
    ]


def draft_payload(draft: finalize.ScheduleDraft) -> dict:
    return {
        "month": str(draft.month),
        "status": draft.status,
        "soft_penalty": draft.soft_penalty,
        "assignment": _assignment_payload(draft.assignment),
        "warnings": [
            {"wish_id": w.wish_id, "slot_key": w.slot_key, "worker_id": w.worker_id}
            for w in draft.warnings
        ],
    }


def infeasibility_payload(report: finalize.InfeasibilityReport) -> dict:
    return {
        "infeasible": True,
        "slot": report.slot.key() if report.slot else None,
        "binding_constraints": list(report.binding_constraints),
        "budget_exhausted": report.budget_exhausted,
        "partial": [
            {"slot": s.key(), "workers": sorted(v)} for s, v in sorted(
                report.partial.items(), key=lambda kv: kv[0].sort_key
            )
        ],
    }


def released_payload(released) -> dict:
    return {
        "month": str(released.month),
        "status": "finalized",
        "assignment": _assignment_payload(released.assignment),
        "warnings": [
            {"wish_id": w.wish_id, "slot_key": w.slot_key, "worker_id": w.worker_id}
            for w in released.warnings
        ],
        "granted_wish_ids": sorted(released.granted_wish_ids),
        "released_on": released.released_on.isoformat() if released.released_on else None,
        "late": released.late,
    }


def conflict_payload(view) -> dict:
    return {
        "conflict_id": view.conflict_id,
        "month": view.month,
        "slots": list(view.slots),
        "colleagues": list(view.colleagues),
        "wishes": list(view.wishes),
        "solutions": [list(s) for s in view.solutions],
        "truncated": view.truncated,
        "escalation_required": view.escalation_required,
    }


class ShiftWishApp:
    """WSGI application; one instance wraps one PlanningService."""

    def __init__(self, service: PlanningService, tokens: dict[str, tuple[str, str]]):
        self.service = service
        self.tokens = tokens
        self.routes: list[tuple[str, re.Pattern, Callable]] = [
            ("POST", re.compile(r"^/cycles$"), self.open_cycle),
            ("GET", re.compile(r"^/cycles/(?P<month>[\d-]+)$"), self.get_cycle),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/wishes$"), self.post_wish),
            ("DELETE", re.compile(r"^/wishes/(?P<wish_id>[\w-]+)$"), self.delete_wish),
            ("GET", re.compile(r"^/cycles/(?P<month>[\d-]+)/calendar$"), self.get_calendar),
            ("GET", re.compile(r"^/me/conflicts$"), self.my_conflicts),
            (
                "POST",
                re.compile(r"^/conflicts/(?P<conflict_id>[\w-]+)/withdrawals$"),
                self.conflict_withdrawal,
            ),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/swaps$"), self.post_swap),
            ("POST", re.compile(r"^/swaps/(?P<proposal_id>[\w-]+)/accept$"), self.accept_swap),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/stand-ins$"), self.post_stand_in),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/autofill$"), self.post_autofill),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/overrides$"), self.post_override),
            ("POST", re.compile(r"^/cycles/(?P<month>[\d-]+)/release$"), self.post_release),
            ("GET", re.compile(r"^/reports/usage$"), self.usage),
            ("GET", re.compile(r"^/reports/fairness$"), self.fairness),
            ("GET", re.compile(r"^/me/hours$"), self.my_hours),
        ]

    # ------------------------------------------------------------------ wsgi

    def __call__(self, environ, start_response):
        method = environ["REQUEST_METHOD"]
        path = environ.get("PATH_INFO", "/")
        try:
            actor = self._authenticate(environ)
        except NotAuthorized as exc:
            return self._respond(start_response, 401, {"error": "NotAuthorized", "detail": str(exc)})
        query = _parse_query(environ.get("QUERY_STRING", ""))
        body = self._read_body(environ)
        for route_method, pattern, handler in self.routes:
            match = pattern.match(path)
            if match and route_method == method:
                try:
                    status, payload = handler(actor, body, query, **match.groupdict())
                except Exception as exc:  # mapped to structured error bodies
                    status, payload = _error_body(exc)
                return self._respond(start_response, status, payload)
        return self._respond(start_response, 404, {"error": "NotFound", "detail": path})

    def _authenticate(self, environ) -> Actor:
        header = environ.get("HTTP_AUTHORIZATION", "")
        if not header.startswith("Bearer "):
            raise NotAuthorized("missing bearer token")
        token = header[len("Bearer "):].strip()
        if token not in self.tokens:
            raise NotAuthorized("unknown token")
        worker_id, role = self.tokens[token]
        return Actor(worker_id, role)

    def _read_body(self, environ) -> dict:
        try:
            length = int(environ.get("CONTENT_LENGTH") or 0)
        except ValueError:
            length = 0
        if length == 0:
            return {}
        raw = environ["wsgi.input"].read(length)
        try:
            return json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError:
            return {}

    def _respond(self, start_response, status: int, payload: dict):
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        start_response(
            _STATUS.get(status, _STATUS[500]),
            [("Content-Type", "application/json; charset=utf-8"),
             ("Content-Length", str(len(body)))],
        )
        return [body]

    # -------------------------------------------------------------- handlers

    def open_cycle(self, actor, body, query):
        cycle = self.service.open_cycle(actor, body["month"])
        return 200, {
            "month": str(cycle.month),
            "phase": cycle.phase,
            "quota": cycle.quota,
            "release_date": cycle.release_date.isoformat(),
        }

    def get_cycle(self, actor, body, query, month):
        cycle = self.service._cycle(month)
        wishes = self.service.cycle_wishes(month)
        return 200, {
            "month": str(cycle.month),
            "phase": cycle.phase,
            "quota": cycle.quota,
            "release_date": cycle.release_date.isoformat(),
            "quota_remaining": max(
                0,
                cycle.quota
                - sum(
                    1
                    for w in wishes
                    if w.worker_id == actor.actor_id and w.live and w.origin.value == "worker"
                ),
            ),
            "wish_examples": list(self.service.config.wish_examples),
            "own_wishes": [
                wish_payload(self.service, w)
                for w in wishes
                if w.worker_id == actor.actor_id
            ],
        }

    def post_wish(self, actor, body, query, month):
        wish = self.service.submit_wish(
            actor,
            month,
            date.fromisoformat(body["date"]),
            body["scope"],
            priority=bool(body.get("priority", False)),
            worker_id=body.get("worker_id"),
        )
        return 200, wish_payload(self.service, wish)

    def delete_wish(self, actor, body, query, wish_id):
        wish = self.service.withdraw_wish(actor, wish_id)
        return 200, wish_payload(self.service, wish)

    def get_calendar(self, actor, body, query, month):
        return 200, self.service.calendar_view(actor, month)

    def my_conflicts(self, actor, body, query):
        views = []
        for key, cycle in sorted(self.service.cycles.items()):
            if cycle.phase != "preparation":
                continue
            views.extend(self.service.conflict_views(actor, key))
        return 200, {"conflicts": [conflict_payload(v) for v in views]}

    def conflict_withdrawal(self, actor, body, query, conflict_id):
        """Withdraw one's own wish as the resolution step of a conflict."""
        wish_id = body["wish_id"]
        for key, cycle in self.service.cycles.items():
            for conflict in self.service.conflicts(key):
                if conflict.conflict_id == conflict_id:
                    if not actor.is_planner and not conflict.involves(
                        actor.actor_id, self.service.wishes
                    ):
                        # uninvolved workers cannot even confirm the id exists
                        raise KeyError(conflict_id)
                    if wish_id not in conflict.involved_wishes:
                        raise NotOwner(f"{wish_id} is not part of {conflict_id}")
                    wish = self.service.withdraw_wish(actor, wish_id)
                    remaining = [
                        conflict_payload(v) for v in self.service.conflict_views(actor, key)
                    ]
                    return 200, {
                        "wish": wish_payload(self.service, wish),
                        "remaining_conflicts": remaining,
                    }
        raise KeyError(conflict_id)

    def post_swap(self, actor, body, query, month):
        proposal = self.service.propose_swap(
            actor,
            month,
            body["counterpart"],
            ShiftSlot(date.fromisoformat(body["proposer_date"]), Shift(body["proposer_shift"])),
            ShiftSlot(
                date.fromisoformat(body["counterpart_date"]), Shift(body["counterpart_shift"])
            ),
        )
        return 200, {
            "proposal_id": proposal.proposal_id,
            "state": proposal.state.value,
        }

    def accept_swap(self, actor, body, query, proposal_id):
        proposal = self.service.accept_swap(actor, proposal_id)
        return 200, {"proposal_id": proposal.proposal_id, "state": proposal.state.value}

    def post_stand_in(self, actor, body, query, month):
        event = self.service.record_stand_in(
            actor,
            month,
            body["absent_worker"],
            body["volunteer"],
            ShiftSlot(date.fromisoformat(body["date"]), Shift(body["shift"])),
        )
        return 200, {
            "absent_worker": event.absent_worker,
            "volunteer": event.volunteer,
            "slot": event.slot.key(),
            "kudos": self.service.kudos.get(event.volunteer, 0),
        }

    def post_autofill(self, actor, body, query, month):
        result = self.service.autofill(
            actor, month, acknowledge_conflicts=bool(body.get("acknowledge_conflicts"))
        )
        if isinstance(result, finalize.InfeasibilityReport):
            return 200, infeasibility_payload(result)
        return 200, draft_payload(result)

    def post_override(self, actor, body, query, month):
        change = finalize.OverrideChange(
            slot=ShiftSlot(date.fromisoformat(body["date"]), Shift(body["shift"])),
            add=tuple(body.get("add", ())),
            remove=tuple(body.get("remove", ())),
        )
        result = self.service.override(actor, month, change)
        if isinstance(result, finalize.ScheduleDraft):
            return 200, draft_payload(result)
        return 200, released_payload(result)

    def post_release(self, actor, body, query, month):
        as_of = date.fromisoformat(body["as_of"]) if "as_of" in body else date.today()
        released = self.service.release(actor, month, as_of)
        return 200, released_payload(released)

    def usage(self, actor, body, query):
        exclude = tuple(query.get("exclude", "").split(",")) if query.get("exclude") else ()
        report = stats_report(self.service.log, exclude_months=exclude)
        return 200, report.to_dict()

    def fairness(self, actor, body, query):
        months = query.get("months", "").split(",") if query.get("months") else None
        report = self.service.fairness(months)
        return 200, {
            "months": list(report.months),
            "free_weekends": dict(report.free_weekends),
            "spread": report.spread,
            "flagged": list(report.flagged),
            "holiday_summary": dict(report.holiday_summary),
        }

    def my_hours(self, actor, body, query):
        month = query.get("month")
        if not month:
            raise ValueError("month query parameter required")
        statement = self.service.hours_for(actor.actor_id, month)
        return 200, {
            "worker_id": statement.worker_id,
            "month": str(statement.month),
            "target_hours": statement.target_hours,
            "assigned_hours": statement.assigned_hours,
            "delta": statement.delta,
        }


def _parse_query(qs: str) -> dict[str, str]:
    out = {}
    for part in qs.split("&"):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k] = v.replace("%2C", ",").replace("+", " ")
    return out


def serve(app: ShiftWishApp, host: str = "127.0.0.1", port: int = 8642):
    from wsgiref.simple_server import make_server

    with make_server(host, port, app) as httpd:
        print(f"shiftwish API on http://{host}:{port}")
        httpd.serve_forever()
