"""Admin command line: init, import-roster, open-cycle, detect, autofill,
release, export, stats, serve."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from . import api as api_module
from . import export as export_module
from .core import (
    Shift,
    ShiftSlot,
    SystemConfig,
    christmas_new_year_pair,
    load_roster_csv,
)
from .events import EventLog
from .finalize import InfeasibilityReport
from .service import Actor, PlanningService
from .stats import stats_report

DEFAULT_CONFIG = {
    "wish_quota": 5,
    "priority_enabled": False,
    "min_staff": {"morning": 2, "afternoon": 2},
    "min_certified": {"morning": 1, "afternoon": 1},
    "rest_hours_min": 11.0,
    "release_lead_days": 14,
    "reciprocity_enabled": False,
    "reciprocity_years": [],
    "roster_path": "roster.csv",
    "absences_path": None,
    "tokens": {"change-me-planner": ["p1", "planner"]},
    "port": 8642,
}


def load_config(path: str | Path) -> tuple[SystemConfig, dict]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    pairs = tuple(
        christmas_new_year_pair(int(y)) for y in raw.get("reciprocity_years", [])
    )
    config = SystemConfig(
        wish_quota=raw.get("wish_quota", 5),
        priority_enabled=raw.get("priority_enabled", False),
        min_staff={Shift(k): v for k, v in raw.get("min_staff", {"morning": 2, "afternoon": 2}).items()},
        min_certified={
            Shift(k): v for k, v in raw.get("min_certified", {"morning": 1, "afternoon": 1}).items()
        },
        rest_hours_min=raw.get("rest_hours_min", 11.0),
        release_lead_days=raw.get("release_lead_days", 14),
        holiday_pairs=pairs,
        reciprocity_enabled=raw.get("reciprocity_enabled", False),
        apprenticeship_counts_certified=raw.get("apprenticeship_counts_certified", False),
        solution_cap=raw.get("solution_cap", 50),
        autofill_node_budget=raw.get("autofill_node_budget", 1_000_000),
    )
    return config, raw


def build_service(args) -> PlanningService:
    config, raw = load_config(args.config)
    roster = load_roster_csv(raw["roster_path"], raw.get("absences_path"))
    log = EventLog(args.log_path)
    return PlanningService(roster, config, log)


def actor_from(args, raw_config: dict | None = None) -> Actor:
    name = args.actor or "admin"
    role = "planner"
    if raw_config and name in {v[0] for v in raw_config.get("tokens", {}).values()}:
        for worker_id, token_role in raw_config["tokens"].values():
            if worker_id == name:
                role = token_role
    return Actor(name, role)


def cmd_init(args) -> int:
    path = Path(args.config)
    if path.exists() and not args.force:
        print(f"{path} exists; use --force to overwrite", file=sys.stderr)
        return 1
    path.write_text(json.dumps(DEFAULT_CONFIG, indent=2) + "\n", encoding="utf-8")
    print(f"wrote starter config to {path}")
    return 0


def cmd_import_roster(args) -> int:
    roster = load_roster_csv(args.roster, args.absences)
    print(f"roster ok: {len(roster)} workers")
    for w in roster:
        marks = []
        if w.is_leader:
            marks.append("leader")
        if w.absences:
            marks.append(f"{len(w.absences)} absences")
        print(f"  {w.worker_id}  {w.display_name}  {w.qualification.value}"
              + (f"  ({', '.join(marks)})" if marks else ""))
    return 0


def cmd_open_cycle(args) -> int:
    service = build_service(args)
    cycle = service.open_cycle(actor_from(args), args.month)
    print(f"opened {cycle.month}; release due {cycle.release_date}; quota {cycle.quota}")
    return 0


def cmd_detect(args) -> int:
    service = build_service(args)
    found = service.recompute_conflicts(actor_from(args), args.month)
    if not found:
        print(f"no conflicts in {args.month}")
        return 0
    for conflict in found:
        print(f"conflict {conflict.conflict_id}:")
        for d in conflict.deficient_slots:
            print(
                f"  {d.slot.key()}  short {d.staff_deficit} staff"
                f" / {d.certified_deficit} certified"
            )
        names = sorted(
            {service.wishes[wid].worker_id for wid in conflict.involved_wishes}
        )
        print(f"  involved: {', '.join(names) if names else '(nobody - escalate)'}")
        for s in conflict.solutions:
            print(f"  option: withdraw {', '.join(sorted(s))}")
        if conflict.truncated:
            print("  (solution list truncated)")
    return 1


def cmd_autofill(args) -> int:
    service = build_service(args)
    pinned = []
    if args.pinned:
        import csv as _csv

        with open(args.pinned, encoding="utf-8", newline="") as f:
            for row in _csv.DictReader(f):
                pinned.append(
                    (
                        row["worker_id"].strip(),
                        ShiftSlot(date.fromisoformat(row["date"].strip()), Shift(row["shift"].strip())),
                    )
                )
    result = service.autofill(
        actor_from(args), args.month,
        acknowledge_conflicts=args.acknowledge_conflicts,
        pinned=tuple(pinned),
    )
    if isinstance(result, InfeasibilityReport):
        print("infeasible:")
        print(f"  slot: {result.slot.key() if result.slot else '-'}")
        for c in result.binding_constraints:
            print(f"  {c}")
        return 1
    print(f"draft for {result.month}: soft penalty {result.soft_penalty:.1f}")
    if args.release:
        released = service.release(actor_from(args), args.month, as_of=date.today())
        print(f"released {released.month}" + (" (late)" if released.late else ""))
    return 0


def cmd_release(args) -> int:
    service = build_service(args)
    actor = actor_from(args)
    service.autofill(actor, args.month, acknowledge_conflicts=args.acknowledge_conflicts)
    as_of = date.fromisoformat(args.as_of) if args.as_of else date.today()
    released = service.release(actor, args.month, as_of=as_of)
    print(f"released {released.month} on {released.released_on}"
          + (" (late-release advisory)" if released.late else ""))
    granted = len(released.granted_wish_ids)
    print(f"{granted} wishes granted")
    return 0


def cmd_export(args) -> int:
    service = build_service(args)
    cycle = service._cycle(args.month)
    if cycle.released is None:
        print(f"{args.month} not released yet", file=sys.stderr)
        return 1
    if args.format == "matrix":
        out = export_module.schedule_matrix_csv(cycle.released, service.roster)
    else:
        if not args.worker:
            print("--worker required for ics export", file=sys.stderr)
            return 1
        out = export_module.ical_export(
            cycle.released, args.worker, service.roster, service.ruleset(args.month)
        )
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(out)
    return 0


def cmd_stats(args) -> int:
    service = build_service(args)
    exclude = tuple(args.exclude.split(",")) if args.exclude else ()
    report = stats_report(service.log, exclude_months=exclude)
    print(json.dumps(report.to_dict(), indent=2))
    open_months = [k for k, c in sorted(service.cycles.items()) if c.phase == "preparation"]
    for month in open_months:
        quiet = service.workers_without_wishes(month)
        if quiet:
            print(f"no wishes yet in {month}: {', '.join(quiet)}  (worth a nudge)")
    return 0


def cmd_serve(args) -> int:
    config, raw = load_config(args.config)
    roster = load_roster_csv(raw["roster_path"], raw.get("absences_path"))
    log = EventLog(args.log_path)
    service = PlanningService(roster, config, log)
    tokens = {t: (v[0], v[1]) for t, v in raw.get("tokens", {}).items()}
    app = api_module.ShiftWishApp(service, tokens)
    api_module.serve(app, host=args.host, port=args.port or raw.get("port", 8642))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="shiftwish")
    parser.add_argument("--config", default="shiftwish.json")
    parser.add_argument("--log-path", default="events.jsonl")
    parser.add_argument("--as", dest="actor", default=None, help="acting worker id")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="write a starter config file")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("import-roster", help="validate a roster csv")
    p.add_argument("roster")
    p.add_argument("--absences", default=None)
    p.set_defaults(func=cmd_import_roster)

    p = sub.add_parser("open-cycle", help="open a planning month")
    p.add_argument("month")
    p.set_defaults(func=cmd_open_cycle)

    p = sub.add_parser("detect", help="detect and publish wish conflicts")
    p.add_argument("month")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("autofill", help="compute a draft schedule")
    p.add_argument("month")
    p.add_argument("--acknowledge-conflicts", action="store_true")
    p.add_argument("--pinned", default=None, help="csv of worker_id,date,shift pre-assignments")
    p.add_argument("--release", action="store_true")
    p.set_defaults(func=cmd_autofill)

    p = sub.add_parser("release", help="autofill and release the month")
    p.add_argument("month")
    p.add_argument("--as-of", default=None)
    p.add_argument("--acknowledge-conflicts", action="store_true")
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("export", help="export a released schedule")
    p.add_argument("month")
    p.add_argument("--format", choices=["matrix", "ics"], default="matrix")
    p.add_argument("--worker", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="usage statistics from the event log")
    p.add_argument("--exclude", default=None, help="comma-separated months to exclude")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP/JSON API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
