"""Command-line entry point: ingest, validate, match, schedule, diagnose,
what-if, serve and export.

Exit codes: 0 success, 1 violations or data errors found, 2 usage error,
3 I/O or parse failure. Human output is tab-delimited; ``--json`` prints the
same payload the HTTP service returns for the operation.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .engine import Engine, to_json
from .errors import PprError, StarvedStep
from .graph import AkgGraph
from .matching import apply_capability_change, eligible_resources
from .diagnosis import ObservationContext, plausible_causes
from .scheduling import SchedulePolicy, build_instance, schedule, verify_schedule
from .turtle import TurtleParseFailure, load_graph, serialize_turtle
from .validation import validate

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pprakg",
        description="Product-process-resource asset knowledge graph engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="Turtle (.ttl) model file")
    common.add_argument("--json", action="store_true", help="emit the service JSON payload")

    p = sub.add_parser("validate", parents=[common], help="run the rule validator")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("match", parents=[common], help="eligible resources for a step")
    p.add_argument("--step", required=True, help="process class or step instance IRI")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("schedule", parents=[common], help="instantiate runs and schedule them")
    p.add_argument("--product", required=True, help="product class IRI")
    p.add_argument("-n", type=_positive, default=1, help="number of parallel runs")
    p.add_argument("--improve", action="store_true", help="run local-search improvement")
    p.add_argument("--max-iterations", type=int, default=1000)
    p.add_argument("--gantt", metavar="FILE", help="also render a Gantt chart image")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("diagnose", parents=[common], help="rank plausible causes")
    p.add_argument("--condition", required=True, help="undesired condition IRI")
    p.add_argument("--resource", help="resource the condition was observed on")
    p.add_argument("--step", help="affected process step IRI")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("whatif", parents=[common], help="capability change impact")
    p.add_argument("--resource", required=True)
    p.add_argument("--capability", required=True)
    p.add_argument("--action", required=True, choices=["add", "remove"])
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("export", parents=[common], help="canonicalize a model file")
    p.add_argument("-o", "--out", required=True, help="output .ttl path")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default=None, help="bind address host:port (or $PPR_ADDR)")
    p.add_argument("--graph", default=None, help="Turtle file loaded at boot (or $PPR_GRAPH)")
    p.add_argument("--ui", default=None, help="static console directory (or $PPR_UI)")
    p.set_defaults(func=cmd_serve)

    return parser


def _load(path: str) -> AkgGraph:
    return load_graph(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Commands

def cmd_validate(args) -> int:
    graph = _load(args.file)
    violations = validate(graph)
    if args.json:
        print(to_json([v.to_jsonable() for v in violations]))
    else:
        for v in violations:
            print(f"{v.rule_id}\t{v.severity}\t{v.subject}\t{v.message}")
        print(f"{len(violations)} violations")
    return EXIT_DATA if violations else EXIT_OK


def cmd_match(args) -> int:
    graph = _load(args.file)
    report = eligible_resources(graph, args.step)
    if args.json:
        print(to_json(report.to_jsonable()))
        return EXIT_OK
    for resource in report.eligible:
        print(f"eligible\t{resource}")
    print(f"{len(report.eligible)} eligible resources for {report.step}")
    return EXIT_OK


def cmd_schedule(args) -> int:
    graph = _load(args.file)
    runs = graph.instantiate_run(args.product, args.n)
    instance = build_instance(graph, runs)
    policy = SchedulePolicy(improve=args.improve, max_iterations=args.max_iterations)
    result = schedule(instance, policy)
    problems = verify_schedule(instance, result)
    if problems:  # defensive; the solver only emits feasible schedules
        for problem in problems:
            print(f"infeasible\t{problem}", file=sys.stderr)
        return EXIT_DATA
    payload = result.to_jsonable()
    if args.gantt:
        from .gantt import render_gantt

        render_gantt(payload, args.gantt, title=f"{args.n} run(s) of {args.product}")
    if args.json:
        print(to_json(payload))
        return EXIT_OK
    print("step\tresource\tstart_s\tduration_s")
    for row in payload["assignments"]:
        print(f"{row['step']}\t{row['resource']}\t{row['start_s']}\t{row['duration_s']}")
    print(f"makespan_s\t{payload['makespan_s']}")
    if args.gantt:
        print(f"gantt\t{args.gantt}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    graph = _load(args.file)
    ctx = ObservationContext(args.condition, args.step, args.resource)
    report = plausible_causes(graph, ctx)
    if args.json:
        print(to_json(report.to_jsonable()))
        return EXIT_OK
    for rank, cause in enumerate(report.causes, start=1):
        print(f"{rank}\t{cause.cause}\t{cause.scope}\t{cause.weight:g}")
    print(f"{len(report.causes)} plausible causes for {report.context.condition}")
    return EXIT_OK


def cmd_whatif(args) -> int:
    graph = _load(args.file)
    impact = apply_capability_change(graph, args.resource, args.capability, args.action)
    if args.json:
        print(to_json(impact.to_jsonable()))
        return EXIT_OK
    for entry in impact.changed:
        flag = "starved" if entry.starved else "changed"
        print(
            f"{flag}\t{entry.step}\t{','.join(entry.before) or '-'}\t"
            f"{','.join(entry.after) or '-'}"
        )
    print(f"{len(impact.changed)} step(s) affected by {args.action} of {impact.capability}")
    return EXIT_OK


def cmd_export(args) -> int:
    graph = _load(args.file)
    Path(args.out).write_text(serialize_turtle(graph), encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .nlq import RemoteNlBackend
    from .service import create_service, parse_addr

    addr = parse_addr(args.addr or os.environ.get("PPR_ADDR") or "127.0.0.1:8420")
    graph_file = args.graph or os.environ.get("PPR_GRAPH")
    engine = Engine(_load(graph_file) if graph_file else None)
    backend = None
    llm_url = os.environ.get("PPR_LLM_URL")
    if llm_url:
        backend = RemoteNlBackend(
            llm_url,
            os.environ.get("PPR_LLM_MODEL", ""),
            os.environ.get("PPR_LLM_KEY"),
        )
    ui_dir = args.ui or os.environ.get("PPR_UI")
    server = create_service(engine, addr, nl_backend=backend, ui_dir=ui_dir)
    print(f"serving on {server.url} (graph: {graph_file or 'empty'})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except TurtleParseFailure as exc:
        for error in exc.errors:
            print(f"{args.file}:{error.line}:{error.column}: {error.message}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except StarvedStep as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    except PprError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
