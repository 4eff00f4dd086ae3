"""Resource allocation over discrete time: precedence-constrained scheduling
of run steps onto eligible unit-capacity resources, minimizing makespan.

``schedule`` is deterministic list scheduling (earliest possible start,
longest duration, lexicographic tie-break; placement on the earliest-finish
eligible resource) with optional steepest-descent local search over single
reassignments and same-resource order swaps. ``brute_force_schedule`` is
the exact oracle for desk-scale instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal

from .errors import InstanceTooLarge, StaleSchedule, StarvedStep, UnknownNode
from .graph import AkgGraph, EdgeKind, Iri, NodeKind, ProcessRun
from .matching import eligible_resources

DURATION_ATTR = "duration_s"


@dataclass(frozen=True)
class StepSpec:
    step: Iri
    duration_s: int
    eligible: frozenset[Iri]
    predecessors: frozenset[Iri]


@dataclass(frozen=True)
class SchedulingInstance:
    steps: tuple[StepSpec, ...]
    resources: frozenset[Iri]
    graph_revision: int | None = None

    def __post_init__(self):
        by_iri = {spec.step for spec in self.steps}
        if len(by_iri) != len(self.steps):
            raise ValueError("duplicate step IRIs")
        for spec in self.steps:
            if spec.duration_s < 1:
                raise ValueError(f"duration of {spec.step} must be >= 1")
            if not spec.eligible:
                raise StarvedStep(f"step {spec.step} has no eligible resource", [spec.step])
            if not spec.eligible <= self.resources:
                raise ValueError(f"eligible set of {spec.step} names unknown resources")
            if not spec.predecessors <= by_iri:
                raise ValueError(f"predecessors of {spec.step} name unknown steps")
        if self._has_cycle():
            raise ValueError("precedence relation is cyclic")

    def _has_cycle(self) -> bool:
        indegree = {spec.step: len(spec.predecessors) for spec in self.steps}
        successors: dict[Iri, list[Iri]] = {spec.step: [] for spec in self.steps}
        for spec in self.steps:
            for pred in spec.predecessors:
                successors[pred].append(spec.step)
        ready = [step for step, deg in indegree.items() if deg == 0]
        seen = 0
        while ready:
            step = ready.pop()
            seen += 1
            for nxt in successors[step]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    ready.append(nxt)
        return seen != len(self.steps)

    def spec(self, step: Iri) -> StepSpec:
        for candidate in self.steps:
            if candidate.step == step:
                return candidate
        raise KeyError(step)


@dataclass(frozen=True)
class SchedulePolicy:
    improve: bool = False
    max_iterations: int = 1000
    seed: int = 0  # reserved; the deterministic policy ignores it

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass(frozen=True)
class Assignment:
    resource: Iri
    start_s: int
    duration_s: int


@dataclass(frozen=True)
class Schedule:
    assignments: dict[Iri, Assignment] = field(default_factory=dict)
    makespan_s: int = 0
    graph_revision: int | None = None

    def to_jsonable(self) -> dict:
        rows = [
            {
                "step": step,
                "resource": a.resource,
                "start_s": a.start_s,
                "duration_s": a.duration_s,
            }
            for step, a in self.assignments.items()
        ]
        rows.sort(key=lambda r: (r["start_s"], r["step"]))
        return {
            "assignments": rows,
            "makespan_s": self.makespan_s,
            "graph_revision": self.graph_revision,
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> Schedule:
        assignments = {
            row["step"]: Assignment(row["resource"], int(row["start_s"]), int(row["duration_s"]))
            for row in data.get("assignments", [])
        }
        revision = data.get("graph_revision")
        return cls(assignments, int(data.get("makespan_s", 0)),
                   None if revision is None else int(revision))


# ---------------------------------------------------------------------------
# Instance construction

def step_duration(graph: AkgGraph, process_class: Iri) -> int:
    """Duration in whole seconds from the class ``duration_s`` attribute.

    Defaults to 1 when absent; fractional values are ceiled, floor 1.
    """
    value = graph.node(process_class).attr(DURATION_ATTR)
    if not isinstance(value, Decimal):
        return 1
    return max(1, math.ceil(value))


def build_instance(graph: AkgGraph, runs: list[ProcessRun]) -> SchedulingInstance:
    """Scheduling instance for the given runs against the current graph.

    Predecessors come from class-level successor edges mapped onto each run
    independently; there is no cross-run precedence. Steps without any
    eligible resource abort with StarvedStep (fix matchmaking first).
    """
    specs: list[StepSpec] = []
    starved: list[Iri] = []
    for run in runs:
        class_of: dict[Iri, Iri] = {}
        for step in run.steps:
            classes = graph.neighbors(step, EdgeKind.INSTANCE_OF)
            if not classes:
                raise UnknownNode(f"step <{step}> has no instanceOf edge")
            class_of[step] = classes[0]
        step_of_class = {cls: step for step, cls in class_of.items()}
        for step in run.steps:
            cls = class_of[step]
            eligible = frozenset(eligible_resources(graph, step).eligible)
            if not eligible:
                starved.append(step)
                continue
            predecessors = frozenset(
                step_of_class[pred_cls]
                for pred_cls in graph.neighbors(cls, EdgeKind.HAS_SUCCESSOR, direction="in")
                if pred_cls in step_of_class
            )
            specs.append(StepSpec(step, step_duration(graph, cls), eligible, predecessors))
    if starved:
        raise StarvedStep(
            "no eligible resource for step(s): " + ", ".join(sorted(starved)), sorted(starved)
        )
    resources = frozenset(graph.nodes_of_kind(NodeKind.RESOURCE))
    return SchedulingInstance(tuple(specs), resources, graph.revision)


# ---------------------------------------------------------------------------
# List scheduling + local search

def schedule(instance: SchedulingInstance, policy: SchedulePolicy = SchedulePolicy()) -> Schedule:
    """Feasible schedule, deterministic for fixed inputs."""
    assign, order = _list_schedule(instance)
    if policy.improve:
        assign, order = _steepest_descent(instance, assign, order, policy.max_iterations)
    assignments, makespan = _decode(instance, assign, order)
    return Schedule(assignments, makespan, instance.graph_revision)


def _list_schedule(instance: SchedulingInstance) -> tuple[dict[Iri, Iri], list[Iri]]:
    """Greedy construction; returns (resource assignment, chronological order)."""
    preds = {spec.step: spec.predecessors for spec in instance.steps}
    by_iri = {spec.step: spec for spec in instance.steps}
    free = {resource: 0 for resource in sorted(instance.resources)}
    finish: dict[Iri, int] = {}
    pending = set(by_iri)
    assign: dict[Iri, Iri] = {}
    order: list[Iri] = []
    while pending:
        ready = [step for step in pending if preds[step] <= finish.keys()]
        choices = []
        for step in ready:
            spec = by_iri[step]
            ready_time = max((finish[p] for p in spec.predecessors), default=0)
            est = min(max(ready_time, free[r]) for r in spec.eligible)
            choices.append((est, -spec.duration_s, step, ready_time))
        est, _, step, ready_time = min(choices)
        spec = by_iri[step]
        resource = min(
            sorted(spec.eligible),
            key=lambda r: (max(ready_time, free[r]) + spec.duration_s, r),
        )
        start = max(ready_time, free[resource])
        free[resource] = start + spec.duration_s
        finish[step] = start + spec.duration_s
        assign[step] = resource
        order.append(step)
        pending.discard(step)
    return assign, order


def _decode(
    instance: SchedulingInstance, assign: dict[Iri, Iri], priority: list[Iri]
) -> tuple[dict[Iri, Assignment], int]:
    """Serial decode of (assignment, priority order) into a semi-active schedule."""
    by_iri = {spec.step: spec for spec in instance.steps}
    position = {step: index for index, step in enumerate(priority)}
    free = {resource: 0 for resource in instance.resources}
    finish: dict[Iri, int] = {}
    pending = set(by_iri)
    assignments: dict[Iri, Assignment] = {}
    while pending:
        ready = [step for step in pending if by_iri[step].predecessors <= finish.keys()]
        step = min(ready, key=position.__getitem__)
        spec = by_iri[step]
        resource = assign[step]
        start = max(
            max((finish[p] for p in spec.predecessors), default=0),
            free[resource],
        )
        free[resource] = start + spec.duration_s
        finish[step] = start + spec.duration_s
        assignments[step] = Assignment(resource, start, spec.duration_s)
        pending.discard(step)
    return assignments, max(finish.values(), default=0)


def _steepest_descent(
    instance: SchedulingInstance,
    assign: dict[Iri, Iri],
    order: list[Iri],
    max_iterations: int,
) -> tuple[dict[Iri, Iri], list[Iri]]:
    """Best-improvement search over reassignments and same-resource swaps."""
    _, current = _decode(instance, assign, order)
    steps_sorted = sorted(spec.step for spec in instance.steps)
    for _ in range(max_iterations):
        best = current
        best_move: tuple[dict[Iri, Iri], list[Iri]] | None = None
        for step in steps_sorted:
            for resource in sorted(instance.spec(step).eligible):
                if resource == assign[step]:
                    continue
                candidate = dict(assign)
                candidate[step] = resource
                _, makespan = _decode(instance, candidate, order)
                if makespan < best:
                    best = makespan
                    best_move = (candidate, order)
        for i in range(len(order)):
            for j in range(i + 1, len(order)):
                if assign[order[i]] != assign[order[j]]:
                    continue
                swapped = list(order)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                _, makespan = _decode(instance, assign, swapped)
                if makespan < best:
                    best = makespan
                    best_move = (assign, swapped)
        if best_move is None:
            break
        assign, order = dict(best_move[0]), list(best_move[1])
        current = best
    return assign, order


# ---------------------------------------------------------------------------
# Exact oracle

_BRUTE_FORCE_LIMIT = 8


def brute_force_schedule(instance: SchedulingInstance) -> Schedule:
    """Provably minimum-makespan schedule via exhaustive search.

    Branches over every (ready step, eligible resource) decision with
    semi-active timetabling; an optimal schedule for a regular objective is
    always reachable this way. Guard-railed to 8 steps.
    """
    if len(instance.steps) > _BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(
            f"{len(instance.steps)} steps exceeds the brute-force limit of {_BRUTE_FORCE_LIMIT}"
        )
    specs = sorted(instance.steps, key=lambda s: s.step)
    index = {spec.step: i for i, spec in enumerate(specs)}
    n = len(specs)
    resources = sorted(instance.resources)
    res_index = {resource: i for i, resource in enumerate(resources)}
    pred_masks = [
        sum(1 << index[p] for p in spec.predecessors) for spec in specs
    ]
    successors: list[list[int]] = [[] for _ in range(n)]
    for i, spec in enumerate(specs):
        for p in spec.predecessors:
            successors[index[p]].append(i)

    # tail(i): duration of the longest successor chain starting at i.
    tails = [0] * n
    for i in sorted(range(n), key=lambda i: -_depth(i, successors)):
        tails[i] = specs[i].duration_s + max((tails[j] for j in successors[i]), default=0)

    full = (1 << n) - 1
    best_makespan = [float("inf")]
    best_plan: list[tuple[tuple[int, int, int], ...] | None] = [None]
    visited: set[tuple] = set()

    def dfs(done_mask: int, free: tuple[int, ...], finishes: tuple[int, ...], plan: tuple) -> None:
        if done_mask == full:
            makespan = max(finishes, default=0)
            if makespan < best_makespan[0]:
                best_makespan[0] = makespan
                best_plan[0] = plan
            return
        current = max((f for i, f in enumerate(finishes) if done_mask >> i & 1), default=0)
        bound = current
        for i in range(n):
            if done_mask >> i & 1:
                continue
            ready_lb = max(
                (finishes[j] for j in range(n) if pred_masks[i] >> j & 1 and done_mask >> j & 1),
                default=0,
            )
            bound = max(bound, ready_lb + tails[i])
        if bound >= best_makespan[0]:
            return
        key = (done_mask, free, finishes)
        if key in visited:
            return
        visited.add(key)
        for i in range(n):
            if done_mask >> i & 1 or (pred_masks[i] & done_mask) != pred_masks[i]:
                continue
            ready_time = max(
                (finishes[j] for j in range(n) if pred_masks[i] >> j & 1), default=0
            )
            for resource in sorted(specs[i].eligible):
                r = res_index[resource]
                start = max(ready_time, free[r])
                end = start + specs[i].duration_s
                next_free = list(free)
                next_free[r] = end
                next_finishes = list(finishes)
                next_finishes[i] = end
                dfs(
                    done_mask | (1 << i),
                    tuple(next_free),
                    tuple(next_finishes),
                    plan + ((i, r, start),),
                )

    dfs(0, tuple([0] * len(resources)), tuple([0] * n), ())
    assignments = {
        specs[i].step: Assignment(resources[r], start, specs[i].duration_s)
        for i, r, start in (best_plan[0] or ())
    }
    # The search always reaches at least one leaf, so the bound is final.
    return Schedule(assignments, int(best_makespan[0]), instance.graph_revision)


def _depth(i: int, successors: list[list[int]]) -> int:
    depth = 0
    frontier = [i]
    seen = set()
    while frontier:
        nxt = []
        for node in frontier:
            for succ in successors[node]:
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        if nxt:
            depth += 1
        frontier = nxt
    return depth


# ---------------------------------------------------------------------------
# Verification and commit

def verify_schedule(instance: SchedulingInstance, sched: Schedule) -> list[str]:
    """Independent feasibility check; returns problems (empty = feasible).

    Reads only the instance and the schedule: eligibility, per-resource
    interval disjointness, precedence, and the makespan equation.
    """
    problems: list[str] = []
    finish: dict[Iri, int] = {}
    for spec in instance.steps:
        assignment = sched.assignments.get(spec.step)
        if assignment is None:
            problems.append(f"step {spec.step} is unassigned")
            continue
        if assignment.resource not in spec.eligible:
            problems.append(f"step {spec.step} assigned to ineligible {assignment.resource}")
        if assignment.start_s < 0:
            problems.append(f"step {spec.step} starts before time 0")
        if assignment.duration_s != spec.duration_s:
            problems.append(f"step {spec.step} duration mismatch")
        finish[spec.step] = assignment.start_s + assignment.duration_s
    extra = set(sched.assignments) - {spec.step for spec in instance.steps}
    for step in sorted(extra):
        problems.append(f"assignment for unknown step {step}")
    by_resource: dict[Iri, list[tuple[int, int, Iri]]] = {}
    for step, assignment in sched.assignments.items():
        by_resource.setdefault(assignment.resource, []).append(
            (assignment.start_s, assignment.start_s + assignment.duration_s, step)
        )
    for resource, intervals in sorted(by_resource.items()):
        intervals.sort()
        for (s1, e1, a), (s2, e2, b) in zip(intervals, intervals[1:]):
            if s2 < e1:
                problems.append(f"overlap on {resource}: {a} and {b}")
    for spec in instance.steps:
        assignment = sched.assignments.get(spec.step)
        if assignment is None:
            continue
        for pred in sorted(spec.predecessors):
            if pred in finish and assignment.start_s < finish[pred]:
                problems.append(f"step {spec.step} starts before predecessor {pred} finishes")
    expected = max(finish.values(), default=0)
    if sched.makespan_s != expected:
        problems.append(f"makespan {sched.makespan_s} != {expected}")
    return problems


def commit_schedule(graph: AkgGraph, sched: Schedule) -> AkgGraph:
    """Write allocations into the graph: allocatedTo edges plus start/duration.

    If the graph revision moved since the schedule was built, each
    assignment is re-checked against current eligibility; a no-longer
    eligible assignment raises StaleSchedule. Replaces prior allocations of
    the same steps, so committing twice is idempotent.
    """
    if sched.graph_revision != graph.revision:
        for step, assignment in sorted(sched.assignments.items()):
            if not graph.has_node(step):
                raise StaleSchedule(f"step <{step}> no longer exists")
            if assignment.resource not in eligible_resources(graph, step).eligible:
                raise StaleSchedule(
                    f"<{assignment.resource}> is no longer eligible for <{step}>"
                )
    for step, assignment in sorted(sched.assignments.items()):
        for previous in graph.neighbors(step, EdgeKind.ALLOCATED_TO):
            if previous != assignment.resource:
                graph.remove_edge(step, EdgeKind.ALLOCATED_TO, previous)
        graph.add_edge(step, EdgeKind.ALLOCATED_TO, assignment.resource)
        graph.set_attr(step, "start_s", assignment.start_s)
        graph.set_attr(step, "duration_s", assignment.duration_s)
    return graph
