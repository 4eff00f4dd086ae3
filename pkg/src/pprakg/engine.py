"""Shared-state wrapper around one graph: single writer, snapshot readers.

Mutations run on a private clone under the writer lock and are published by
swapping the graph reference, so concurrent readers always see a fully
consistent snapshot and never block. The engine also builds the JSON
payloads used verbatim by the HTTP service, the CLI and the NL bridge,
which keeps those surfaces byte-identical.
"""

from __future__ import annotations

import json
import threading

from .diagnosis import ObservationContext, condition_catalog, plausible_causes
from .errors import UnknownNode
from .graph import AkgGraph, Iri, ProcessRun
from .matching import apply_capability_change, eligible_resources
from .scheduling import Schedule, SchedulePolicy, build_instance, commit_schedule
from .scheduling import schedule as solve_schedule
from .turtle import load_graph


def to_json(data) -> str:
    """The one JSON encoder for externally visible payloads."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


class Engine:
    def __init__(self, graph: AkgGraph | None = None):
        self._lock = threading.Lock()
        self._graph = graph if graph is not None else AkgGraph()
        self._runs: dict[str, ProcessRun] = {}
        self._version = 0

    # -- snapshot discipline -------------------------------------------------

    def snapshot(self) -> tuple[AkgGraph, int]:
        """Current (graph, version); the graph must be treated as read-only."""
        with self._lock:
            return self._graph, self._version

    @property
    def version(self) -> int:
        return self._version

    def _mutate(self, fn):
        """Run fn on a clone, publish on success, bump the version."""
        with self._lock:
            clone = self._graph.clone()
            result = fn(clone)
            self._graph = clone
            self._version += 1
            return result

    # -- payload operations ----------------------------------------------------

    def graph_payload(self) -> dict:
        graph, _ = self.snapshot()
        return graph.to_jsonable()

    def ingest_ttl(self, text: str) -> dict:
        """Replace the in-memory graph with the parsed document."""
        replacement = load_graph(text)
        with self._lock:
            self._graph = replacement
            self._runs = {}
            self._version += 1
        return {
            "nodes": len(replacement.iris()),
            "edges": len(replacement.edges()),
        }

    def validate_payload(self) -> list[dict]:
        from .validation import validate

        graph, _ = self.snapshot()
        return [violation.to_jsonable() for violation in validate(graph)]

    def eligible_payload(self, step: Iri) -> dict:
        graph, _ = self.snapshot()
        return eligible_resources(graph, step).to_jsonable()

    def create_runs(self, product: Iri, n: int) -> dict:
        with self._lock:
            clone = self._graph.clone()
            runs = clone.instantiate_run(product, n)
            self._graph = clone
            self._runs = {**self._runs, **{run.run_id: run for run in runs}}
            self._version += 1
        return {"runs": [run.to_jsonable() for run in runs]}

    def runs(self) -> dict[str, ProcessRun]:
        with self._lock:
            return dict(self._runs)

    def schedule_payload(
        self, run_ids: list[str] | None = None, policy: SchedulePolicy = SchedulePolicy()
    ) -> dict:
        """Schedule a preview for the given runs (all registered when omitted)."""
        graph, _ = self.snapshot()
        registry = self.runs()
        if run_ids is None:
            selected = [registry[run_id] for run_id in sorted(registry)]
        else:
            missing = [run_id for run_id in run_ids if run_id not in registry]
            if missing:
                raise UnknownNode("unknown run id(s): " + ", ".join(sorted(missing)))
            selected = [registry[run_id] for run_id in run_ids]
        instance = build_instance(graph, selected)
        return solve_schedule(instance, policy).to_jsonable()

    def preview_runs_schedule(self, product: Iri, n: int, policy: SchedulePolicy = SchedulePolicy()) -> dict:
        """Schedule n fresh runs on a throwaway clone (nothing is committed).

        Mints the same run ids a subsequent create_runs would, so the payload
        matches the direct runs+schedule flow from the same initial state.
        """
        graph, _ = self.snapshot()
        scratch = graph.clone()
        runs = scratch.instantiate_run(product, n)
        instance = build_instance(scratch, runs)
        return solve_schedule(instance, policy).to_jsonable()

    def commit_payload(self, schedule_data: dict) -> dict:
        sched = Schedule.from_jsonable(schedule_data)

        def fn(graph: AkgGraph):
            commit_schedule(graph, sched)
            return len(sched.assignments)

        committed = self._mutate(fn)
        return {"committed_steps": committed, "makespan_s": sched.makespan_s}

    def capability_payload(self, resource: Iri, capability: Iri, action: str) -> dict:
        def fn(graph: AkgGraph):
            return apply_capability_change(graph, resource, capability, action)

        return self._mutate(fn).to_jsonable()

    def conditions_payload(self, asset: Iri | None = None) -> list[dict]:
        graph, _ = self.snapshot()
        return [
            {"condition": condition, "affects": list(affected)}
            for condition, affected in condition_catalog(graph, asset)
        ]

    def diagnose_payload(
        self,
        condition: Iri,
        affected_step: Iri | None = None,
        observed_on_resource: Iri | None = None,
    ) -> dict:
        graph, _ = self.snapshot()
        ctx = ObservationContext(condition, affected_step, observed_on_resource)
        return plausible_causes(graph, ctx).to_jsonable()

    def lookup_payload(self, node: Iri) -> dict:
        graph, _ = self.snapshot()
        view = graph.node(node)
        edges = graph.edges()
        return {
            "node": view.to_jsonable(),
            "out_edges": [e.to_jsonable() for e in edges if e.subject == view.iri],
            "in_edges": [e.to_jsonable() for e in edges if e.object == view.iri],
        }
