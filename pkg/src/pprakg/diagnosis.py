"""Ranked plausible causes for an observed undesired condition.

A cause is global unless some resource defines it (definesCause), in which
case it is resource-specific and only reported when its defining resource
is operationally relevant: the observed resource if known, else the
affected step's allocated resource, else any resource eligible for the
step, else any resource at all. Ranking uses the vendor-settable ``weight``
attribute (default 0.5), descending, ties broken by IRI.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .errors import KindMismatch
from .graph import AkgGraph, Edge, EdgeKind, Iri, NodeKind
from .matching import eligible_resources

WEIGHT_ATTR = "weight"
DEFAULT_WEIGHT = 0.5

SCOPE_GLOBAL = "global"
SCOPE_RESOURCE = "resource-specific"


@dataclass(frozen=True)
class ObservationContext:
    condition: Iri
    affected_step: Iri | None = None
    observed_on_resource: Iri | None = None

    def to_jsonable(self) -> dict:
        return {
            "condition": self.condition,
            "affected_step": self.affected_step,
            "observed_on_resource": self.observed_on_resource,
        }


@dataclass(frozen=True)
class RankedCause:
    cause: Iri
    scope: str
    weight: float
    evidence: tuple[Edge, ...]

    def to_jsonable(self) -> dict:
        return {
            "cause": self.cause,
            "scope": self.scope,
            "weight": self.weight,
            "evidence": [edge.to_jsonable() for edge in self.evidence],
        }


@dataclass(frozen=True)
class DiagnosisReport:
    context: ObservationContext
    causes: tuple[RankedCause, ...]

    def to_jsonable(self) -> dict:
        return {
            "context": self.context.to_jsonable(),
            "causes": [cause.to_jsonable() for cause in self.causes],
        }


def cause_scope(graph: AkgGraph, cause: Iri) -> tuple[str, tuple[Iri, ...]]:
    """Total classification: (scope, defining resources)."""
    if graph.kind_of(cause) is not NodeKind.PLAUSIBLE_CAUSE:
        raise KindMismatch(f"<{graph.expand(cause)}> is not a PlausibleCause")
    definers = tuple(graph.neighbors(cause, EdgeKind.DEFINES_CAUSE, direction="in"))
    return (SCOPE_RESOURCE, definers) if definers else (SCOPE_GLOBAL, ())


def cause_weight(graph: AkgGraph, cause: Iri) -> float:
    """Ranking weight from the cause node, defaulted and clamped into [0, 1]."""
    value = graph.node(cause).attr(WEIGHT_ATTR)
    if not isinstance(value, Decimal):
        return DEFAULT_WEIGHT
    return min(1.0, max(0.0, float(value)))


def _relevant_resources(graph: AkgGraph, ctx: ObservationContext) -> set[Iri]:
    if ctx.observed_on_resource is not None:
        resource = graph.expand(ctx.observed_on_resource)
        if graph.kind_of(resource) is not NodeKind.RESOURCE:
            raise KindMismatch(f"<{resource}> is not a Resource")
        return {resource}
    if ctx.affected_step is not None:
        step = graph.expand(ctx.affected_step)
        kind = graph.kind_of(step)
        if kind not in (NodeKind.PROCESS_CLASS, NodeKind.PROCESS_STEP_INSTANCE):
            raise KindMismatch(f"<{step}> is not a process or step instance")
        if kind is NodeKind.PROCESS_STEP_INSTANCE:
            allocated = graph.neighbors(step, EdgeKind.ALLOCATED_TO)
            if allocated:
                return set(allocated)
        return set(eligible_resources(graph, step).eligible)
    return set(graph.nodes_of_kind(NodeKind.RESOURCE))


def plausible_causes(graph: AkgGraph, ctx: ObservationContext) -> DiagnosisReport:
    """Causes linked from the condition, scope-filtered and ranked.

    Global causes always apply; resource-specific ones only when their
    defining resource is relevant under the context resolution order
    (observation > allocation > eligibility > all).
    """
    condition = graph.expand(ctx.condition)
    if graph.kind_of(condition) is not NodeKind.UNDESIRED_CONDITION:
        raise KindMismatch(f"<{condition}> is not an UndesiredCondition")
    relevant = _relevant_resources(graph, ctx)

    causes: list[RankedCause] = []
    for cause in graph.neighbors(condition, EdgeKind.HAS_PLAUSIBLE_CAUSE):
        scope, definers = cause_scope(graph, cause)
        link = Edge(condition, EdgeKind.HAS_PLAUSIBLE_CAUSE, cause)
        if scope == SCOPE_GLOBAL:
            causes.append(RankedCause(cause, scope, cause_weight(graph, cause), (link,)))
            continue
        matching = sorted(set(definers) & relevant)
        if matching:
            evidence = (link, Edge(matching[0], EdgeKind.DEFINES_CAUSE, cause))
            causes.append(RankedCause(cause, scope, cause_weight(graph, cause), evidence))
    causes.sort(key=lambda c: (-c.weight, c.cause))
    return DiagnosisReport(
        ObservationContext(
            condition,
            graph.expand(ctx.affected_step) if ctx.affected_step else None,
            graph.expand(ctx.observed_on_resource) if ctx.observed_on_resource else None,
        ),
        tuple(causes),
    )


def condition_catalog(graph: AkgGraph, asset: Iri | None = None) -> list[tuple[Iri, tuple[Iri, ...]]]:
    """All undesired conditions with the assets they affect, sorted by IRI.

    With ``asset`` given, only conditions carrying an affects edge to it.
    """
    if asset is not None:
        asset = graph.expand(asset)
        graph.node(asset)  # raises UnknownNode
    catalog: list[tuple[Iri, tuple[Iri, ...]]] = []
    for condition in graph.nodes_of_kind(NodeKind.UNDESIRED_CONDITION):
        affected = tuple(graph.neighbors(condition, EdgeKind.AFFECTS))
        if asset is None or asset in affected:
            catalog.append((condition, affected))
    return catalog
