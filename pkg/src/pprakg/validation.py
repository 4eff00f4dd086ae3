"""Rule-based structural validation of an asset graph.

Edge typing is enforced on every insert by the graph itself; these rules
check the softer modeling discipline that a partially built graph is
allowed to break while being edited, plus defense-in-depth re-checks (V3,
V7) for graphs assembled through unchecked paths.

Rules:
    V1  every ProcessClass requires at least one capability        (error)
    V2  every Resource provides at least one capability            (error)
    V3  no edge runs from a ProcessClass to a Resource             (error)
    V4  every UndesiredCondition has at least one plausible cause  (warning)
    V5  a PlausibleCause has at most one defining resource         (error)
    V6  instance nodes have exactly one instanceOf edge            (error)
    V7  hasSuccessor over ProcessClass nodes is acyclic            (error)
    V8  required-capability constraints name attributes that some
        ProvidedCapability carries                                 (warning)
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import AkgGraph, EdgeKind, Iri, NodeKind
from .matching import required_spec, provided_spec

INSTANCE_NODE_KINDS = (NodeKind.PRODUCT_INSTANCE, NodeKind.PROCESS_STEP_INSTANCE)


@dataclass(frozen=True)
class Violation:
    rule_id: str
    severity: str  # "error" | "warning"
    subject: Iri
    message: str

    def to_jsonable(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "severity": self.severity,
            "subject": self.subject,
            "message": self.message,
        }


def validate(graph: AkgGraph) -> list[Violation]:
    """All rule violations, sorted by (rule_id, subject). Pure and total."""
    found: list[Violation] = []

    for iri in graph.nodes_of_kind(NodeKind.PROCESS_CLASS):
        if not graph.neighbors(iri, EdgeKind.REQUIRES_CAPABILITY):
            found.append(Violation("V1", "error", iri, "process class requires no capability"))

    for iri in graph.nodes_of_kind(NodeKind.RESOURCE):
        if not graph.neighbors(iri, EdgeKind.PROVIDES_CAPABILITY):
            found.append(Violation("V2", "error", iri, "resource provides no capability"))

    process_classes = set(graph.nodes_of_kind(NodeKind.PROCESS_CLASS))
    resources = set(graph.nodes_of_kind(NodeKind.RESOURCE))
    for edge in graph.edges():
        if edge.subject in process_classes and edge.object in resources:
            found.append(
                Violation(
                    "V3", "error", edge.subject,
                    f"process class linked directly to resource <{edge.object}> "
                    f"via {edge.kind.value}; assign required capabilities instead",
                )
            )

    for iri in graph.nodes_of_kind(NodeKind.UNDESIRED_CONDITION):
        if not graph.neighbors(iri, EdgeKind.HAS_PLAUSIBLE_CAUSE):
            found.append(Violation("V4", "warning", iri, "condition has no plausible cause"))

    for iri in graph.nodes_of_kind(NodeKind.PLAUSIBLE_CAUSE):
        definers = graph.neighbors(iri, EdgeKind.DEFINES_CAUSE, direction="in")
        if len(definers) > 1:
            found.append(
                Violation(
                    "V5", "error", iri,
                    f"cause scoped to {len(definers)} resources; at most one definer is allowed",
                )
            )

    for kind in INSTANCE_NODE_KINDS:
        for iri in graph.nodes_of_kind(kind):
            classes = graph.neighbors(iri, EdgeKind.INSTANCE_OF)
            if len(classes) != 1:
                found.append(
                    Violation(
                        "V6", "error", iri,
                        f"instance node has {len(classes)} instanceOf edges, expected exactly 1",
                    )
                )

    cycle = _successor_cycle(graph, process_classes)
    if cycle:
        found.append(
            Violation(
                "V7", "error", min(cycle),
                "successor cycle among process classes: " + " -> ".join(sorted(cycle)),
            )
        )

    provided_attrs: set[str] = set()
    for iri in graph.nodes_of_kind(NodeKind.PROVIDED_CAPABILITY):
        provided_attrs.update(provided_spec(graph, iri).attributes)
    for iri in graph.nodes_of_kind(NodeKind.REQUIRED_CAPABILITY):
        spec = required_spec(graph, iri)
        missing = sorted({c.attribute for c in spec.constraints} - provided_attrs)
        if missing:
            found.append(
                Violation(
                    "V8", "warning", iri,
                    "constraints reference attributes no provided capability carries: "
                    + ", ".join(missing),
                )
            )

    return sorted(found, key=lambda v: (v.rule_id, v.subject))


def _successor_cycle(graph: AkgGraph, process_classes: set[Iri]) -> set[Iri]:
    """Nodes on some hasSuccessor cycle (empty when the subgraph is a DAG)."""
    successors = {
        iri: [
            target
            for target in graph.neighbors(iri, EdgeKind.HAS_SUCCESSOR)
            if target in process_classes
        ]
        for iri in process_classes
    }
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {iri: WHITE for iri in process_classes}
    on_cycle: set[Iri] = set()

    def visit(start: Iri) -> None:
        stack: list[tuple[Iri, int]] = [(start, 0)]
        path: list[Iri] = []
        while stack:
            node, child = stack.pop()
            if child == 0:
                color[node] = GRAY
                path.append(node)
            if child < len(successors[node]):
                stack.append((node, child + 1))
                nxt = successors[node][child]
                if color[nxt] == GRAY:
                    on_cycle.update(path[path.index(nxt):])
                elif color[nxt] == WHITE:
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                path.pop()

    for iri in sorted(process_classes):
        if color[iri] == WHITE:
            visit(iri)
    return on_cycle
