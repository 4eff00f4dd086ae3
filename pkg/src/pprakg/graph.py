"""In-memory typed graph of products, processes, capabilities, resources and conditions.

Class-level nodes (product/process definitions, required capabilities) act as
templates; resources and provided capabilities live at instance level, and
production runs expand the class-level process definition into fresh step
instances. Edge typing is enforced on every insert; the successor relation
over process classes is kept acyclic at all times.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum

from .errors import (
    CycleIntroduced,
    DuplicateIri,
    EmptyProcessDefinition,
    InvalidAttr,
    MissingEdge,
    NotAProductClass,
    TypeViolation,
    UnknownNode,
)

Iri = str


class NodeKind(str, Enum):
    PRODUCT_CLASS = "ProductClass"
    PROCESS_CLASS = "ProcessClass"
    REQUIRED_CAPABILITY = "RequiredCapability"
    PROVIDED_CAPABILITY = "ProvidedCapability"
    RESOURCE = "Resource"
    UNDESIRED_CONDITION = "UndesiredCondition"
    PLAUSIBLE_CAUSE = "PlausibleCause"
    PRODUCT_INSTANCE = "ProductInstance"
    PROCESS_STEP_INSTANCE = "ProcessStepInstance"


class EdgeKind(str, Enum):
    HAS_INPUT = "hasInput"
    HAS_OUTPUT = "hasOutput"
    HAS_SUCCESSOR = "hasSuccessor"
    REQUIRES_CAPABILITY = "requiresCapability"
    PROVIDES_CAPABILITY = "providesCapability"
    HAS_UNDESIRED_CONDITION = "hasUndesiredCondition"
    HAS_PLAUSIBLE_CAUSE = "hasPlausibleCause"
    DEFINES_CAUSE = "definesCause"
    AFFECTS = "affects"
    INSTANCE_OF = "instanceOf"
    ALLOCATED_TO = "allocatedTo"


_K = NodeKind

#: Kinds whose nodes are templates shared by all runs.
CLASS_LEVEL_KINDS = frozenset({_K.PRODUCT_CLASS, _K.PROCESS_CLASS, _K.REQUIRED_CAPABILITY})

#: Assets a condition may be attached to.
_ASSET_KINDS = (_K.PRODUCT_CLASS, _K.PROCESS_CLASS, _K.RESOURCE, _K.REQUIRED_CAPABILITY)

#: Permitted (subject kind, object kind) pairs per edge kind.
EDGE_TYPING: dict[EdgeKind, frozenset[tuple[NodeKind, NodeKind]]] = {
    EdgeKind.HAS_INPUT: frozenset(
        {(_K.PROCESS_CLASS, _K.PRODUCT_CLASS), (_K.PROCESS_STEP_INSTANCE, _K.PRODUCT_INSTANCE)}
    ),
    EdgeKind.HAS_OUTPUT: frozenset(
        {(_K.PROCESS_CLASS, _K.PRODUCT_CLASS), (_K.PROCESS_STEP_INSTANCE, _K.PRODUCT_INSTANCE)}
    ),
    EdgeKind.HAS_SUCCESSOR: frozenset({(_K.PROCESS_CLASS, _K.PROCESS_CLASS)}),
    EdgeKind.REQUIRES_CAPABILITY: frozenset({(_K.PROCESS_CLASS, _K.REQUIRED_CAPABILITY)}),
    EdgeKind.PROVIDES_CAPABILITY: frozenset({(_K.RESOURCE, _K.PROVIDED_CAPABILITY)}),
    EdgeKind.HAS_UNDESIRED_CONDITION: frozenset(
        (kind, _K.UNDESIRED_CONDITION) for kind in _ASSET_KINDS
    ),
    EdgeKind.HAS_PLAUSIBLE_CAUSE: frozenset({(_K.UNDESIRED_CONDITION, _K.PLAUSIBLE_CAUSE)}),
    EdgeKind.DEFINES_CAUSE: frozenset({(_K.RESOURCE, _K.PLAUSIBLE_CAUSE)}),
    EdgeKind.AFFECTS: frozenset((_K.UNDESIRED_CONDITION, kind) for kind in _ASSET_KINDS),
    EdgeKind.INSTANCE_OF: frozenset(
        {(_K.PRODUCT_INSTANCE, _K.PRODUCT_CLASS), (_K.PROCESS_STEP_INSTANCE, _K.PROCESS_CLASS)}
    ),
    EdgeKind.ALLOCATED_TO: frozenset({(_K.PROCESS_STEP_INSTANCE, _K.RESOURCE)}),
}

# ---------------------------------------------------------------------------
# Attribute values

#: number | text | boolean | set-of-texts
AttrValue = "Decimal | str | bool | frozenset[str]"

_SIMPLE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")
_IRI_FORBIDDEN = set('<>"{}|^`\\') | set(" \t\r\n")


def as_attr_value(value) -> Decimal | str | bool | frozenset:
    """Normalize a Python value into the closed attribute value space.

    Numbers become Decimal (exact lexical form preserved), text stays str,
    booleans stay bool, iterables of str become frozensets. Anything else
    raises InvalidAttr.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InvalidAttr(f"non-finite number {value!r}")
        return Decimal(str(value))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise InvalidAttr(f"non-finite number {value!r}")
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, (set, frozenset, list, tuple)):
        items = list(value)
        if not items:
            raise InvalidAttr("empty text set")
        if not all(isinstance(item, str) for item in items):
            raise InvalidAttr("text sets may only contain strings")
        return frozenset(items)
    raise InvalidAttr(f"unsupported attribute value {value!r}")


def attr_variant(value) -> str:
    """Tag of an already-normalized attribute value: number/text/boolean/set."""
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, Decimal):
        return "number"
    if isinstance(value, str):
        return "text"
    if isinstance(value, frozenset):
        return "set"
    raise InvalidAttr(f"unnormalized attribute value {value!r}")


def attr_to_jsonable(value):
    """JSON-friendly view of an attribute value (sets sorted, numbers native)."""
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, Decimal):
        as_int = int(value)
        return as_int if value == as_int else float(value)
    if isinstance(value, frozenset):
        return sorted(value)
    raise InvalidAttr(f"unnormalized attribute value {value!r}")


def _check_attr_name(name: str) -> None:
    if _SIMPLE_NAME_RE.match(name):
        return
    # Expanded IRIs are allowed as annotation-attribute names, but not under
    # the reserved namespaces (they would alias type/label/edge predicates).
    if ":" in name and not (_IRI_FORBIDDEN & set(name)):
        if any(name.startswith(base) for base in STANDARD_PREFIXES.values()):
            raise InvalidAttr(f"attribute name {name!r} falls in a reserved namespace")
        return
    raise InvalidAttr(f"invalid attribute name {name!r}")


def _check_iri(iri: str) -> None:
    if not iri or (_IRI_FORBIDDEN & set(iri)):
        raise InvalidAttr(f"invalid IRI {iri!r}")


def local_name(iri: Iri) -> str:
    """Last path segment of an IRI, used for display and minted step names."""
    for sep in ("#", "/", ":"):
        if sep in iri:
            tail = iri.rstrip(sep).rsplit(sep, 1)[-1]
            if tail:
                return tail
    return iri


# ---------------------------------------------------------------------------
# Records

@dataclass(frozen=True)
class Edge:
    subject: Iri
    kind: EdgeKind
    object: Iri

    def to_jsonable(self) -> dict:
        return {"subject": self.subject, "kind": self.kind.value, "object": self.object}


@dataclass(frozen=True)
class NodeView:
    """Immutable snapshot of one node, safe to hand across threads."""

    iri: Iri
    kind: NodeKind
    label: str
    attrs: tuple[tuple[str, object], ...]

    def attr(self, name: str, default=None):
        for key, value in self.attrs:
            if key == name:
                return value
        return default

    def attrs_dict(self) -> dict:
        return dict(self.attrs)

    def to_jsonable(self) -> dict:
        return {
            "iri": self.iri,
            "kind": self.kind.value,
            "label": self.label,
            "attrs": {name: attr_to_jsonable(value) for name, value in self.attrs},
        }


@dataclass(frozen=True)
class ProcessRun:
    """One instance-level expansion of a product's process definition."""

    run_id: str
    product_class: Iri
    steps: tuple[Iri, ...]
    created_at: int

    def to_jsonable(self) -> dict:
        return {
            "run_id": self.run_id,
            "product_class": self.product_class,
            "steps": list(self.steps),
            "created_at": self.created_at,
        }


class _Node:
    __slots__ = ("kind", "label", "attrs")

    def __init__(self, kind: NodeKind, label: str, attrs: dict):
        self.kind = kind
        self.label = label
        self.attrs = attrs


# ---------------------------------------------------------------------------
# Graph

#: Prefixes seeded into every graph; the vocabulary module relies on them.
STANDARD_PREFIXES: dict[str, str] = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "ppr": "https://pprakg.dev/vocab#",
    "attr": "https://pprakg.dev/attr#",
}

_PREFIXED_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_.-]*)?:([A-Za-z_][A-Za-z0-9_-]*)$")


class AkgGraph:
    """Single source of truth for one production model.

    Mutations require exclusive access (single writer); every read returns
    fresh or immutable values, so a published graph can be shared freely as
    a snapshot. ``revision`` counts effective mutations and serves as the
    staleness token for schedule commits.
    """

    def __init__(self):
        self.prefixes: dict[str, str] = dict(STANDARD_PREFIXES)
        self._nodes: dict[Iri, _Node] = {}
        self._edges: set[Edge] = set()
        self._out: dict[Iri, set[Edge]] = {}
        self._in: dict[Iri, set[Edge]] = {}
        self.revision = 0
        self._run_seq = 0

    # -- identity ----------------------------------------------------------

    def bind_prefix(self, prefix: str, base: str) -> None:
        _check_iri(base)
        if self.prefixes.get(prefix) != base:
            self.prefixes[prefix] = base
            self.revision += 1

    def expand(self, name: str) -> Iri:
        """Expand a prefixed name against the prefix table.

        Full IRIs (and ``<iri>`` forms) pass through; unknown prefixes are
        left alone so that ordinary colon-bearing IRIs stay usable.
        """
        if name.startswith("<") and name.endswith(">"):
            return name[1:-1]
        match = _PREFIXED_RE.match(name)
        if match:
            prefix = match.group(1) or ""
            base = self.prefixes.get(prefix)
            if base is not None:
                return base + match.group(2)
        return name

    # -- nodes ---------------------------------------------------------------

    def add_node(self, iri: Iri, kind: NodeKind, label: str = "", attrs: dict | None = None) -> NodeView:
        iri = self.expand(iri)
        _check_iri(iri)
        if iri in self._nodes:
            raise DuplicateIri(f"node {iri} already present")
        if not isinstance(kind, NodeKind):
            raise TypeViolation(f"{kind!r} is not a node kind")
        normalized: dict = {}
        for name, value in (attrs or {}).items():
            _check_attr_name(name)
            normalized[name] = as_attr_value(value)
        self._nodes[iri] = _Node(kind, label, normalized)
        self._out.setdefault(iri, set())
        self._in.setdefault(iri, set())
        self.revision += 1
        return self.node(iri)

    def has_node(self, iri: Iri) -> bool:
        return self.expand(iri) in self._nodes

    def node(self, iri: Iri) -> NodeView:
        iri = self.expand(iri)
        record = self._nodes.get(iri)
        if record is None:
            raise UnknownNode(f"unknown node {iri}")
        return NodeView(iri, record.kind, record.label, tuple(sorted(record.attrs.items())))

    def kind_of(self, iri: Iri) -> NodeKind:
        iri = self.expand(iri)
        record = self._nodes.get(iri)
        if record is None:
            raise UnknownNode(f"unknown node {iri}")
        return record.kind

    def iris(self) -> list[Iri]:
        return sorted(self._nodes)

    def nodes_of_kind(self, kind: NodeKind) -> list[Iri]:
        return sorted(iri for iri, rec in self._nodes.items() if rec.kind == kind)

    def set_attr(self, iri: Iri, name: str, value) -> None:
        iri = self.expand(iri)
        record = self._nodes.get(iri)
        if record is None:
            raise UnknownNode(f"unknown node {iri}")
        _check_attr_name(name)
        normalized = as_attr_value(value)
        if name in record.attrs:
            current = record.attrs[name]
            if attr_variant(current) == attr_variant(normalized) and current == normalized:
                return
        record.attrs[name] = normalized
        self.revision += 1

    def set_label(self, iri: Iri, label: str) -> None:
        iri = self.expand(iri)
        record = self._nodes.get(iri)
        if record is None:
            raise UnknownNode(f"unknown node {iri}")
        if record.label != label:
            record.label = label
            self.revision += 1

    # -- edges ---------------------------------------------------------------

    def add_edge(self, subject: Iri, kind: EdgeKind, obj: Iri) -> Edge:
        subject = self.expand(subject)
        obj = self.expand(obj)
        if subject not in self._nodes:
            raise UnknownNode(f"unknown subject {subject}")
        if obj not in self._nodes:
            raise UnknownNode(f"unknown object {obj}")
        if not isinstance(kind, EdgeKind):
            raise TypeViolation(f"{kind!r} is not an edge kind")
        pair = (self._nodes[subject].kind, self._nodes[obj].kind)
        if pair not in EDGE_TYPING[kind]:
            raise TypeViolation(
                f"{pair[0].value} -{kind.value}-> {pair[1].value} is not permitted"
            )
        edge = Edge(subject, kind, obj)
        if edge in self._edges:
            return edge
        if kind is EdgeKind.HAS_SUCCESSOR and self._would_cycle(subject, obj):
            raise CycleIntroduced(f"{subject} -> {obj} closes a successor cycle")
        self._insert(edge)
        self.revision += 1
        return edge

    def add_edge_unchecked(self, subject: Iri, kind: EdgeKind, obj: Iri) -> Edge:
        """Insert bypassing typing and acyclicity checks.

        Exists so validation fixtures and repair tooling can represent
        ill-typed graphs; endpoints must still be present.
        """
        subject = self.expand(subject)
        obj = self.expand(obj)
        if subject not in self._nodes or obj not in self._nodes:
            raise UnknownNode("edge endpoints must exist")
        edge = Edge(subject, kind, obj)
        if edge not in self._edges:
            self._insert(edge)
            self.revision += 1
        return edge

    def remove_edge(self, subject: Iri, kind: EdgeKind, obj: Iri) -> None:
        edge = Edge(self.expand(subject), kind, self.expand(obj))
        if edge not in self._edges:
            raise MissingEdge(f"no edge {edge.subject} -{kind.value}-> {edge.object}")
        self._edges.discard(edge)
        self._out[edge.subject].discard(edge)
        self._in[edge.object].discard(edge)
        self.revision += 1

    def has_edge(self, subject: Iri, kind: EdgeKind, obj: Iri) -> bool:
        return Edge(self.expand(subject), kind, self.expand(obj)) in self._edges

    def edges(self) -> list[Edge]:
        return sorted(self._edges, key=lambda e: (e.subject, e.kind.value, e.object))

    def neighbors(self, iri: Iri, kind: EdgeKind, direction: str = "out") -> list[Iri]:
        """Adjacent node IRIs over one edge kind, sorted lexicographically."""
        iri = self.expand(iri)
        if iri not in self._nodes:
            raise UnknownNode(f"unknown node {iri}")
        if direction == "out":
            found = (e.object for e in self._out[iri] if e.kind is kind)
        elif direction == "in":
            found = (e.subject for e in self._in[iri] if e.kind is kind)
        else:
            raise ValueError(f"direction must be 'out' or 'in', not {direction!r}")
        return sorted(found)

    def _insert(self, edge: Edge) -> None:
        self._edges.add(edge)
        self._out.setdefault(edge.subject, set()).add(edge)
        self._in.setdefault(edge.object, set()).add(edge)

    def _would_cycle(self, subject: Iri, obj: Iri) -> bool:
        # Adding subject->obj cycles iff subject is successor-reachable from obj.
        stack = [obj]
        seen = set()
        while stack:
            current = stack.pop()
            if current == subject:
                return True
            if current in seen:
                continue
            seen.add(current)
            stack.extend(
                e.object for e in self._out.get(current, ()) if e.kind is EdgeKind.HAS_SUCCESSOR
            )
        return False

    # -- runs ----------------------------------------------------------------

    def process_chain(self, product_class: Iri) -> list[Iri]:
        """Process classes of a product's definition in topological order.

        The definition is the closure over hasInput/hasOutput/hasSuccessor
        edges (followed in both directions) starting from the product class.
        """
        start = self.expand(product_class)
        if start not in self._nodes:
            raise UnknownNode(f"unknown node {start}")
        if self._nodes[start].kind is not NodeKind.PRODUCT_CLASS:
            raise NotAProductClass(f"{start} is {self._nodes[start].kind.value}")
        closure_kinds = (EdgeKind.HAS_INPUT, EdgeKind.HAS_OUTPUT, EdgeKind.HAS_SUCCESSOR)
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            adjacent = [e.object for e in self._out.get(current, ()) if e.kind in closure_kinds]
            adjacent += [e.subject for e in self._in.get(current, ()) if e.kind in closure_kinds]
            for nxt in adjacent:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        processes = {iri for iri in seen if self._nodes[iri].kind is NodeKind.PROCESS_CLASS}
        if not processes:
            raise EmptyProcessDefinition(f"{start} has no process definition")
        # Kahn's algorithm over the successor edges restricted to the closure;
        # the global DAG invariant guarantees termination.
        indegree = {iri: 0 for iri in processes}
        for iri in processes:
            for e in self._out[iri]:
                if e.kind is EdgeKind.HAS_SUCCESSOR and e.object in processes:
                    indegree[e.object] += 1
        ready = sorted(iri for iri, deg in indegree.items() if deg == 0)
        order: list[Iri] = []
        while ready:
            current = ready.pop(0)
            order.append(current)
            inserted = False
            for e in sorted(self._out[current], key=lambda e: e.object):
                if e.kind is EdgeKind.HAS_SUCCESSOR and e.object in processes:
                    indegree[e.object] -= 1
                    if indegree[e.object] == 0:
                        ready.append(e.object)
                        inserted = True
            if inserted:
                ready.sort()
        return order

    def instantiate_run(self, product_class: Iri, n: int) -> list[ProcessRun]:
        """Create ``n`` parallel runs of a product's process definition.

        Each run mints fresh step-instance nodes linked to their classes via
        instanceOf; class-level content is left untouched.
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        chain = self.process_chain(product_class)
        product = self.expand(product_class)
        created_at = int(time.time())
        runs: list[ProcessRun] = []
        for _ in range(n):
            self._run_seq += 1
            run_id = f"r{self._run_seq:04d}"
            steps: list[Iri] = []
            minted: set[str] = set()
            for class_iri in chain:
                base = local_name(class_iri)
                name = base
                suffix = 1
                while name in minted:
                    suffix += 1
                    name = f"{base}-{suffix}"
                minted.add(name)
                step_iri = f"urn:ppr:run:{run_id}:{name}"
                class_label = self._nodes[class_iri].label
                label = f"{class_label or base} ({run_id})"
                self.add_node(step_iri, NodeKind.PROCESS_STEP_INSTANCE, label)
                self.add_edge(step_iri, EdgeKind.INSTANCE_OF, class_iri)
                steps.append(step_iri)
            runs.append(ProcessRun(run_id, product, tuple(steps), created_at))
        return runs

    # -- bulk ------------------------------------------------------------------

    def clone(self) -> AkgGraph:
        twin = AkgGraph()
        twin.prefixes = dict(self.prefixes)
        twin._nodes = {
            iri: _Node(rec.kind, rec.label, dict(rec.attrs)) for iri, rec in self._nodes.items()
        }
        twin._edges = set(self._edges)
        twin._out = {iri: set(edges) for iri, edges in self._out.items()}
        twin._in = {iri: set(edges) for iri, edges in self._in.items()}
        twin.revision = self.revision
        twin._run_seq = self._run_seq
        return twin

    def subgraph_by_kind(self, kinds: frozenset[NodeKind] | set[NodeKind]) -> AkgGraph:
        """New graph holding only nodes of the given kinds and edges among them."""
        sub = AkgGraph()
        sub.prefixes = dict(self.prefixes)
        for iri, rec in self._nodes.items():
            if rec.kind in kinds:
                sub._nodes[iri] = _Node(rec.kind, rec.label, dict(rec.attrs))
                sub._out.setdefault(iri, set())
                sub._in.setdefault(iri, set())
        for edge in self._edges:
            if edge.subject in sub._nodes and edge.object in sub._nodes:
                sub._insert(edge)
        return sub

    def to_jsonable(self) -> dict:
        return {
            "prefixes": dict(sorted(self.prefixes.items())),
            "nodes": [self.node(iri).to_jsonable() for iri in self.iris()],
            "edges": [edge.to_jsonable() for edge in self.edges()],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, AkgGraph):
            return NotImplemented
        if self.prefixes != other.prefixes or self._edges != other._edges:
            return False
        if self._nodes.keys() != other._nodes.keys():
            return False
        for iri, rec in self._nodes.items():
            twin = other._nodes[iri]
            if rec.kind is not twin.kind or rec.label != twin.label:
                return False
            if not _attrs_equal(rec.attrs, twin.attrs):
                return False
        return True

    __hash__ = None  # mutable

    def describe(self) -> str:
        return f"{len(self._nodes)} nodes, {len(self._edges)} edges (rev {self.revision})"


def _attrs_equal(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    for name, value in a.items():
        twin = b[name]
        if attr_variant(value) != attr_variant(twin) or value != twin:
            return False
    return True


def parse_decimal(text: str) -> Decimal:
    """Decimal from its lexical form; raises InvalidAttr on junk."""
    try:
        value = Decimal(text)
    except InvalidOperation as exc:
        raise InvalidAttr(f"not a number: {text!r}") from exc
    if not value.is_finite():
        raise InvalidAttr(f"non-finite number: {text!r}")
    return value
