"""Capability matchmaking: which resources can serve which process steps.

A required capability carries a kind IRI plus a constraint set; a provided
capability carries a kind IRI plus concrete attribute values. A provision
satisfies a requirement when the kinds are equal and every constraint holds
against the provided attributes (a constraint on a missing attribute is
unsatisfied). In the graph encoding, capability nodes store the kind in the
``capability_kind`` attribute and constraints as ``<attribute>__<op>``
attributes, e.g. ``torque_nm__ge 12``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidConstraint, KindMismatch, MissingEdge, NotAProcess, TypeMismatch, UnknownNode
from .graph import AkgGraph, EdgeKind, Iri, NodeKind, as_attr_value, attr_to_jsonable, attr_variant

KIND_ATTR = "capability_kind"
ORDERING_OPS = ("lt", "le", "gt", "ge")
OPS = ("eq", "ne", "lt", "le", "gt", "ge", "in")


@dataclass(frozen=True)
class Constraint:
    attribute: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in OPS:
            raise InvalidConstraint(f"unknown op {self.op!r}")
        normalized = as_attr_value(self.value)
        object.__setattr__(self, "value", normalized)
        variant = attr_variant(normalized)
        if self.op in ORDERING_OPS and variant != "number":
            raise InvalidConstraint(f"op {self.op!r} needs a numeric value, got {variant}")
        if self.op == "in" and variant != "set":
            raise InvalidConstraint(f"op 'in' needs a set of texts, got {variant}")

    def to_jsonable(self) -> dict:
        return {"attribute": self.attribute, "op": self.op, "value": attr_to_jsonable(self.value)}


@dataclass(frozen=True)
class RequiredCapabilitySpec:
    capability_kind: Iri
    constraints: tuple[Constraint, ...] = ()


@dataclass(frozen=True)
class ProvidedCapabilitySpec:
    capability_kind: Iri
    attributes: dict


def _kind_iri(graph: AkgGraph, node_iri: Iri, attrs: dict) -> Iri:
    raw = attrs.get(KIND_ATTR)
    if raw is None:
        return node_iri  # unmatched by construction; explicit kinds are the norm
    if not isinstance(raw, str):
        raise KindMismatch(f"{KIND_ATTR} of <{node_iri}> must be an IRI text")
    return graph.expand(raw)


def required_spec(graph: AkgGraph, iri: Iri) -> RequiredCapabilitySpec:
    """Read a RequiredCapability node into a matchable spec."""
    node = graph.node(iri)
    if node.kind is not NodeKind.REQUIRED_CAPABILITY:
        raise KindMismatch(f"<{node.iri}> is {node.kind.value}, not RequiredCapability")
    attrs = node.attrs_dict()
    constraints = []
    for name in sorted(attrs):
        if name == KIND_ATTR:
            continue
        attribute, sep, op = name.rpartition("__")
        if sep and attribute and op in OPS:
            constraints.append(Constraint(attribute, op, attrs[name]))
    return RequiredCapabilitySpec(_kind_iri(graph, node.iri, attrs), tuple(constraints))


def provided_spec(graph: AkgGraph, iri: Iri) -> ProvidedCapabilitySpec:
    """Read a ProvidedCapability node into a matchable spec."""
    node = graph.node(iri)
    if node.kind is not NodeKind.PROVIDED_CAPABILITY:
        raise KindMismatch(f"<{node.iri}> is {node.kind.value}, not ProvidedCapability")
    attrs = node.attrs_dict()
    kind = _kind_iri(graph, node.iri, attrs)
    attrs.pop(KIND_ATTR, None)
    return ProvidedCapabilitySpec(kind, attrs)


def _values_equal(a, b) -> bool:
    return attr_variant(a) == attr_variant(b) and a == b


def constraint_satisfied(constraint: Constraint, attributes: dict) -> tuple[bool, object]:
    """(satisfied, witness). Witness is the stored value or None when absent.

    Raises TypeMismatch when an ordering op meets a non-numeric stored value;
    silent false would hide a modeling bug.
    """
    if constraint.attribute not in attributes:
        return False, None
    stored = attributes[constraint.attribute]
    op = constraint.op
    if op == "eq":
        return _values_equal(stored, constraint.value), stored
    if op == "ne":
        return not _values_equal(stored, constraint.value), stored
    if op == "in":
        return isinstance(stored, str) and stored in constraint.value, stored
    if attr_variant(stored) != "number":
        raise TypeMismatch(
            f"constraint {constraint.attribute} {op} compares against "
            f"{attr_variant(stored)} value {stored!r}"
        )
    if op == "lt":
        return stored < constraint.value, stored
    if op == "le":
        return stored <= constraint.value, stored
    if op == "gt":
        return stored > constraint.value, stored
    return stored >= constraint.value, stored


def capability_matches(req: RequiredCapabilitySpec, prov: ProvidedCapabilitySpec) -> bool:
    """True iff the kinds are equal and every constraint holds."""
    if req.capability_kind != prov.capability_kind:
        return False
    return all(constraint_satisfied(c, prov.attributes)[0] for c in req.constraints)


# ---------------------------------------------------------------------------
# Step-level eligibility

@dataclass(frozen=True)
class ConstraintCheck:
    """One row of a match explanation.

    ``constraint`` is None for the capability-kind equality check itself;
    ``via`` names the provided capability the row was evaluated against.
    """

    requirement: Iri
    via: Iri | None
    constraint: Constraint | None
    satisfied: bool
    witness: object | None

    def to_jsonable(self) -> dict:
        return {
            "requirement": self.requirement,
            "via": self.via,
            "constraint": None if self.constraint is None else self.constraint.to_jsonable(),
            "satisfied": self.satisfied,
            "witness": None if self.witness is None else attr_to_jsonable(self.witness),
        }


@dataclass(frozen=True)
class MatchReport:
    step: Iri
    eligible: tuple[Iri, ...]
    explanations: tuple[tuple[Iri, tuple[ConstraintCheck, ...]], ...]  # (resource, checks)

    def to_jsonable(self) -> dict:
        return {
            "step": self.step,
            "eligible": list(self.eligible),
            "explanations": {
                resource: [check.to_jsonable() for check in checks]
                for resource, checks in self.explanations
            },
        }


def step_requirements(graph: AkgGraph, step: Iri) -> list[tuple[Iri, RequiredCapabilitySpec]]:
    """Required-capability specs of a process class or step instance."""
    node = graph.node(step)
    if node.kind is NodeKind.PROCESS_CLASS:
        process = node.iri
    elif node.kind is NodeKind.PROCESS_STEP_INSTANCE:
        classes = graph.neighbors(node.iri, EdgeKind.INSTANCE_OF)
        if not classes:
            raise NotAProcess(f"step instance <{node.iri}> has no class")
        process = classes[0]
    else:
        raise NotAProcess(f"<{node.iri}> is {node.kind.value}, not a process or step instance")
    return [
        (req, required_spec(graph, req))
        for req in graph.neighbors(process, EdgeKind.REQUIRES_CAPABILITY)
    ]


def _resource_capabilities(graph: AkgGraph, resource: Iri) -> list[tuple[Iri, ProvidedCapabilitySpec]]:
    return [
        (cap, provided_spec(graph, cap))
        for cap in graph.neighbors(resource, EdgeKind.PROVIDES_CAPABILITY)
    ]


def _explain_requirement(
    req_iri: Iri,
    req: RequiredCapabilitySpec,
    capabilities: list[tuple[Iri, ProvidedCapabilitySpec]],
) -> tuple[bool, list[ConstraintCheck]]:
    """Evaluate one requirement against a resource's capabilities.

    The explanation shows the best candidate capability: a fully matching
    one if any exists, otherwise the same-kind capability satisfying the
    most constraints, otherwise the kind mismatch itself.
    """
    same_kind = [(iri, spec) for iri, spec in capabilities if spec.capability_kind == req.capability_kind]
    if not same_kind:
        checks = [ConstraintCheck(req_iri, None, None, False, None)]
        checks += [ConstraintCheck(req_iri, None, c, False, None) for c in req.constraints]
        return False, checks

    scored: list[tuple[int, Iri, list[ConstraintCheck]]] = []
    for cap_iri, spec in same_kind:
        checks = [ConstraintCheck(req_iri, cap_iri, None, True, None)]
        hits = 0
        for constraint in req.constraints:
            ok, witness = constraint_satisfied(constraint, spec.attributes)
            hits += ok
            checks.append(ConstraintCheck(req_iri, cap_iri, constraint, ok, witness))
        if hits == len(req.constraints):
            return True, checks
        scored.append((hits, cap_iri, checks))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return False, scored[0][2]


def eligible_resources(graph: AkgGraph, step: Iri) -> MatchReport:
    """Which resources satisfy every requirement of a step.

    A resource qualifies when, for each required capability, at least one of
    its provided capabilities matches. The report explains every considered
    resource constraint by constraint.
    """
    requirements = step_requirements(graph, step)
    eligible: list[Iri] = []
    explanations: list[tuple[Iri, tuple[ConstraintCheck, ...]]] = []
    for resource in graph.nodes_of_kind(NodeKind.RESOURCE):
        capabilities = _resource_capabilities(graph, resource)
        all_ok = True
        checks: list[ConstraintCheck] = []
        for req_iri, req in requirements:
            ok, req_checks = _explain_requirement(req_iri, req, capabilities)
            all_ok = all_ok and ok
            checks.extend(req_checks)
        if all_ok:
            eligible.append(resource)
        explanations.append((resource, tuple(checks)))
    return MatchReport(graph.expand(step), tuple(sorted(eligible)), tuple(explanations))


# ---------------------------------------------------------------------------
# What-if capability changes

@dataclass(frozen=True)
class ImpactEntry:
    step: Iri
    before: tuple[Iri, ...]
    after: tuple[Iri, ...]
    starved: bool

    def to_jsonable(self) -> dict:
        return {
            "step": self.step,
            "before": list(self.before),
            "after": list(self.after),
            "starved": self.starved,
        }


@dataclass(frozen=True)
class ImpactReport:
    resource: Iri
    capability: Iri
    action: str
    changed: tuple[ImpactEntry, ...]

    def to_jsonable(self) -> dict:
        return {
            "resource": self.resource,
            "capability": self.capability,
            "action": self.action,
            "changed": [entry.to_jsonable() for entry in self.changed],
        }


def apply_capability_change(
    graph: AkgGraph, resource: Iri, capability: Iri, action: str
) -> ImpactReport:
    """Add or remove a providesCapability edge and report the fallout.

    The report lists every process class whose eligible-resource set changed,
    flagging steps whose set became empty (starved). Callers needing
    atomicity must hold the writer side of the graph contract.
    """
    if action not in ("add", "remove"):
        raise ValueError(f"action must be 'add' or 'remove', not {action!r}")
    if graph.kind_of(resource) is not NodeKind.RESOURCE:
        raise KindMismatch(f"<{graph.expand(resource)}> is not a Resource")
    if action == "remove" and not graph.has_edge(resource, EdgeKind.PROVIDES_CAPABILITY, capability):
        raise MissingEdge(
            f"<{graph.expand(resource)}> does not provide <{graph.expand(capability)}>"
        )

    steps = graph.nodes_of_kind(NodeKind.PROCESS_CLASS)
    before = {step: eligible_resources(graph, step).eligible for step in steps}
    if action == "add":
        graph.add_edge(resource, EdgeKind.PROVIDES_CAPABILITY, capability)
    else:
        graph.remove_edge(resource, EdgeKind.PROVIDES_CAPABILITY, capability)
    after = {step: eligible_resources(graph, step).eligible for step in steps}

    changed = tuple(
        ImpactEntry(step, before[step], after[step], starved=not after[step])
        for step in steps
        if before[step] != after[step]
    )
    return ImpactReport(graph.expand(resource), graph.expand(capability), action, changed)
