"""Matchmaking: constraint semantics, eligibility, what-if impact."""

import random
from decimal import Decimal

import pytest

from conftest import EX
from pprakg.errors import InvalidConstraint, MissingEdge, NotAProcess, TypeMismatch, UnknownNode
from pprakg.graph import AkgGraph, EdgeKind, NodeKind, attr_variant
from pprakg.matching import (
    Constraint,
    ProvidedCapabilitySpec,
    RequiredCapabilitySpec,
    apply_capability_change,
    capability_matches,
    eligible_resources,
    required_spec,
)
from pprakg.turtle import load_graph

TORQUE = f"{EX}capTorque"
GRIP = f"{EX}capGrip"


# ---------------------------------------------------------------------------
# capability_matches

def test_kind_only_match():
    req = RequiredCapabilitySpec(TORQUE)
    assert capability_matches(req, ProvidedCapabilitySpec(TORQUE, {}))
    assert not capability_matches(req, ProvidedCapabilitySpec(GRIP, {}))


def test_numeric_threshold():
    req = RequiredCapabilitySpec(TORQUE, (Constraint("torque_nm", "ge", 12),))
    assert not capability_matches(req, ProvidedCapabilitySpec(TORQUE, {"torque_nm": Decimal(10)}))
    assert capability_matches(req, ProvidedCapabilitySpec(TORQUE, {"torque_nm": Decimal(20)}))


def test_missing_attribute_is_unsatisfied():
    req = RequiredCapabilitySpec(TORQUE, (Constraint("torque_nm", "ge", 12),))
    assert not capability_matches(req, ProvidedCapabilitySpec(TORQUE, {}))
    req_ne = RequiredCapabilitySpec(TORQUE, (Constraint("mode", "ne", "manual"),))
    assert not capability_matches(req_ne, ProvidedCapabilitySpec(TORQUE, {}))


def test_ordering_op_on_text_raises():
    req = RequiredCapabilitySpec(TORQUE, (Constraint("torque_nm", "ge", 12),))
    with pytest.raises(TypeMismatch):
        capability_matches(req, ProvidedCapabilitySpec(TORQUE, {"torque_nm": "strong"}))


def test_constraint_invariants_enforced():
    with pytest.raises(InvalidConstraint):
        Constraint("x", "ge", "text")
    with pytest.raises(InvalidConstraint):
        Constraint("x", "in", 5)
    with pytest.raises(InvalidConstraint):
        Constraint("x", "between", 5)


def test_in_and_equality_semantics():
    req = RequiredCapabilitySpec(TORQUE, (Constraint("mode", "in", {"auto", "hybrid"}),))
    assert capability_matches(req, ProvidedCapabilitySpec(TORQUE, {"mode": "auto"}))
    assert not capability_matches(req, ProvidedCapabilitySpec(TORQUE, {"mode": "manual"}))
    # eq across variants is false, not an error; bool is not number
    req_eq = RequiredCapabilitySpec(TORQUE, (Constraint("flag", "eq", 1),))
    assert not capability_matches(req_eq, ProvidedCapabilitySpec(TORQUE, {"flag": True}))


# ---------------------------------------------------------------------------
# Randomized oracle comparison

_ATTR_TYPES = {"n0": "number", "n1": "number", "n2": "number", "t0": "text", "t1": "text", "b0": "boolean"}


def _random_value(rng, variant):
    if variant == "number":
        return Decimal(rng.randrange(-20, 21))
    if variant == "text":
        return rng.choice(["red", "blue", "green", ""])
    return rng.random() < 0.5


def random_required(rng) -> RequiredCapabilitySpec:
    kind = rng.choice([TORQUE, GRIP])
    constraints = []
    for _ in range(rng.randrange(0, 4)):
        attr = rng.choice(list(_ATTR_TYPES))
        variant = _ATTR_TYPES[attr]
        if variant == "number":
            op = rng.choice(["eq", "ne", "lt", "le", "gt", "ge"])
            value = _random_value(rng, "number")
        elif variant == "text":
            op = rng.choice(["eq", "ne", "in"])
            value = frozenset(rng.sample(["red", "blue", "green"], 2)) if op == "in" else _random_value(rng, "text")
        else:
            op = rng.choice(["eq", "ne"])
            value = _random_value(rng, "boolean")
        constraints.append(Constraint(attr, op, value))
    return RequiredCapabilitySpec(kind, tuple(constraints))


def random_provided(rng) -> ProvidedCapabilitySpec:
    kind = rng.choice([TORQUE, GRIP])
    attributes = {}
    for attr, variant in _ATTR_TYPES.items():
        if rng.random() < 0.6:
            attributes[attr] = _random_value(rng, variant)
    return ProvidedCapabilitySpec(kind, attributes)


def oracle_matches(req: RequiredCapabilitySpec, prov: ProvidedCapabilitySpec) -> bool:
    """Brute-force evaluator, checking each constraint independently."""
    if req.capability_kind != prov.capability_kind:
        return False
    for c in req.constraints:
        if c.attribute not in prov.attributes:
            return False
        stored = prov.attributes[c.attribute]
        same_type = attr_variant(stored) == attr_variant(c.value)
        if c.op == "eq":
            ok = same_type and stored == c.value
        elif c.op == "ne":
            ok = not (same_type and stored == c.value)
        elif c.op == "in":
            ok = isinstance(stored, str) and stored in c.value
        elif c.op == "lt":
            ok = stored < c.value
        elif c.op == "le":
            ok = stored <= c.value
        elif c.op == "gt":
            ok = stored > c.value
        else:
            ok = stored >= c.value
        if not ok:
            return False
    return True


def test_capability_matches_agrees_with_oracle_on_random_pairs():
    rng = random.Random(42)
    for _ in range(600):
        req, prov = random_required(rng), random_provided(rng)
        assert capability_matches(req, prov) == oracle_matches(req, prov)


# ---------------------------------------------------------------------------
# eligible_resources

def _capability_node(g, iri, kind, **attrs):
    g.add_node(iri, NodeKind.PROVIDED_CAPABILITY, "", {"capability_kind": f"<{kind}>", **attrs})


def test_step_with_zero_requirements_matches_all_resources():
    g = AkgGraph()
    g.bind_prefix("ex", EX)
    g.add_node("ex:Step", NodeKind.PROCESS_CLASS)
    g.add_node("ex:R1", NodeKind.RESOURCE)
    g.add_node("ex:R2", NodeKind.RESOURCE)
    report = eligible_resources(g, "ex:Step")
    assert report.eligible == (f"{EX}R1", f"{EX}R2")


def test_demo_unscrew_step_matches_only_strong_robot(demo_graph):
    report = eligible_resources(demo_graph, "ex:Unscrew")
    assert report.eligible == ("http://ev.example/Robot20",)
    by_resource = dict(report.explanations)
    weak = by_resource["http://ev.example/Robot10"]
    torque_rows = [c for c in weak if c.constraint is not None]
    assert any(not row.satisfied and row.witness == Decimal(10) for row in torque_rows)


def test_step_instances_inherit_class_requirements(demo_graph):
    runs = demo_graph.instantiate_run("ex:CellModule", 1)
    unscrew_steps = [s for s in runs[0].steps if s.endswith("Unscrew")]
    report = eligible_resources(demo_graph, unscrew_steps[0])
    assert report.eligible == ("http://ev.example/Robot20",)


def test_eligible_rejects_non_process(demo_graph):
    with pytest.raises(NotAProcess):
        eligible_resources(demo_graph, "ex:Robot20")
    with pytest.raises(UnknownNode):
        eligible_resources(demo_graph, "ex:nothing")


def _random_match_graph(rng) -> AkgGraph:
    g = AkgGraph()
    g.bind_prefix("ex", EX)
    kinds = [TORQUE, GRIP, f"{EX}capMove"]
    resource_count = rng.randrange(1, 6)
    step_count = rng.randrange(1, 6)
    for r in range(resource_count):
        g.add_node(f"ex:R{r}", NodeKind.RESOURCE)
        for c in range(rng.randrange(0, 3)):
            spec = random_provided(rng)
            iri = f"ex:R{r}cap{c}"
            _capability_node(g, iri, rng.choice(kinds), **spec.attributes)
            g.add_edge(f"ex:R{r}", EdgeKind.PROVIDES_CAPABILITY, iri)
    for s in range(step_count):
        g.add_node(f"ex:S{s}", NodeKind.PROCESS_CLASS)
        for c in range(rng.randrange(0, 3)):
            req = random_required(rng)
            attrs = {"capability_kind": f"<{rng.choice(kinds)}>"}
            for constraint in req.constraints:
                attrs[f"{constraint.attribute}__{constraint.op}"] = constraint.value
            iri = f"ex:S{s}req{c}"
            g.add_node(iri, NodeKind.REQUIRED_CAPABILITY, "", attrs)
            g.add_edge(f"ex:S{s}", EdgeKind.REQUIRES_CAPABILITY, iri)
    return g


def _oracle_eligible(g: AkgGraph, step: str) -> list[str]:
    """Enumerates every (requirement, capability) pair with the oracle matcher."""
    from pprakg.matching import provided_spec

    requirements = [
        required_spec(g, req) for req in g.neighbors(step, EdgeKind.REQUIRES_CAPABILITY)
    ]
    winners = []
    for resource in g.nodes_of_kind(NodeKind.RESOURCE):
        provisions = [
            provided_spec(g, cap)
            for cap in g.neighbors(resource, EdgeKind.PROVIDES_CAPABILITY)
        ]
        if all(any(oracle_matches(req, prov) for prov in provisions) for req in requirements):
            winners.append(resource)
    return sorted(winners)


def test_eligible_resources_agrees_with_enumeration_oracle():
    rng = random.Random(99)
    for _ in range(60):
        g = _random_match_graph(rng)
        for step in g.nodes_of_kind(NodeKind.PROCESS_CLASS):
            assert list(eligible_resources(g, step).eligible) == _oracle_eligible(g, step)


def test_eligibility_ignores_declaration_order():
    rng = random.Random(1234)
    g = _random_match_graph(rng)
    text_nodes = [(iri, g.kind_of(iri)) for iri in g.iris()]
    shuffled = AkgGraph()
    shuffled.bind_prefix("ex", EX)
    order = list(text_nodes)
    random.Random(5).shuffle(order)
    for iri, kind in order:
        view = g.node(iri)
        shuffled.add_node(iri, kind, view.label, view.attrs_dict())
    for edge in g.edges():
        shuffled.add_edge(edge.subject, edge.kind, edge.object)
    for step in g.nodes_of_kind(NodeKind.PROCESS_CLASS):
        assert eligible_resources(g, step).eligible == eligible_resources(shuffled, step).eligible


def test_explanation_soundness():
    rng = random.Random(31)
    for _ in range(40):
        g = _random_match_graph(rng)
        for step in g.nodes_of_kind(NodeKind.PROCESS_CLASS):
            report = eligible_resources(g, step)
            for resource, checks in report.explanations:
                all_satisfied = all(check.satisfied for check in checks)
                assert (resource in report.eligible) == all_satisfied


def test_monotonicity_of_capability_addition():
    rng = random.Random(77)
    for _ in range(30):
        g = _random_match_graph(rng)
        steps = g.nodes_of_kind(NodeKind.PROCESS_CLASS)
        resources = g.nodes_of_kind(NodeKind.RESOURCE)
        if not resources:
            continue
        before = {step: set(eligible_resources(g, step).eligible) for step in steps}
        target = rng.choice(resources)
        spec = random_provided(rng)
        _capability_node(g, "ex:extraCap", rng.choice([TORQUE, GRIP]), **spec.attributes)
        g.add_edge(target, EdgeKind.PROVIDES_CAPABILITY, "ex:extraCap")
        for step in steps:
            after = set(eligible_resources(g, step).eligible)
            assert before[step] <= after
        # and removal never grows any set
        g.remove_edge(target, EdgeKind.PROVIDES_CAPABILITY, "ex:extraCap")
        for step in steps:
            assert set(eligible_resources(g, step).eligible) == before[step]


# ---------------------------------------------------------------------------
# apply_capability_change

def test_remove_torque_capability_starves_unscrew(demo_graph):
    report = apply_capability_change(demo_graph, "ex:Robot20", "ex:Robot20Torque", "remove")
    starved = [entry for entry in report.changed if entry.starved]
    assert [entry.step for entry in starved] == ["http://ev.example/Unscrew"]
    assert starved[0].before == ("http://ev.example/Robot20",)
    assert starved[0].after == ()


def test_add_then_remove_is_involution(demo_graph):
    snapshot = demo_graph.clone()
    added = apply_capability_change(demo_graph, "ex:Robot10", "ex:Robot20Torque", "add")
    removed = apply_capability_change(demo_graph, "ex:Robot10", "ex:Robot20Torque", "remove")
    assert demo_graph == snapshot
    assert [e.step for e in added.changed] == [e.step for e in removed.changed]
    for fwd, back in zip(added.changed, removed.changed):
        assert fwd.before == back.after and fwd.after == back.before


def test_change_on_irrelevant_capability_has_empty_impact(demo_graph):
    demo_graph.add_node("ex:SparePaint", NodeKind.PROVIDED_CAPABILITY, "",
                        {"capability_kind": "<http://ev.example/capPaint>"})
    report = apply_capability_change(demo_graph, "ex:Robot10", "ex:SparePaint", "add")
    assert report.changed == ()


def test_capability_change_errors(demo_graph):
    with pytest.raises(MissingEdge):
        apply_capability_change(demo_graph, "ex:Robot10", "ex:Robot20Torque", "remove")
    with pytest.raises(UnknownNode):
        apply_capability_change(demo_graph, "ex:Robot10", "ex:Nothing", "add")
    with pytest.raises(ValueError):
        apply_capability_change(demo_graph, "ex:Robot10", "ex:Robot20Torque", "toggle")
