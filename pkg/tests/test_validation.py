"""Rule validator: seeded faults, purity, JSON shape."""

from pprakg import fixtures
from pprakg.graph import AkgGraph, EdgeKind, NodeKind
from pprakg.turtle import load_graph
from pprakg.validation import validate


def test_clean_demo_fixture_has_zero_violations(demo_graph):
    assert validate(demo_graph) == []


def _assert_single(graph: AkgGraph, rule_id: str):
    violations = validate(graph)
    assert len(violations) == 1, f"expected one violation, got {violations}"
    assert violations[0].rule_id == rule_id
    assert graph.has_node(violations[0].subject)
    return violations[0]


def test_v1_process_without_required_capability():
    violation = _assert_single(load_graph(fixtures.read("bad_v1.ttl")), "V1")
    assert violation.severity == "error"


def test_v2_resource_without_capability():
    violation = _assert_single(load_graph(fixtures.read("bad_v2.ttl")), "V2")
    assert violation.severity == "error"
    assert violation.subject.endswith("Robot99")


def seeded_v3_graph() -> AkgGraph:
    """ProcessClass linked straight to a Resource; only expressible through
    the unchecked-insert hook because edge typing forbids it."""
    g = AkgGraph()
    g.bind_prefix("ex", "http://ex.org/")
    g.add_node("ex:P", NodeKind.PROCESS_CLASS, "Process")
    g.add_node("ex:RC", NodeKind.REQUIRED_CAPABILITY, "Req")
    g.add_edge("ex:P", EdgeKind.REQUIRES_CAPABILITY, "ex:RC")
    g.add_node("ex:R", NodeKind.RESOURCE, "Robot")
    g.add_node("ex:PC", NodeKind.PROVIDED_CAPABILITY, "Cap")
    g.add_edge("ex:R", EdgeKind.PROVIDES_CAPABILITY, "ex:PC")
    g.add_edge_unchecked("ex:P", EdgeKind.ALLOCATED_TO, "ex:R")
    return g


def test_v3_process_to_resource_edge():
    violation = _assert_single(seeded_v3_graph(), "V3")
    assert violation.severity == "error"
    assert "assign required capabilities" in violation.message


def test_v4_condition_without_causes():
    violation = _assert_single(load_graph(fixtures.read("bad_v4.ttl")), "V4")
    assert violation.severity == "warning"


def test_v5_cause_with_two_definers():
    violation = _assert_single(load_graph(fixtures.read("bad_v5.ttl")), "V5")
    assert violation.severity == "error"
    assert violation.subject.endswith("Overheat")


def test_v6_instance_without_class():
    violation = _assert_single(load_graph(fixtures.read("bad_v6.ttl")), "V6")
    assert violation.severity == "error"


def seeded_v7_graph() -> AkgGraph:
    """Successor cycle; only expressible through the unchecked-insert hook."""
    g = AkgGraph()
    g.bind_prefix("ex", "http://ex.org/")
    for name in ("P1", "P2"):
        g.add_node(f"ex:{name}", NodeKind.PROCESS_CLASS, name)
        g.add_node(f"ex:RC{name}", NodeKind.REQUIRED_CAPABILITY)
        g.add_edge(f"ex:{name}", EdgeKind.REQUIRES_CAPABILITY, f"ex:RC{name}")
    g.add_edge("ex:P1", EdgeKind.HAS_SUCCESSOR, "ex:P2")
    g.add_edge_unchecked("ex:P2", EdgeKind.HAS_SUCCESSOR, "ex:P1")
    return g


def test_v7_successor_cycle():
    violation = _assert_single(seeded_v7_graph(), "V7")
    assert violation.severity == "error"
    assert "cycle" in violation.message


def test_v8_constraint_attribute_nobody_provides():
    violation = _assert_single(load_graph(fixtures.read("bad_v8.ttl")), "V8")
    assert violation.severity == "warning"
    assert "rpm" in violation.message


def test_validate_pure_after_mutate_and_revert(demo_graph):
    baseline = validate(demo_graph)
    demo_graph.add_node("ex:Extra", NodeKind.RESOURCE, "Extra robot")
    demo_graph.add_node("ex:ExtraCap", NodeKind.PROVIDED_CAPABILITY)
    demo_graph.add_edge("ex:Extra", EdgeKind.PROVIDES_CAPABILITY, "ex:ExtraCap")
    assert validate(demo_graph) == baseline  # the addition is rule-clean
    demo_graph.remove_edge("ex:Extra", EdgeKind.PROVIDES_CAPABILITY, "ex:ExtraCap")
    mutated = validate(demo_graph)
    assert [v.rule_id for v in mutated] == ["V2"]
    demo_graph.add_edge("ex:Extra", EdgeKind.PROVIDES_CAPABILITY, "ex:ExtraCap")
    assert validate(demo_graph) == baseline


def test_violations_sorted_and_jsonable():
    g = AkgGraph()
    g.bind_prefix("ex", "http://ex.org/")
    g.add_node("ex:Z", NodeKind.PROCESS_CLASS)
    g.add_node("ex:A", NodeKind.PROCESS_CLASS)
    g.add_node("ex:R", NodeKind.RESOURCE)
    violations = validate(g)
    keys = [(v.rule_id, v.subject) for v in violations]
    assert keys == sorted(keys)
    payload = violations[0].to_jsonable()
    assert set(payload) == {"rule_id", "severity", "subject", "message"}
