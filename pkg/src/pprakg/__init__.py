"""Product-process-resource asset knowledge graph engine.

Models flexible production as a typed graph (products, processes, required
and provided capabilities, resources, undesired conditions and their
plausible causes), matches requirements against resource capabilities,
solves the resulting resource-allocation task, and answers diagnostic
"why" questions. Ships with a Turtle exchange format, rule-based
validation, an HTTP/JSON service with a natural-language bridge, and a CLI.
"""

from .graph import AkgGraph, AttrValue, Edge, EdgeKind, Iri, NodeKind, NodeView, ProcessRun
from .turtle import GraphDelta, ParseError, TurtleParseFailure, load_graph, parse_turtle, serialize_turtle
from .validation import Violation, validate
from .matching import (
    Constraint,
    ImpactReport,
    MatchReport,
    ProvidedCapabilitySpec,
    RequiredCapabilitySpec,
    apply_capability_change,
    capability_matches,
    eligible_resources,
)
from .scheduling import (
    Schedule,
    SchedulePolicy,
    SchedulingInstance,
    StepSpec,
    brute_force_schedule,
    build_instance,
    commit_schedule,
    schedule,
    verify_schedule,
)
from .diagnosis import (
    DiagnosisReport,
    ObservationContext,
    RankedCause,
    condition_catalog,
    plausible_causes,
)

__version__ = "0.1.0"

__all__ = [
    "AkgGraph",
    "AttrValue",
    "Constraint",
    "DiagnosisReport",
    "Edge",
    "EdgeKind",
    "GraphDelta",
    "ImpactReport",
    "Iri",
    "MatchReport",
    "NodeKind",
    "NodeView",
    "ObservationContext",
    "ParseError",
    "ProcessRun",
    "ProvidedCapabilitySpec",
    "RankedCause",
    "RequiredCapabilitySpec",
    "Schedule",
    "SchedulePolicy",
    "SchedulingInstance",
    "StepSpec",
    "TurtleParseFailure",
    "Violation",
    "apply_capability_change",
    "brute_force_schedule",
    "build_instance",
    "capability_matches",
    "commit_schedule",
    "condition_catalog",
    "eligible_resources",
    "load_graph",
    "parse_turtle",
    "plausible_causes",
    "schedule",
    "serialize_turtle",
    "validate",
    "verify_schedule",
]
