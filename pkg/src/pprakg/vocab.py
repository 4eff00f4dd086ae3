"""Fixed vocabulary mapping graph kinds to the on-disk ``ppr:`` namespace.

This table is normative for the Turtle exchange format: class IRIs carry
node kinds via ``rdf:type`` (``a``), predicate IRIs carry edge kinds, node
attributes live under the ``attr:`` namespace, and ``rdfs:label`` carries
labels. Members of set-valued attributes are typed ``ppr:textSet`` so a
singleton set stays distinguishable from a plain text value.
"""

from __future__ import annotations

from .graph import STANDARD_PREFIXES, EdgeKind, NodeKind

PPR = STANDARD_PREFIXES["ppr"]
ATTR = STANDARD_PREFIXES["attr"]
RDF_TYPE = STANDARD_PREFIXES["rdf"] + "type"
RDFS_LABEL = STANDARD_PREFIXES["rdfs"] + "label"
XSD = STANDARD_PREFIXES["xsd"]

XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_BOOLEAN = XSD + "boolean"
XSD_STRING = XSD + "string"
TEXT_SET_MEMBER = PPR + "textSet"

CLASS_IRIS: dict[NodeKind, str] = {kind: PPR + kind.value for kind in NodeKind}
KIND_BY_CLASS_IRI: dict[str, NodeKind] = {iri: kind for kind, iri in CLASS_IRIS.items()}

PREDICATE_IRIS: dict[EdgeKind, str] = {kind: PPR + kind.value for kind in EdgeKind}
EDGE_BY_PREDICATE_IRI: dict[str, EdgeKind] = {iri: kind for kind, iri in PREDICATE_IRIS.items()}

#: Serialization order for edge predicates (fixed, matches kind declaration order).
EDGE_ORDER: tuple[EdgeKind, ...] = tuple(EdgeKind)
