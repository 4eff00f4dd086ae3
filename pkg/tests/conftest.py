"""Shared fixtures: the demo model, deterministic random generators, and a
tiny HTTP client for service tests."""

from __future__ import annotations

import json
import random
import threading
import urllib.error
import urllib.parse
import urllib.request
from decimal import Decimal

import pytest

from pprakg import fixtures as shipped_fixtures
from pprakg.engine import Engine
from pprakg.errors import CycleIntroduced
from pprakg.graph import EDGE_TYPING, AkgGraph, EdgeKind, NodeKind
from pprakg.scheduling import SchedulingInstance, StepSpec
from pprakg.service import create_service
from pprakg.turtle import load_graph

EX = "http://ex.org/"


@pytest.fixture()
def demo_graph() -> AkgGraph:
    return load_graph(shipped_fixtures.read("demo.ttl"))


@pytest.fixture()
def demo_path(tmp_path):
    target = tmp_path / "demo.ttl"
    target.write_text(shipped_fixtures.read("demo.ttl"), encoding="utf-8")
    return target


# ---------------------------------------------------------------------------
# Random model generator

_LABEL_ALPHABET = 'abc XYZ 0-9 "quote" \\back\t\n\u00e9\u4e2d'
_TEXT_POOL = ["red", "blue", "", "a b", 'with "quotes"', "line\nbreak", "tab\there", "\u00fcml\u00e4ut"]


def _random_label(rng: random.Random) -> str:
    length = rng.randrange(0, 12)
    return "".join(rng.choice(_LABEL_ALPHABET) for _ in range(length))


def _random_attr_value(rng: random.Random):
    roll = rng.random()
    if roll < 0.35:
        whole = rng.randrange(-1000, 1000)
        if rng.random() < 0.5:
            return Decimal(whole)
        return Decimal(f"{whole}.{rng.randrange(0, 100):02d}")
    if roll < 0.6:
        return rng.choice(_TEXT_POOL)
    if roll < 0.75:
        return rng.random() < 0.5
    return frozenset(rng.sample(["x", "y", "z", "w", "v"], rng.randrange(1, 4)))


def random_model(rng: random.Random, max_triples: int = 200) -> AkgGraph:
    """Random valid graph covering every node kind, edge kind and attr type."""
    graph = AkgGraph()
    graph.bind_prefix("ex", EX)
    if rng.random() < 0.3:
        graph.bind_prefix("alt", "urn:alt:")
    triples = 0
    nodes_by_kind: dict[NodeKind, list[str]] = {kind: [] for kind in NodeKind}
    node_count = rng.randrange(2, 26)
    for index in range(node_count):
        kind = rng.choice(list(NodeKind))
        iri = f"{EX}n{index}"
        attrs = {}
        for attr_index in range(rng.randrange(0, 4)):
            attrs[f"a{attr_index}"] = _random_attr_value(rng)
        if rng.random() < 0.2:
            attrs["ref"] = f"<{EX}kind{rng.randrange(3)}>"
        label = _random_label(rng)
        graph.add_node(iri, kind, label, attrs)
        nodes_by_kind[kind].append(iri)
        triples += 1 + bool(label) + len(attrs)
        if triples >= max_triples - 10:
            break
    edge_kinds = list(EdgeKind)
    for _ in range(rng.randrange(0, 40)):
        if triples >= max_triples:
            break
        kind = rng.choice(edge_kinds)
        pairs = [
            (s, o)
            for sk, ok in EDGE_TYPING[kind]
            for s in nodes_by_kind[sk]
            for o in nodes_by_kind[ok]
            if s != o
        ]
        if not pairs:
            continue
        subject, obj = rng.choice(pairs)
        try:
            graph.add_edge(subject, kind, obj)
            triples += 1
        except CycleIntroduced:
            pass
    return graph


# ---------------------------------------------------------------------------
# Random scheduling instances

def random_instance(
    rng: random.Random, max_steps: int = 6, max_resources: int = 3
) -> SchedulingInstance:
    resource_count = rng.randrange(1, max_resources + 1)
    resources = [f"{EX}res{i}" for i in range(resource_count)]
    step_count = rng.randrange(1, max_steps + 1)
    specs = []
    names = [f"{EX}step{i}" for i in range(step_count)]
    for i, name in enumerate(names):
        eligible = frozenset(rng.sample(resources, rng.randrange(1, resource_count + 1)))
        predecessors = frozenset(p for p in names[:i] if rng.random() < 0.35)
        specs.append(StepSpec(name, rng.randrange(1, 10), eligible, predecessors))
    return SchedulingInstance(tuple(specs), frozenset(resources))


# ---------------------------------------------------------------------------
# Service helper

class ServiceClient:
    def __init__(self, base: str):
        self.base = base

    def get(self, path: str) -> tuple[int, dict]:
        request = urllib.request.Request(self.base + path)
        return self._send(request)

    def post(self, path: str, body, raw: bool = False) -> tuple[int, dict]:
        data = body.encode("utf-8") if raw else json.dumps(body).encode("utf-8")
        content_type = "text/turtle" if raw else "application/json"
        request = urllib.request.Request(
            self.base + path, data=data, headers={"Content-Type": content_type}, method="POST"
        )
        return self._send(request)

    @staticmethod
    def _send(request) -> tuple[int, dict]:
        try:
            with urllib.request.urlopen(request, timeout=30) as response:
                return response.status, json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as error:
            return error.code, json.loads(error.read().decode("utf-8"))

    @staticmethod
    def quote(iri: str) -> str:
        return urllib.parse.quote(iri, safe="")


@pytest.fixture()
def demo_service():
    """A running service over the demo fixture; yields (client, engine, server)."""
    engine = Engine(load_graph(shipped_fixtures.read("demo.ttl")))
    server = create_service(engine, ("127.0.0.1", 0))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    client = ServiceClient(f"http://127.0.0.1:{server.server_address[1]}")
    try:
        yield client, engine, server
    finally:
        server.shutdown()
        server.server_close()
