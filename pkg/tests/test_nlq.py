"""NL bridge: deterministic backend rules, routing, remote backend fallback."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from pprakg import fixtures
from pprakg.engine import Engine, to_json
from pprakg.errors import BackendUnavailable, EmptyQuestion
from pprakg.graph import AkgGraph
from pprakg.nlq import RemoteNlBackend, deterministic_backend, route_nl_query
from pprakg.turtle import load_graph

EV = "http://ev.example/"


@pytest.fixture()
def demo_engine() -> Engine:
    return Engine(load_graph(fixtures.read("demo.ttl")))


def test_why_question_maps_to_diagnose(demo_graph):
    intent, slots = deterministic_backend("why did the battery not arrive in time", demo_graph)
    assert intent == "diagnose"
    assert slots["condition"] == f"{EV}BatteryLate"


def test_schedule_question_with_count(demo_graph):
    intent, slots = deterministic_backend("schedule 2 runs of CellModule", demo_graph)
    assert intent == "schedule"
    assert slots == {"product": f"{EV}CellModule", "n": 2}


def test_match_question(demo_graph):
    intent, slots = deterministic_backend("which resource can unscrew housing bolts?", demo_graph)
    assert intent == "match"
    assert slots["step"] == f"{EV}Unscrew"


def test_lookup_question(demo_graph):
    intent, slots = deterministic_backend("tell me about the transport AGV", demo_graph)
    assert intent == "lookup"
    assert slots["node"] == f"{EV}AGV1"


def test_unknown_on_empty_graph():
    assert deterministic_backend("hello", AkgGraph()) == ("unknown", {})


def test_overlap_ties_break_by_iri(demo_graph):
    # "robot" alone hits both robots' labels equally; the smaller IRI wins.
    intent, slots = deterministic_backend("robot disassembly", demo_graph)
    assert intent == "lookup"
    assert slots["node"] == f"{EV}Robot10"


def test_route_diagnose_answer(demo_engine):
    answer = route_nl_query(demo_engine, "Why did the battery not arrive in time")
    assert answer["intent"] == "diagnose"
    assert "AGV traction battery low" in answer["answer_text"]
    assert answer["structured"] == demo_engine.diagnose_payload(f"{EV}BatteryLate")


def test_route_schedule_matches_direct_flow(demo_engine):
    answer = route_nl_query(demo_engine, "schedule 3 runs of CellModule")
    assert answer["intent"] == "schedule"
    # Same initial state, direct flow: create runs then schedule them.
    direct = Engine(load_graph(fixtures.read("demo.ttl")))
    direct.create_runs(f"{EV}CellModule", 3)
    expected = direct.schedule_payload()
    assert to_json(answer["structured"]) == to_json(expected)
    # The preview committed nothing.
    assert demo_engine.runs() == {}
    assert demo_engine.version == 0


def test_route_match_and_lookup(demo_engine):
    match = route_nl_query(demo_engine, "who can do the extract cell module step")
    assert match["intent"] == "match"
    assert set(match["structured"]["eligible"]) == {f"{EV}Robot10", f"{EV}Robot20"}
    lookup = route_nl_query(demo_engine, "transport AGV")
    assert lookup["intent"] == "lookup"
    assert lookup["structured"]["node"]["iri"] == f"{EV}AGV1"


def test_route_unknown_has_guidance_and_no_payload(demo_engine):
    answer = route_nl_query(demo_engine, "sing me a song")
    assert answer["intent"] == "unknown"
    assert answer["structured"] is None
    assert "Try questions like" in answer["answer_text"]


def test_route_rejects_empty_question(demo_engine):
    with pytest.raises(EmptyQuestion):
        route_nl_query(demo_engine, "   ")


# ---------------------------------------------------------------------------
# Remote backend

class _StubLlm(BaseHTTPRequestHandler):
    response_content = json.dumps({"intent": "diagnose", "condition": f"{EV}BatteryLate"})

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        self.rfile.read(length)
        body = json.dumps(
            {"choices": [{"message": {"content": f"Sure! {self.response_content}"}}]}
        ).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_llm():
    server = HTTPServer(("127.0.0.1", 0), _StubLlm)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def test_remote_backend_parses_completion(stub_llm, demo_graph):
    backend = RemoteNlBackend(stub_llm, "test-model", api_key="k")
    intent, slots = backend("why is the battery late?", demo_graph)
    assert intent == "diagnose"
    assert slots == {"condition": f"{EV}BatteryLate"}


def test_remote_backend_down_raises(demo_graph):
    backend = RemoteNlBackend("http://127.0.0.1:9", "test-model", timeout=0.2)
    with pytest.raises(BackendUnavailable):
        backend("why", demo_graph)


def test_route_falls_back_to_deterministic(demo_engine):
    dead = RemoteNlBackend("http://127.0.0.1:9", "m", timeout=0.2)
    answer = route_nl_query(demo_engine, "Why did the battery not arrive in time", backend=dead)
    assert answer["intent"] == "diagnose"
    with pytest.raises(BackendUnavailable):
        route_nl_query(demo_engine, "why is it late", backend=dead, fallback=False)
