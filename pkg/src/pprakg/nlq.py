"""Natural-language bridge for operators.

The backend only classifies intent and fills slots (which condition,
product, process or node the question is about); every answer is then
computed by the engine and rendered through fixed templates, so the NL
layer can never fabricate causes, schedules or matches. A remote
chat-completion backend is optional; the deterministic keyword backend is
the default and the fallback.
"""

from __future__ import annotations

import json
import re
import urllib.error
import urllib.request

from .engine import Engine
from .errors import BackendUnavailable, EmptyQuestion
from .graph import AkgGraph, Iri, NodeKind, local_name

INTENTS = ("diagnose", "schedule", "match", "lookup", "unknown")

_GUIDANCE = (
    'I could not map that question to the model. Try questions like '
    '"Why did the battery not arrive in time", "schedule 3 runs of CellModule", '
    'or "which resource can unscrew housing bolts".'
)


def _tokens(text: str) -> set[str]:
    return set(re.findall(r"[a-z0-9]+", text.lower()))


def _node_tokens(graph: AkgGraph, iri: Iri) -> set[str]:
    tokens = _tokens(graph.node(iri).label)
    tokens.add(local_name(iri).lower())
    return tokens


def _best_node(graph: AkgGraph, question_tokens: set[str], kind: NodeKind | None) -> Iri | None:
    """Node with the largest token overlap against the question; ties by IRI."""
    candidates = graph.nodes_of_kind(kind) if kind else graph.iris()
    best: tuple[int, Iri] | None = None
    for iri in candidates:
        overlap = len(_node_tokens(graph, iri) & question_tokens)
        if overlap == 0:
            continue
        if best is None or overlap > best[0]:
            best = (overlap, iri)
    return best[1] if best else None


def _first_int(text: str, default: int = 1) -> int:
    match = re.search(r"\b(\d+)\b", text)
    return int(match.group(1)) if match else default


def deterministic_backend(question: str, graph: AkgGraph) -> tuple[str, dict]:
    """Keyword intent rules plus label-overlap slot filling."""
    trimmed = question.strip().lower()
    question_tokens = _tokens(trimmed)
    if trimmed.startswith("why"):
        condition = _best_node(graph, question_tokens, NodeKind.UNDESIRED_CONDITION)
        return ("diagnose", {"condition": condition}) if condition else ("unknown", {})
    if "schedule" in trimmed:
        product = _best_node(graph, question_tokens, NodeKind.PRODUCT_CLASS)
        if product:
            return "schedule", {"product": product, "n": _first_int(question)}
        return "unknown", {}
    if "which resource" in trimmed or "who can" in trimmed:
        step = _best_node(graph, question_tokens, NodeKind.PROCESS_CLASS)
        return ("match", {"step": step}) if step else ("unknown", {})
    node = _best_node(graph, question_tokens, None)
    return ("lookup", {"node": node}) if node else ("unknown", {})


class RemoteNlBackend:
    """Chat-completion client used for intent classification + slot filling.

    Configured by base URL, model name and optional API key. The model sees
    the node catalog and must answer with a single JSON object; anything
    else (network failure, bad JSON, unknown intent) is BackendUnavailable
    so the caller can fall back to the deterministic backend.
    """

    def __init__(self, base_url: str, model: str, api_key: str | None = None, timeout: float = 15.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def __call__(self, question: str, graph: AkgGraph) -> tuple[str, dict]:
        catalog = []
        for kind in (NodeKind.UNDESIRED_CONDITION, NodeKind.PRODUCT_CLASS, NodeKind.PROCESS_CLASS):
            for iri in graph.nodes_of_kind(kind):
                catalog.append(f"{kind.value} {iri} \"{graph.node(iri).label}\"")
        prompt = (
            "Classify the operator question into one intent and fill its slot.\n"
            "Intents: diagnose (slot: condition IRI), schedule (slots: product IRI, n),\n"
            "match (slot: step IRI), lookup (slot: node IRI), unknown (no slots).\n"
            "Answer with one JSON object only, e.g. "
            '{"intent": "diagnose", "condition": "<iri>"}.\n'
            "Known nodes:\n" + "\n".join(catalog) + f"\n\nQuestion: {question}"
        )
        body = json.dumps(
            {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": 0,
            }
        ).encode("utf-8")
        request = urllib.request.Request(
            f"{self.base_url}/chat/completions", data=body, method="POST",
            headers={"Content-Type": "application/json"},
        )
        if self.api_key:
            request.add_header("Authorization", f"Bearer {self.api_key}")
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                payload = json.loads(response.read().decode("utf-8"))
            content = payload["choices"][0]["message"]["content"]
            parsed = json.loads(_extract_json(content))
            intent = parsed.pop("intent")
        except (OSError, urllib.error.URLError, KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailable(f"NL backend failed: {exc}") from exc
        if intent not in INTENTS:
            raise BackendUnavailable(f"NL backend returned unknown intent {intent!r}")
        return intent, parsed


def _extract_json(content: str) -> str:
    start = content.find("{")
    end = content.rfind("}")
    if start < 0 or end < start:
        raise ValueError("no JSON object in completion")
    return content[start : end + 1]


# ---------------------------------------------------------------------------
# Routing

def route_nl_query(engine: Engine, question: str, backend=None, fallback: bool = True) -> dict:
    """Answer a question: classify, run the engine operation, template the text.

    The structured payload is exactly what the corresponding direct endpoint
    returns at the same graph version; the NL layer is not authoritative.
    """
    if not question or not question.strip():
        raise EmptyQuestion("question must be non-empty")
    graph, _ = engine.snapshot()
    chosen = backend or deterministic_backend
    try:
        intent, slots = chosen(question, graph)
    except BackendUnavailable:
        if not fallback:
            raise
        intent, slots = deterministic_backend(question, graph)

    if intent == "diagnose" and slots.get("condition"):
        condition = slots["condition"]
        data = engine.diagnose_payload(
            condition, slots.get("affected_step"), slots.get("observed_on_resource")
        )
        return {
            "intent": "diagnose",
            "answer_text": _render_diagnosis(graph, condition, data),
            "structured": data,
        }
    if intent == "schedule" and slots.get("product"):
        product = slots["product"]
        n = max(1, int(slots.get("n", 1)))
        data = engine.preview_runs_schedule(product, n)
        label = _label(graph, product)
        text = (
            f"Scheduled {n} run(s) of {label}: {len(data['assignments'])} steps, "
            f"makespan {data['makespan_s']} s. Commit via the schedule endpoint to allocate."
        )
        return {"intent": "schedule", "answer_text": text, "structured": data}
    if intent == "match" and slots.get("step"):
        step = slots["step"]
        data = engine.eligible_payload(step)
        label = _label(graph, step)
        if data["eligible"]:
            names = ", ".join(_label(graph, iri) for iri in data["eligible"])
            text = f"Resources able to serve {label}: {names}."
        else:
            text = f"No resource can currently serve {label}."
        return {"intent": "match", "answer_text": text, "structured": data}
    if intent == "lookup" and slots.get("node"):
        node = slots["node"]
        data = engine.lookup_payload(node)
        view = data["node"]
        text = (
            f"{view['label'] or view['iri']} is a {view['kind']} with "
            f"{len(data['out_edges'])} outgoing and {len(data['in_edges'])} incoming links."
        )
        return {"intent": "lookup", "answer_text": text, "structured": data}
    return {"intent": "unknown", "answer_text": _GUIDANCE, "structured": None}


def _label(graph: AkgGraph, iri: Iri) -> str:
    expanded = graph.expand(iri)
    if graph.has_node(expanded):
        label = graph.node(expanded).label
        if label:
            return label
    return local_name(expanded)


def _render_diagnosis(graph: AkgGraph, condition: Iri, data: dict) -> str:
    label = _label(graph, condition)
    causes = data["causes"]
    if not causes:
        return f"No plausible causes are recorded for {label}."
    lines = [f"Plausible causes for {label}:"]
    for rank, cause in enumerate(causes, start=1):
        lines.append(
            f"{rank}. {_label(graph, cause['cause'])} "
            f"[{cause['scope']}] (weight {cause['weight']:g})"
        )
    return "\n".join(lines)
