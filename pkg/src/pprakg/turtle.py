"""Reader and writer for the Turtle subset used as the on-disk exchange format.

Supported syntax: ``@prefix`` directives, ``a``, predicate lists (``;``),
object lists (``,``), IRIs, prefixed names, comments, and plain/typed
literals (text, integer, decimal, boolean, ``ppr:textSet`` members). Blank
nodes, collections and relative IRIs are out of scope.

Parsing is a two-phase affair: statements are scanned first, then node
kinds are resolved by constraint propagation over the edge-typing table, so
documents may mention a node before (or without) declaring its type as long
as the kind is unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal

from . import vocab
from .errors import PprError
from .graph import (
    EDGE_TYPING,
    STANDARD_PREFIXES,
    AkgGraph,
    EdgeKind,
    Iri,
    NodeKind,
    attr_variant,
    parse_decimal,
)

_IRI_FORBIDDEN = set('<>"{}|^`\\') | set(" \t\r\n")
_PN_PREFIX_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.-]*\Z")
_PN_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
_INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+\Z")


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str
    snippet: str

    def to_jsonable(self) -> dict:
        return {
            "line": self.line,
            "column": self.column,
            "message": self.message,
            "snippet": self.snippet,
        }

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class TurtleParseFailure(PprError):
    """Raised when a document cannot be parsed; carries every collected error."""

    code = "ParseError"

    def __init__(self, errors: list[ParseError]):
        super().__init__("; ".join(str(e) for e in errors[:3]) or "parse failed")
        self.errors = errors


@dataclass
class GraphDelta:
    """Parsed document content, applicable to a graph."""

    prefixes: dict[str, str] = field(default_factory=dict)
    nodes: list[tuple[Iri, NodeKind, str, dict]] = field(default_factory=list)
    edges: list[tuple[Iri, EdgeKind, Iri]] = field(default_factory=list)

    def apply_to(self, graph: AkgGraph) -> None:
        for prefix, base in sorted(self.prefixes.items()):
            graph.bind_prefix(prefix, base)
        for iri, kind, label, attrs in self.nodes:
            graph.add_node(iri, kind, label, attrs)
        for subject, kind, obj in self.edges:
            graph.add_edge(subject, kind, obj)


def load_graph(text: str) -> AkgGraph:
    """Parse a document and return the resulting fresh graph."""
    graph = AkgGraph()
    parse_turtle(text).apply_to(graph)
    return graph


# ---------------------------------------------------------------------------
# Scanner

_DOT, _SEMI, _COMMA, _DTYPE, _A, _PREFIX = "DOT", "SEMI", "COMMA", "DTYPE", "A", "PREFIX"
_IRIREF, _PNAME, _STRING, _NUMBER, _BOOL, _EOF = "IRIREF", "PNAME", "STRING", "NUMBER", "BOOL", "EOF"

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True)
class _Token:
    type: str
    value: object
    line: int
    col: int


class _ScanError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(message)
        self.line = line
        self.col = col
        self.message = message


class _Scanner:
    """Hand-rolled tokenizer; every error path consumes input, so scanning
    always terminates even on garbage."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def next_token(self) -> _Token:
        self._skip_trivia()
        line, col = self.line, self.col
        ch = self._peek()
        if not ch:
            return _Token(_EOF, None, line, col)
        if ch == ".":
            self._advance()
            return _Token(_DOT, ".", line, col)
        if ch == ";":
            self._advance()
            return _Token(_SEMI, ";", line, col)
        if ch == ",":
            self._advance()
            return _Token(_COMMA, ",", line, col)
        if ch == "^":
            self._advance()
            if self._peek() == "^":
                self._advance()
                return _Token(_DTYPE, "^^", line, col)
            raise _ScanError(line, col, "stray '^'")
        if ch == "<":
            return self._scan_iriref(line, col)
        if ch == '"':
            return self._scan_string(line, col)
        if ch == "@":
            return self._scan_directive(line, col)
        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._scan_number(line, col)
        if ch.isalpha() or ch == "_" or ch == ":":
            return self._scan_name(line, col)
        self._advance()
        raise _ScanError(line, col, f"unexpected character {ch!r}")

    def _skip_trivia(self) -> None:
        while True:
            ch = self._peek()
            if ch in " \t\r\n" and ch:
                self._advance()
            elif ch == "#":
                while self._peek() and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _scan_iriref(self, line: int, col: int) -> _Token:
        self._advance()  # <
        chars: list[str] = []
        while True:
            ch = self._peek()
            if ch == ">":
                self._advance()
                return _Token(_IRIREF, "".join(chars), line, col)
            if not ch or ch == "\n":
                raise _ScanError(line, col, "unterminated IRI")
            if ch in _IRI_FORBIDDEN:
                self._advance()
                raise _ScanError(line, col, f"character {ch!r} not allowed in IRI")
            chars.append(ch)
            self._advance()

    def _scan_string(self, line: int, col: int) -> _Token:
        self._advance()  # "
        chars: list[str] = []
        while True:
            ch = self._peek()
            if ch == '"':
                self._advance()
                return _Token(_STRING, "".join(chars), line, col)
            if not ch or ch == "\n":
                raise _ScanError(line, col, "unterminated string")
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                    self._advance()
                elif esc in ("u", "U"):
                    width = 4 if esc == "u" else 8
                    self._advance()
                    digits = self.text[self.pos : self.pos + width]
                    if len(digits) < width or any(c not in "0123456789abcdefABCDEF" for c in digits):
                        raise _ScanError(line, col, "malformed unicode escape")
                    chars.append(chr(int(digits, 16)))
                    self._advance(width)
                else:
                    self._advance()
                    raise _ScanError(line, col, f"unknown escape '\\{esc}'")
            else:
                chars.append(ch)
                self._advance()

    def _scan_directive(self, line: int, col: int) -> _Token:
        word = self._take_while(lambda c: c.isalpha() or c == "@")
        if word == "@prefix":
            return _Token(_PREFIX, word, line, col)
        raise _ScanError(line, col, f"unsupported directive {word!r}")

    def _scan_number(self, line: int, col: int) -> _Token:
        lexical = self._take_while(lambda c: c.isdigit() or c in "+-.")
        lexical = self._give_back_trailing_dots(lexical)
        if _INTEGER_RE.match(lexical) or _DECIMAL_RE.match(lexical):
            return _Token(_NUMBER, lexical, line, col)
        raise _ScanError(line, col, f"malformed number {lexical!r}")

    def _scan_name(self, line: int, col: int) -> _Token:
        word = self._take_while(lambda c: c.isalnum() or c in "_.:-")
        word = self._give_back_trailing_dots(word)
        if ":" not in word:
            if word == "a":
                return _Token(_A, word, line, col)
            if word in ("true", "false"):
                return _Token(_BOOL, word == "true", line, col)
            raise _ScanError(line, col, f"unexpected token {word!r}")
        prefix, _, local = word.partition(":")
        if prefix and not _PN_PREFIX_RE.match(prefix):
            raise _ScanError(line, col, f"malformed prefixed name {word!r}")
        if local and not _PN_LOCAL_RE.match(local):
            raise _ScanError(line, col, f"malformed prefixed name {word!r}")
        return _Token(_PNAME, (prefix, local), line, col)

    def _give_back_trailing_dots(self, word: str) -> str:
        # '.' glued to the end of a token is the statement terminator.
        while word.endswith("."):
            word = word[:-1]
            self.pos -= 1
            self.col -= 1
        return word

    def _take_while(self, predicate) -> str:
        chars: list[str] = []
        while self._peek() and predicate(self._peek()):
            chars.append(self._peek())
            self._advance()
        return "".join(chars)


def _tokenize(text: str) -> tuple[list[_Token], list[_ScanError]]:
    scanner = _Scanner(text)
    tokens: list[_Token] = []
    errors: list[_ScanError] = []
    while True:
        try:
            token = scanner.next_token()
        except _ScanError as exc:
            errors.append(exc)
            continue
        tokens.append(token)
        if token.type == _EOF:
            return tokens, errors


# ---------------------------------------------------------------------------
# Parser

_OBJ_IRI = "iri"
_OBJ_LITERAL = "literal"


@dataclass(frozen=True)
class _Statement:
    subject: Iri
    predicate: Iri  # expanded; rdf:type stands in for 'a'
    obj_type: str
    obj_value: object
    datatype: str | None
    line: int
    col: int


class _SyntaxFault(Exception):
    """Internal: statement abandoned after an error was recorded."""


class _Parser:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.tokens, scan_errors = _tokenize(text)
        self.index = 0
        self.prefixes: dict[str, str] = dict(STANDARD_PREFIXES)
        self.statements: list[_Statement] = []
        self.errors: list[ParseError] = [
            ParseError(e.line, e.col, e.message, self._snippet(e.line)) for e in scan_errors
        ]

    def _snippet(self, line: int) -> str:
        return self.lines[line - 1][:120] if 0 < line <= len(self.lines) else ""

    def _error(self, line: int, col: int, message: str) -> None:
        self.errors.append(ParseError(line, col, message, self._snippet(line)))

    @property
    def token(self) -> _Token:
        return self.tokens[self.index]

    def _bump(self) -> _Token:
        current = self.tokens[self.index]
        if self.index < len(self.tokens) - 1:
            self.index += 1
        return current

    def _resync(self) -> None:
        while self.token.type not in (_DOT, _EOF):
            self._bump()
        if self.token.type == _DOT:
            self._bump()

    def parse(self) -> None:
        while self.token.type != _EOF:
            try:
                if self.token.type == _PREFIX:
                    self._parse_prefix()
                else:
                    self._parse_triples()
            except _SyntaxFault:
                self._resync()

    def _expect(self, token_type: str, what: str) -> _Token:
        if self.token.type != token_type:
            self._error(self.token.line, self.token.col, f"expected {what}")
            raise _SyntaxFault()
        return self._bump()

    def _parse_prefix(self) -> None:
        self._bump()  # @prefix
        if self.token.type != _PNAME or self.token.value[1] != "":
            self._error(self.token.line, self.token.col, "expected prefix name ending in ':'")
            raise _SyntaxFault()
        prefix = self.token.value[0]
        self._bump()
        base = self._expect(_IRIREF, "IRI").value
        self._expect(_DOT, "'.'")
        self.prefixes[prefix] = base

    def _parse_triples(self) -> None:
        subject = self._parse_iri_term("subject")
        while True:
            predicate = self._parse_verb()
            while True:
                self._parse_object(subject, predicate)
                if self.token.type == _COMMA:
                    self._bump()
                    continue
                break
            if self.token.type == _SEMI:
                self._bump()
                if self.token.type == _DOT:  # dangling ';'
                    break
                continue
            break
        self._expect(_DOT, "'.'")

    def _parse_iri_term(self, what: str) -> Iri:
        if self.token.type == _IRIREF:
            return self._bump().value
        if self.token.type == _PNAME:
            return self._expand(self._bump())
        self._error(self.token.line, self.token.col, f"expected IRI or prefixed name as {what}")
        raise _SyntaxFault()

    def _parse_verb(self) -> Iri:
        if self.token.type == _A:
            self._bump()
            return vocab.RDF_TYPE
        return self._parse_iri_term("predicate")

    def _parse_object(self, subject: Iri, predicate: Iri) -> None:
        token = self.token
        if token.type in (_IRIREF, _PNAME):
            obj = self._parse_iri_term("object")
            self.statements.append(
                _Statement(subject, predicate, _OBJ_IRI, obj, None, token.line, token.col)
            )
            return
        if token.type == _STRING:
            self._bump()
            datatype = None
            if self.token.type == _DTYPE:
                self._bump()
                datatype = self._parse_iri_term("datatype")
            self.statements.append(
                _Statement(subject, predicate, _OBJ_LITERAL, token.value, datatype, token.line, token.col)
            )
            return
        if token.type == _NUMBER:
            self._bump()
            datatype = vocab.XSD_INTEGER if _INTEGER_RE.match(token.value) else vocab.XSD_DECIMAL
            self.statements.append(
                _Statement(subject, predicate, _OBJ_LITERAL, token.value, datatype, token.line, token.col)
            )
            return
        if token.type == _BOOL:
            self._bump()
            self.statements.append(
                _Statement(
                    subject, predicate, _OBJ_LITERAL, "true" if token.value else "false",
                    vocab.XSD_BOOLEAN, token.line, token.col,
                )
            )
            return
        self._error(token.line, token.col, "expected IRI or literal as object")
        raise _SyntaxFault()

    def _expand(self, token: _Token) -> Iri:
        prefix, local = token.value
        base = self.prefixes.get(prefix)
        if base is None:
            self._error(token.line, token.col, f"undeclared prefix '{prefix}:'")
            raise _SyntaxFault()
        return base + local


# ---------------------------------------------------------------------------
# Assembly (statements -> delta)

_ALL_KINDS = frozenset(NodeKind)


def parse_turtle(text: str) -> GraphDelta:
    """Parse a document into a graph delta.

    Raises TurtleParseFailure listing every error (with line/column) when the
    document is syntactically broken, uses undeclared prefixes, mixes literal
    types, types an edge impermissibly, or leaves a node's kind undecidable.
    """
    parser = _Parser(text)
    parser.parse()
    delta, semantic_errors = _assemble(parser)
    errors = sorted(parser.errors + semantic_errors, key=lambda e: (e.line, e.column))
    if errors:
        raise TurtleParseFailure(errors)
    return delta


def _assemble(parser: _Parser) -> tuple[GraphDelta, list[ParseError]]:
    errors: list[ParseError] = []

    def error(stmt: _Statement, message: str) -> None:
        errors.append(ParseError(stmt.line, stmt.col, message, parser._snippet(stmt.line)))

    declared: dict[Iri, NodeKind] = {}
    labels: dict[Iri, str] = {}
    edge_statements: list[_Statement] = []
    attr_values: dict[tuple[Iri, str], list[tuple[_Statement, object, bool]]] = {}
    mentioned: dict[Iri, _Statement] = {}

    for stmt in parser.statements:
        mentioned.setdefault(stmt.subject, stmt)
        if stmt.predicate == vocab.RDF_TYPE:
            if stmt.obj_type != _OBJ_IRI:
                error(stmt, "type must be an IRI")
                continue
            kind = vocab.KIND_BY_CLASS_IRI.get(stmt.obj_value)
            if kind is None:
                error(stmt, f"unknown class <{stmt.obj_value}>")
                continue
            if stmt.subject in declared and declared[stmt.subject] is not kind:
                error(stmt, f"conflicting types for <{stmt.subject}>")
                continue
            declared[stmt.subject] = kind
            continue
        if stmt.predicate == vocab.RDFS_LABEL:
            if stmt.obj_type != _OBJ_LITERAL or stmt.datatype not in (None, vocab.XSD_STRING):
                error(stmt, "label must be a string literal")
                continue
            labels[stmt.subject] = stmt.obj_value
            continue
        edge_kind = vocab.EDGE_BY_PREDICATE_IRI.get(stmt.predicate)
        if edge_kind is not None:
            if stmt.obj_type != _OBJ_IRI:
                error(stmt, f"object of {edge_kind.value} must be an IRI")
                continue
            mentioned.setdefault(stmt.obj_value, stmt)
            edge_statements.append(stmt)
            continue
        # Attribute (attr: namespace) or opaque annotation (any other predicate).
        if stmt.predicate.startswith(vocab.ATTR):
            name = stmt.predicate[len(vocab.ATTR):]
            if not _PN_LOCAL_RE.match(name):
                error(stmt, f"invalid attribute name {name!r}")
                continue
        else:
            name = stmt.predicate
            if any(name.startswith(base) for base in STANDARD_PREFIXES.values()):
                error(stmt, f"predicate <{name}> is reserved")
                continue
        if stmt.obj_type == _OBJ_IRI:
            value: object = f"<{stmt.obj_value}>"
            is_set_member = False
            mergeable = False
        else:
            try:
                value, is_set_member = _literal_value(stmt)
            except _LiteralFault as fault:
                error(stmt, fault.message)
                continue
            mergeable = is_set_member or isinstance(value, str)
        attr_values.setdefault((stmt.subject, name), []).append(
            (stmt, value, is_set_member, mergeable)
        )

    kinds, kind_errors = _resolve_kinds(declared, edge_statements, mentioned, parser)
    errors.extend(kind_errors)

    attrs: dict[Iri, dict[str, object]] = {}
    for (subject, name), entries in sorted(attr_values.items()):
        stmt = entries[0][0]
        any_set = any(is_set for _, _, is_set, _ in entries)
        if len(entries) == 1 and not any_set:
            attrs.setdefault(subject, {})[name] = entries[0][1]
        elif all(mergeable for _, _, _, mergeable in entries):
            attrs.setdefault(subject, {})[name] = frozenset(v for _, v, _, _ in entries)
        else:
            error(stmt, f"conflicting values for attribute '{name}'")

    delta = GraphDelta(prefixes=dict(parser.prefixes))
    for iri in sorted(kinds):
        delta.nodes.append((iri, kinds[iri], labels.get(iri, ""), attrs.get(iri, {})))
    edges: set[tuple[Iri, EdgeKind, Iri]] = set()
    for stmt in edge_statements:
        edge_kind = vocab.EDGE_BY_PREDICATE_IRI[stmt.predicate]
        if stmt.subject not in kinds or stmt.obj_value not in kinds:
            continue  # endpoint kind unresolved; error already recorded
        pair = (kinds[stmt.subject], kinds[stmt.obj_value])
        if pair not in EDGE_TYPING[edge_kind]:
            error(stmt, f"{pair[0].value} -{edge_kind.value}-> {pair[1].value} is not permitted")
            continue
        edges.add((stmt.subject, edge_kind, stmt.obj_value))
    delta.edges = sorted(edges, key=lambda e: (e[0], e[1].value, e[2]))
    return delta, errors


class _LiteralFault(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _literal_value(stmt: _Statement) -> tuple[object, bool]:
    """Literal statement -> (attribute value, is-set-member)."""
    lexical = stmt.obj_value
    datatype = stmt.datatype
    if datatype in (None, vocab.XSD_STRING):
        return lexical, False
    if datatype == vocab.TEXT_SET_MEMBER:
        return lexical, True
    if datatype == vocab.XSD_BOOLEAN:
        if lexical not in ("true", "false"):
            raise _LiteralFault(f"literal type mismatch: {lexical!r} is not a boolean")
        return lexical == "true", False
    if datatype == vocab.XSD_INTEGER:
        if not _INTEGER_RE.match(lexical):
            raise _LiteralFault(f"literal type mismatch: {lexical!r} is not an integer")
        return Decimal(lexical), False
    if datatype == vocab.XSD_DECIMAL:
        if not (_DECIMAL_RE.match(lexical) or _INTEGER_RE.match(lexical)):
            raise _LiteralFault(f"literal type mismatch: {lexical!r} is not a decimal")
        return parse_decimal(lexical), False
    raise _LiteralFault(f"unsupported datatype <{datatype}>")


def _resolve_kinds(
    declared: dict[Iri, NodeKind],
    edge_statements: list[_Statement],
    mentioned: dict[Iri, _Statement],
    parser: _Parser,
) -> tuple[dict[Iri, NodeKind], list[ParseError]]:
    """Fix every mentioned node's kind.

    Declared kinds are authoritative; undeclared nodes get the intersection
    of kinds permitted by every edge touching them. A unique survivor is the
    inferred kind; zero or several survivors is an error.
    """
    errors: list[ParseError] = []
    candidates: dict[Iri, frozenset[NodeKind]] = {
        iri: (frozenset({declared[iri]}) if iri in declared else _ALL_KINDS) for iri in mentioned
    }

    changed = True
    while changed:
        changed = False
        for stmt in edge_statements:
            pairs = EDGE_TYPING[vocab.EDGE_BY_PREDICATE_IRI[stmt.predicate]]
            subject, obj = stmt.subject, stmt.obj_value
            live = [
                (sk, ok)
                for sk, ok in pairs
                if sk in candidates[subject] and ok in candidates[obj]
            ]
            if subject not in declared:
                allowed = frozenset(sk for sk, _ in live)
                if allowed != candidates[subject]:
                    candidates[subject] = allowed
                    changed = True
            if obj not in declared:
                allowed = frozenset(ok for _, ok in live)
                if allowed != candidates[obj]:
                    candidates[obj] = allowed
                    changed = True

    kinds: dict[Iri, NodeKind] = {}
    for iri, stmt in mentioned.items():
        options = candidates[iri]
        if len(options) == 1:
            kinds[iri] = next(iter(options))
        elif not options:
            errors.append(
                ParseError(
                    stmt.line, stmt.col,
                    f"no node kind satisfies the edges of <{iri}>", parser._snippet(stmt.line),
                )
            )
        else:
            errors.append(
                ParseError(
                    stmt.line, stmt.col,
                    f"cannot infer kind of <{iri}>; add an explicit type", parser._snippet(stmt.line),
                )
            )
    return kinds, errors


# ---------------------------------------------------------------------------
# Serializer

def serialize_turtle(graph: AkgGraph) -> str:
    """Deterministic Turtle text for a graph; re-parses to an equal graph.

    Prefixes are sorted, subjects sorted by expanded IRI, predicates emitted
    in fixed order (type, label, edge kinds, attributes by name), objects
    sorted within each predicate.
    """
    out: list[str] = []
    for prefix, base in sorted(graph.prefixes.items()):
        out.append(f"@prefix {prefix}: <{base}> .")
    out.append("")

    compact = _Compactor(graph.prefixes)
    edges = graph.edges()
    for iri in graph.iris():
        node = graph.node(iri)
        parts: list[str] = [f"a {compact(vocab.CLASS_IRIS[node.kind])}"]
        if node.label:
            parts.append(f"{compact(vocab.RDFS_LABEL)} {_quote(node.label)}")
        outgoing = [e for e in edges if e.subject == iri]
        for kind in vocab.EDGE_ORDER:
            objects = sorted(e.object for e in outgoing if e.kind is kind)
            if objects:
                rendered = ", ".join(compact(obj) for obj in objects)
                parts.append(f"{compact(vocab.PREDICATE_IRIS[kind])} {rendered}")
        for name, value in node.attrs:
            predicate = compact(vocab.ATTR + name) if _PN_LOCAL_RE.match(name) else compact(name)
            parts.append(f"{predicate} {_render_value(value, compact)}")
        body = " ;\n    ".join(parts)
        out.append(f"{compact(iri)} {body} .")
        out.append("")
    return "\n".join(out)


class _Compactor:
    """IRI -> shortest prefixed form, preferring the longest declared base."""

    def __init__(self, prefixes: dict[str, str]):
        self.table = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def __call__(self, iri: Iri) -> str:
        for prefix, base in self.table:
            if iri.startswith(base):
                local = iri[len(base):]
                if _PN_LOCAL_RE.match(local):
                    return f"{prefix}:{local}"
        return f"<{iri}>"


def _quote(text: str) -> str:
    chars: list[str] = ['"']
    for ch in text:
        if ch == "\\":
            chars.append("\\\\")
        elif ch == '"':
            chars.append('\\"')
        elif ch == "\n":
            chars.append("\\n")
        elif ch == "\r":
            chars.append("\\r")
        elif ch == "\t":
            chars.append("\\t")
        elif ord(ch) < 0x20:
            chars.append(f"\\u{ord(ch):04X}")
        else:
            chars.append(ch)
    chars.append('"')
    return "".join(chars)


def _render_value(value, compact: _Compactor) -> str:
    variant = attr_variant(value)
    if variant == "boolean":
        return "true" if value else "false"
    if variant == "number":
        return format(value, "f")
    if variant == "set":
        datatype = compact(vocab.TEXT_SET_MEMBER)
        return ", ".join(f"{_quote(member)}^^{datatype}" for member in sorted(value))
    # Text; angle-bracketed texts are IRI references (capability kinds, annotations).
    if value.startswith("<") and value.endswith(">") and not (_IRI_FORBIDDEN & set(value[1:-1])):
        return compact(value[1:-1])
    return _quote(value)
