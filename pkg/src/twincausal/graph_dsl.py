"""Text formats for causal graphs.

The line-based ``.cg`` format::

    # comment
    var U latent card=3
    U -> T
    T -> Y

Variables referenced only by edges are declared observed and binary. An
explicit ``var`` line overrides such an implicit declaration but keeps the
variable's original position.
"""

from __future__ import annotations

import json
import re

from .causal_graph import CausalGraph, VariableDecl
from .errors import DuplicateDeclaration, GraphSyntaxError

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_NAME_RE = re.compile(rf"^{_NAME}$")
_EDGE_RE = re.compile(rf"^({_NAME})\s*->\s*({_NAME})$")
_CARD_RE = re.compile(r"^card=(\d+)$")

FORMATS = ("dsl", "dot", "json")


def parse_graph(source) -> CausalGraph:
    """Parse ``.cg`` text (a string or an iterable of lines)."""
    lines = source.splitlines() if isinstance(source, str) else list(source)
    order = []
    decls = {}
    explicit = set()
    edges = []
    edge_lines = {}

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "var":
            if len(tokens) < 2 or not _NAME_RE.match(tokens[1]):
                raise GraphSyntaxError(lineno, "expected 'var NAME [latent] [card=K]'")
            name = tokens[1]
            if name in explicit:
                raise DuplicateDeclaration(f"line {lineno}: {name!r} declared twice")
            observed, card = True, 2
            for opt in tokens[2:]:
                m = _CARD_RE.match(opt)
                if opt == "latent":
                    observed = False
                elif m:
                    card = int(m.group(1))
                    if card < 2:
                        raise GraphSyntaxError(lineno, f"cardinality must be >= 2, got {card}")
                else:
                    raise GraphSyntaxError(lineno, f"unknown option {opt!r}")
            explicit.add(name)
            if name not in decls:
                order.append(name)
            decls[name] = VariableDecl(name, observed, card)
            continue

        m = _EDGE_RE.match(line)
        if not m:
            raise GraphSyntaxError(lineno, f"cannot parse {line!r}")
        p, c = m.groups()
        if p == c:
            raise GraphSyntaxError(lineno, f"self-loop on {p!r}")
        if (p, c) in edge_lines:
            raise GraphSyntaxError(lineno, f"duplicate edge {p} -> {c}")
        edge_lines[(p, c)] = lineno
        for n in (p, c):
            if n not in decls:
                order.append(n)
                decls[n] = VariableDecl(n)
        edges.append((p, c))

    return CausalGraph(tuple(decls[n] for n in order), tuple(edges))


def _decl_line(v: VariableDecl) -> str:
    parts = ["var", v.name]
    if not v.observed:
        parts.append("latent")
    if v.cardinality != 2:
        parts.append(f"card={v.cardinality}")
    return " ".join(parts)


def to_dsl(graph: CausalGraph) -> str:
    # Compact form: declare roots and non-default variables, then edges.
    # Falls back to declaring everything when that would reorder variables.
    parents = {c for _, c in graph.edges}
    lines = [
        _decl_line(v)
        for v in graph.variables
        if v.name not in parents or not v.observed or v.cardinality != 2
    ]
    lines += [f"{p} -> {c}" for p, c in graph.edges]
    text = "\n".join(lines) + "\n" if lines else ""
    if parse_graph(text) == graph:
        return text
    lines = [_decl_line(v) for v in graph.variables]
    lines += [f"{p} -> {c}" for p, c in graph.edges]
    return "\n".join(lines) + "\n"


def to_dot(graph: CausalGraph, name: str = "G") -> str:
    out = [f"digraph {name} {{"]
    for v in graph.variables:
        attrs = [] if v.observed else ["style=dashed"]
        if v.cardinality != 2:
            attrs.append(f'xlabel="card={v.cardinality}"')
        out.append(f"  {v.name} [{', '.join(attrs)}];" if attrs else f"  {v.name};")
    out += [f"  {p} -> {c};" for p, c in graph.edges]
    out.append("}")
    return "\n".join(out) + "\n"


def graph_to_dict(graph: CausalGraph) -> dict:
    return {
        "variables": [
            {"name": v.name, "observed": v.observed, "card": v.cardinality}
            for v in graph.variables
        ],
        "edges": [[p, c] for p, c in graph.edges],
    }


def to_json(graph: CausalGraph) -> str:
    return json.dumps(graph_to_dict(graph), separators=(",", ":"))


def graph_from_dict(data: dict) -> CausalGraph:
    decls = tuple(
        VariableDecl(v["name"], bool(v.get("observed", True)), int(v.get("card", 2)))
        for v in data.get("variables", [])
    )
    return CausalGraph(decls, tuple((p, c) for p, c in data.get("edges", [])))


def graph_from_json(text: str) -> CausalGraph:
    return graph_from_dict(json.loads(text))


def emit_graph(graph: CausalGraph, format: str = "dsl") -> str:
    fmt = format.lower()
    if fmt == "dsl":
        return to_dsl(graph)
    if fmt == "dot":
        return to_dot(graph)
    if fmt == "json":
        return to_json(graph)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def read_graph(path) -> CausalGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return graph_from_json(text)
    return parse_graph(text)
