"""Twin PGM construction: a plate over the observational graph, a starred
post-intervention copy, and one parameter node per variable shared between
the two copies for every variable except the treatment."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from .causal_graph import CausalGraph, RemoveIncoming, VariableDecl, mutilate
from .errors import StateOutOfRange
from .graph_dsl import graph_to_dict

STAR = "*"

# Role templates for the textbook graphs; t is always the treatment.
_TEMPLATES = (
    {("g", "t"), ("g", "y"), ("t", "y")},              # confounded
    {("t", "g"), ("g", "y"), ("t", "y")},              # mediated
    {("g", "t"), ("g", "y"), ("t", "l"), ("l", "y")},  # front door
)
_LETTERS = {"t": "phi", "g": "gamma", "y": "psi", "l": "lambda"}
_GREEK = {"phi": "&phi;", "gamma": "&gamma;", "psi": "&psi;", "lambda": "&lambda;"}


def starred(name: str) -> str:
    return name + STAR


@dataclass(frozen=True)
class ParameterNode:
    name: str
    variable: str
    clients: tuple[str, ...]
    shape: tuple[int, int]  # (card of variable, product of parent cards)


@dataclass(frozen=True)
class TwinPgm:
    pre_graph: CausalGraph
    post_graph: CausalGraph
    parameters: tuple[ParameterNode, ...]
    treatment: str
    t_star: int

    @property
    def sharing(self) -> dict[str, tuple[str, ...]]:
        return {p.name: p.clients for p in self.parameters}

    def parameter_for(self, variable: str) -> ParameterNode:
        for p in self.parameters:
            if p.variable == variable:
                return p
        raise KeyError(variable)

    def with_t_star(self, t_star: int) -> "TwinPgm":
        return causal_bayes_construct(self.pre_graph, self.treatment, t_star)


def _parameter_names(graph: CausalGraph, treatment: str) -> dict[str, str]:
    names = list(graph.names)
    edges = set(graph.edges)
    others = [n for n in names if n != treatment]
    for template in _TEMPLATES:
        roles = sorted({r for e in template for r in e} - {"t"})
        if len(roles) != len(others):
            continue
        for perm in itertools.permutations(others):
            role_of = dict(zip(roles, perm), t=treatment)
            if {(role_of[a], role_of[b]) for a, b in template} == edges:
                return {role_of[r]: _LETTERS[r] for r in role_of}
    return {n: f"theta_{n}" for n in names}


def causal_bayes_construct(graph: CausalGraph, treatment: str, t_star: int) -> TwinPgm:
    """Build the twin PGM for ``do(treatment = t_star)``.

    Every variable, latent ones included, gets a starred copy. The starred
    treatment has no parents and no parameter; ``t_star`` is kept as data.
    """
    decl = graph.var(treatment)
    if not 0 <= int(t_star) < decl.cardinality:
        raise StateOutOfRange(
            f"{treatment}={t_star} outside 0..{decl.cardinality - 1}"
        )
    mutilated = mutilate(graph, treatment, RemoveIncoming)
    post = CausalGraph(
        tuple(VariableDecl(starred(v.name), v.observed, v.cardinality) for v in graph.variables),
        tuple((starred(p), starred(c)) for p, c in mutilated.edges),
    )
    letters = _parameter_names(graph, treatment)
    params = []
    for v in graph.variables:
        width = math.prod(graph.card(p) for p in graph.parents(v.name))
        clients = (v.name,) if v.name == treatment else (v.name, starred(v.name))
        params.append(ParameterNode(letters[v.name], v.name, clients, (v.cardinality, width)))
    return TwinPgm(graph, post, tuple(params), treatment, int(t_star))


# -- serialization ------------------------------------------------------------


def _q(name: str) -> str:
    return '"' + name.replace('"', r"\"") + '"'


def twin_to_dot(twin: TwinPgm) -> str:
    out = ["digraph twin {", "  compound=true;"]
    out.append("  subgraph cluster_plate {")
    out.append('    label="m = 1..M";')
    for v in twin.pre_graph.variables:
        style = "" if v.observed else " style=dashed"
        out.append(f"    {_q(v.name)} [shape=circle{style}];")
    out += [f"    {_q(p)} -> {_q(c)};" for p, c in twin.pre_graph.edges]
    out.append("  }")
    out.append("  subgraph cluster_post {")
    out.append('    label="post-intervention";')
    for v in twin.post_graph.variables:
        if v.name == starred(twin.treatment):
            out.append(
                f'    {_q(v.name)} [shape=box style=filled label="{v.name} = {twin.t_star}"];'
            )
        else:
            out.append(f"    {_q(v.name)} [shape=circle style=dashed];")
    out += [f"    {_q(p)} -> {_q(c)};" for p, c in twin.post_graph.edges]
    out.append("  }")
    for p in twin.parameters:
        label = _GREEK.get(p.name, p.name)
        out.append(f"  {_q(p.name)} [shape=circle style=dotted label=<{label}>];")
        out += [f"  {_q(p.name)} -> {_q(c)};" for c in p.clients]
    out.append("}")
    return "\n".join(out) + "\n"


def twin_to_dict(twin: TwinPgm) -> dict:
    return {
        "treatment": twin.treatment,
        "t_star": twin.t_star,
        "pre_graph": graph_to_dict(twin.pre_graph),
        "post_graph": graph_to_dict(twin.post_graph),
        "parameters": [
            {"name": p.name, "variable": p.variable, "clients": list(p.clients),
             "shape": list(p.shape)}
            for p in twin.parameters
        ],
    }


def twin_to_json(twin: TwinPgm) -> str:
    return json.dumps(twin_to_dict(twin), separators=(",", ":"))
