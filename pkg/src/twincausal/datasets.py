"""Bundled graphs and data: the Simpson's-paradox table and the four
textbook graphs (two fully observed, two with a latent confounder)."""

from __future__ import annotations

import json
from importlib import resources

from .bayes.cpts import cpts_from_json
from .causal_graph import CausalGraph
from .data_io import CountsTable, load_counts
from .graph_dsl import parse_graph

GRAPHS = ("case1", "case2", "confounded", "frontdoor")


def data_path(name: str):
    return resources.files(__package__).joinpath("data", name)


def read_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def load_graph(name: str) -> CausalGraph:
    if name not in GRAPHS:
        raise KeyError(f"unknown bundled graph {name!r}; choose from {GRAPHS}")
    return parse_graph(read_text(f"{name}.cg"))


def simpson_table(graph: CausalGraph | None = None) -> CountsTable:
    """The 850-row grouped table over (Z, T, Y)."""
    return load_counts(read_text("simpson.csv"), graph or load_graph("case1"))


def frontdoor_cpts():
    graph = load_graph("frontdoor")
    return cpts_from_json(json.loads(read_text("frontdoor_cpts.json")), graph)
