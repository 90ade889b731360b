"""Conditional probability tables: validation, JSON form, estimation,
ancestral sampling and interventional (truncated-product) evaluation.

A CPT set maps each variable to an array of shape ``(n_configs, card)``.
Row ``i`` is the distribution of the variable given the parent configuration
whose row-major index over ``graph.parents(v)`` is ``i``.
"""

from __future__ import annotations

import itertools
import math
import string
from typing import Mapping

import numpy as np

from ..causal_graph import CausalGraph, RemoveIncoming, mutilate
from ..data_io import CountsTable
from ..errors import HeaderMismatch, LatentPresent, MissingVariable, UnnormalizedCpt
from ..rng import make_rng


def parent_cards(graph: CausalGraph, v: str) -> tuple[int, ...]:
    return tuple(graph.card(p) for p in graph.parents(v))


def check_cpts(graph: CausalGraph, cpts: Mapping[str, np.ndarray], tol: float = 1e-9,
               skip=()) -> dict[str, np.ndarray]:
    """Validate shapes and row normalization; returns float copies."""
    out = {}
    for v in graph.names:
        if v in skip:
            continue
        if v not in cpts:
            raise MissingVariable(f"no CPT for {v!r}")
        arr = np.asarray(cpts[v], dtype=float)
        shape = (math.prod(parent_cards(graph, v)), graph.card(v))
        if arr.shape != shape:
            try:
                arr = arr.reshape(shape)
            except ValueError:
                raise UnnormalizedCpt(f"CPT for {v!r} has shape {arr.shape}, expected {shape}") from None
        if (arr < -tol).any() or not np.allclose(arr.sum(axis=1), 1.0, rtol=0, atol=tol):
            raise UnnormalizedCpt(f"CPT rows for {v!r} are not distributions")
        out[v] = arr
    return out


def cpts_from_json(data: Mapping, graph: CausalGraph) -> dict[str, np.ndarray]:
    """Read ``{"V": {"p1,p2": [probs...]}}``; roots use the key ``""``."""
    out = {}
    for v in graph.names:
        if v not in data:
            raise MissingVariable(f"no CPT for {v!r}")
        pcards = parent_cards(graph, v)
        rows = np.full((math.prod(pcards), graph.card(v)), np.nan)
        for key, probs in data[v].items():
            states = tuple(int(s) for s in key.split(",")) if key.strip() else ()
            if len(states) != len(pcards):
                raise UnnormalizedCpt(f"{v!r}: parent key {key!r} has wrong arity")
            rows[np.ravel_multi_index(states, pcards) if pcards else 0] = probs
        if np.isnan(rows).any():
            raise UnnormalizedCpt(f"{v!r}: missing parent configurations")
        out[v] = rows
    return check_cpts(graph, out)


def cpts_to_json(cpts: Mapping[str, np.ndarray], graph: CausalGraph) -> dict:
    out = {}
    for v in graph.names:
        pcards = parent_cards(graph, v)
        rows = {}
        for i, states in enumerate(itertools.product(*[range(k) for k in pcards])):
            rows[",".join(map(str, states))] = [float(p) for p in cpts[v][i]]
        out[v] = rows
    return out


def family_counts(graph: CausalGraph, counts: np.ndarray, v: str) -> np.ndarray:
    """Counts of ``v`` per parent configuration, shape ``(n_configs, card)``.

    ``counts`` has one axis per variable in ``graph.names`` order.
    """
    names = graph.names
    family = list(graph.parents(v)) + [v]
    drop = tuple(i for i, n in enumerate(names) if n not in family)
    summed = counts.sum(axis=drop)
    remaining = [n for n in names if n in family]
    summed = np.transpose(summed, [remaining.index(n) for n in family])
    return summed.reshape(-1, graph.card(v))


def observed_counts(graph: CausalGraph, table: CountsTable) -> np.ndarray:
    if graph.latent:
        raise LatentPresent(f"latent variables {list(graph.latent)} are not observed")
    if set(table.variables) != set(graph.names):
        raise HeaderMismatch(
            f"table columns {list(table.variables)} != graph variables {list(graph.names)}"
        )
    return table.to_array(graph.names)


def estimate_cpts(graph: CausalGraph, table: CountsTable) -> dict[str, np.ndarray]:
    """Maximum-likelihood CPTs from a fully observed table.

    Parent configurations that never occur get a uniform row.
    """
    counts = observed_counts(graph, table)
    out = {}
    for v in graph.names:
        fc = family_counts(graph, counts, v).astype(float)
        tot = fc.sum(axis=1, keepdims=True)
        out[v] = np.where(tot > 0, fc / np.where(tot > 0, tot, 1), 1.0 / graph.card(v))
    return out


def truncated_product(graph: CausalGraph, cpts: Mapping[str, np.ndarray], treatment: str,
                      t_star: int, outcome: str) -> np.ndarray:
    """``P(outcome | do(treatment = t_star))`` by exact enumeration.

    Multiplies the CPTs of every variable except the treatment, with the
    treatment clamped to ``t_star``, and sums out everything but the outcome.
    Only ancestors of the outcome in the mutilated graph are touched.
    ``cpts`` values may carry a leading batch axis; it is kept in the result.
    """
    g = mutilate(graph, treatment, RemoveIncoming)
    relevant = [n for n in graph.names if n in g.ancestors(outcome) and n != treatment]
    letters = dict(zip(relevant, string.ascii_letters[1:]))
    batch = None
    operands, subs = [], []
    for v in relevant:
        arr = np.asarray(cpts[v], dtype=float)
        n_batch = arr.ndim - 2
        if n_batch not in (0, 1):
            raise ValueError(f"CPT for {v!r} must be 2-d (or 3-d with a batch axis)")
        pars = graph.parents(v)
        shape = arr.shape[:n_batch] + parent_cards(graph, v) + (graph.card(v),)
        arr = arr.reshape(shape)
        if treatment in pars:
            axis = n_batch + pars.index(treatment)
            arr = np.take(arr, int(t_star), axis=axis)
            pars = tuple(p for p in pars if p != treatment)
        sub = "".join(letters[p] for p in pars) + letters[v]
        if n_batch:
            sub = "a" + sub
            batch = arr.shape[0]
        operands.append(arr)
        subs.append(sub)
    out = ("a" if batch is not None else "") + letters[outcome]
    if batch is not None:
        # broadcast unbatched factors over the batch axis
        for i, (arr, s) in enumerate(zip(operands, subs)):
            if not s.startswith("a"):
                operands[i] = np.broadcast_to(arr, (batch,) + arr.shape)
                subs[i] = "a" + s
    return np.einsum(",".join(subs) + "->" + out, *operands)


def forward_sample(graph: CausalGraph, cpts: Mapping[str, np.ndarray], M: int,
                   seed: int) -> CountsTable:
    """Draw ``M`` ancestral samples; latent columns are dropped."""
    cpts = check_cpts(graph, cpts)
    rng = make_rng(seed)
    M = int(M)
    samples = {}
    for v in graph.topological_order():
        pars = graph.parents(v)
        if pars:
            idx = np.ravel_multi_index([samples[p] for p in pars], parent_cards(graph, v))
        else:
            idx = np.zeros(M, dtype=np.intp)
        cum = np.cumsum(cpts[v], axis=1)[idx]
        u = 1.0 - rng.random(M)  # in (0, 1] so zero-probability states are never drawn
        state = (u[:, None] > cum).sum(axis=1)
        samples[v] = np.minimum(state, graph.card(v) - 1)
    observed = graph.observed
    cards = tuple(graph.card(v) for v in observed)
    counts = np.zeros(cards, dtype=np.int64)
    if M:
        flat = np.ravel_multi_index([samples[v] for v in observed], cards)
        counts = np.bincount(flat, minlength=math.prod(cards)).reshape(cards)
    return CountsTable.from_array(observed, counts)
