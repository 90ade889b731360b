"""Simulate from a known causal model and compare the plug-in do-calculus
estimate and the Bayesian twin-network predictive against the exact
interventional distribution, across sample sizes."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Sequence

import numpy as np

from .bayes.conjugate import fit_posteriors, predictive_distribution
from .bayes.cpts import check_cpts, forward_sample, truncated_product
from .bayes.frontdoor import fit_frontdoor, frontdoor_distribution
from .causal_graph import CausalGraph
from .data_io import CountsTable, empirical_joint
from .do_engine import Identified, evaluate_estimand, identify
from .errors import NotIdentifiedError, ZeroConditioningMass
from .rng import derive_seed
from .twin_builder import causal_bayes_construct


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    replicate: int
    t_star: int
    do_plugin: float
    bayes_predictive: float
    ground_truth: float
    abs_gap_do: float
    abs_gap_bayes: float
    seed: int


def _identified(graph, treatment, outcome) -> Identified:
    result = identify(graph, treatment, outcome)
    if not result.identified:
        raise NotIdentifiedError(
            f"P({outcome}|do({treatment})) is not identified ({result.reason}); "
            "use the ABC demonstration instead"
        )
    return result


def estimate_both(graph: CausalGraph, table: CountsTable, treatment: str, outcome: str,
                  t_star: int, prior_strength: float = 1.0,
                  identification: Identified | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Plug-in and Bayesian estimates of ``P(outcome | do(treatment=t_star))``
    over all outcome states. A plug-in value is NaN when the estimand
    conditions on an empty cell."""
    ident = identification or _identified(graph, treatment, outcome)
    card_y = graph.card(outcome)
    plugin = np.full(card_y, np.nan)
    if table.total > 0:
        joint = empirical_joint(table)
        try:
            plugin = np.array([
                evaluate_estimand(ident.estimand, joint, t_star, y) for y in range(card_y)
            ])
        except ZeroConditioningMass:
            pass
    if ident.method == "frontdoor" and graph.latent:
        (mediator,) = ident.adjustment
        fd = fit_frontdoor(table.marginalize([treatment, mediator, outcome]), prior_strength,
                           treatment, mediator, outcome)
        bayes = frontdoor_distribution(fd, t_star)
    else:
        twin = causal_bayes_construct(graph, treatment, t_star)
        bayes = predictive_distribution(twin, fit_posteriors(twin, table, prior_strength), outcome)
    return plugin, bayes


def compare_on_table(graph: CausalGraph, table: CountsTable, true_cpts, treatment: str,
                     outcome: str, y_state: int = 1, prior_strength: float = 1.0,
                     replicate: int = 0, seed: int = 0,
                     identification: Identified | None = None) -> list[ConvergenceRow]:
    """One row per treatment state for an already observed table."""
    ident = identification or _identified(graph, treatment, outcome)
    rows = []
    for t_star in range(graph.card(treatment)):
        truth = float(truncated_product(graph, true_cpts, treatment, t_star, outcome)[y_state])
        plugin, bayes = estimate_both(graph, table, treatment, outcome, t_star,
                                      prior_strength, ident)
        d, b = float(plugin[y_state]), float(bayes[y_state])
        rows.append(ConvergenceRow(table.total, replicate, t_star, d, b, truth,
                                   abs(d - truth), abs(b - truth), seed))
    return rows


def run_convergence(graph: CausalGraph, true_cpts, M_grid: Sequence[int], replicates: int,
                    seed: int, treatment: str = "T", outcome: str = "Y", y_state: int = 1,
                    prior_strength: float = 1.0, workers: int | None = None
                    ) -> list[ConvergenceRow]:
    """Rows sorted by ``(M, replicate, t_star)``.

    Replicate ``r`` at sample size ``M`` samples with ``derive_seed(seed, M, r)``,
    so parallel and sequential runs agree exactly.
    """
    ident = _identified(graph, treatment, outcome)
    true_cpts = check_cpts(graph, true_cpts)

    def job(key):
        M, r = key
        s = derive_seed(seed, M, r)
        table = forward_sample(graph, true_cpts, M, s)
        return compare_on_table(graph, table, true_cpts, treatment, outcome, y_state,
                                prior_strength, r, s, ident)

    keys = [(int(M), r) for M in sorted(M_grid) for r in range(replicates)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(job, keys))
    else:
        chunks = [job(k) for k in keys]
    return [row for chunk in chunks for row in chunk]


def summarize(rows: Sequence[ConvergenceRow]) -> dict[int, dict[str, float]]:
    """Median gaps per sample size (NaN plug-in rows are skipped)."""
    out = {}
    for M in sorted({r.M for r in rows}):
        sel = [r for r in rows if r.M == M]
        gap_do = np.array([r.abs_gap_do for r in sel])
        gap_b = np.array([r.abs_gap_bayes for r in sel])
        between = np.array([abs(r.do_plugin - r.bayes_predictive) for r in sel])
        out[M] = {
            "median_gap_do": float(np.nanmedian(gap_do)),
            "median_gap_bayes": float(np.nanmedian(gap_b)),
            "max_do_vs_bayes": float(np.nanmax(between)) if np.isfinite(between).any() else math.nan,
            "n_nan": int(np.isnan(gap_do).sum()),
        }
    return out


def _fmt(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def rows_to_csv(rows: Sequence[ConvergenceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(ConvergenceRow)])
    for row in rows:
        writer.writerow([_fmt(v) for v in astuple(row)])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ConvergenceRow]:
    reader = csv.DictReader(io.StringIO(text))
    types = {f.name: f.type for f in fields(ConvergenceRow)}
    out = []
    for rec in reader:
        out.append(ConvergenceRow(**{
            k: (int(v) if types[k] in (int, "int") else float(v)) for k, v in rec.items()
        }))
    return out
