"""Dirichlet-categorical posteriors over the CPTs of a fully observed twin
PGM, and the exact posterior predictive of the starred outcome.

For a single new post-intervention draw, every term of the predictive is a
product of distinct CPT cells, and distinct rows are independent a
posteriori. The integral over the posterior therefore collapses to the
interventional distribution evaluated at the posterior-mean CPTs, i.e.
add-``prior_strength`` smoothing of the counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..data_io import CountsTable
from ..errors import UnfittedPosterior
from ..rng import make_rng
from ..twin_builder import TwinPgm
from .cpts import family_counts, observed_counts, truncated_product


@dataclass(frozen=True)
class CptPosterior:
    """Dirichlet pseudo-counts ``alpha[v][config, state]`` for every v != T."""

    treatment: str
    alpha: Mapping[str, np.ndarray]
    prior_strength: float

    def mean(self, variable: str) -> np.ndarray:
        a = self.alpha[variable]
        return a / a.sum(axis=1, keepdims=True)

    def means(self) -> dict[str, np.ndarray]:
        return {v: self.mean(v) for v in self.alpha}

    def sample(self, n: int, seed: int) -> dict[str, np.ndarray]:
        """``n`` joint posterior draws, each CPT with a leading batch axis."""
        out = {}
        for i, (v, a) in enumerate(sorted(self.alpha.items())):
            g = make_rng(seed, i).standard_gamma(a, size=(n,) + a.shape)
            out[v] = g / g.sum(axis=-1, keepdims=True)
        return out


def fit_posteriors(twin: TwinPgm, table: CountsTable, prior_strength: float = 1.0,
                   priors: Mapping[str, np.ndarray] | None = None) -> CptPosterior:
    """Conjugate update: ``alpha = prior + family counts`` for each v != T.

    ``priors`` optionally overrides the symmetric prior for a variable with a
    per-state concentration vector, applied to every parent configuration.
    """
    if not prior_strength > 0:
        raise ValueError("prior_strength must be positive")
    graph = twin.pre_graph
    counts = observed_counts(graph, table)
    priors = dict(priors or {})
    alpha = {}
    for v in graph.names:
        if v == twin.treatment:
            continue
        fc = family_counts(graph, counts, v)
        conc = np.asarray(priors.get(v, prior_strength), dtype=float)
        if (conc <= 0).any():
            raise ValueError(f"prior concentration for {v!r} must be positive")
        alpha[v] = fc + np.broadcast_to(conc, fc.shape)
    return CptPosterior(twin.treatment, alpha, float(prior_strength))


def default_outcome(twin: TwinPgm) -> str:
    sinks = [
        v for v in twin.pre_graph.names
        if v != twin.treatment and not twin.pre_graph.children(v)
        and twin.pre_graph.var(v).observed
    ]
    if len(sinks) != 1:
        raise ValueError(f"cannot infer the outcome variable; sinks are {sinks}")
    return sinks[0]


def _check(twin, post):
    if post is None or not isinstance(post, CptPosterior):
        raise UnfittedPosterior("posterior has not been fitted")
    needed = set(twin.pre_graph.names) - {twin.treatment}
    if post.treatment != twin.treatment or set(post.alpha) != needed:
        raise UnfittedPosterior("posterior does not match this twin network")


def predictive_distribution(twin: TwinPgm, post: CptPosterior, outcome: str | None = None
                            ) -> np.ndarray:
    """``P(Y* | data, t*)`` over all states of the outcome."""
    _check(twin, post)
    outcome = outcome or default_outcome(twin)
    return truncated_product(twin.pre_graph, post.means(), twin.treatment, twin.t_star, outcome)


def posterior_predictive(twin: TwinPgm, post: CptPosterior, y_state: int,
                         outcome: str | None = None) -> float:
    return float(predictive_distribution(twin, post, outcome)[int(y_state)])


def monte_carlo_predictive(twin: TwinPgm, post: CptPosterior, n_draws: int, seed: int,
                           outcome: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Average of the interventional distribution over posterior draws.

    Returns ``(mean, standard_error)`` over outcome states.
    """
    _check(twin, post)
    outcome = outcome or default_outcome(twin)
    draws = truncated_product(
        twin.pre_graph, post.sample(n_draws, seed), twin.treatment, twin.t_star, outcome
    )
    return draws.mean(axis=0), draws.std(axis=0, ddof=1) / np.sqrt(n_draws)
