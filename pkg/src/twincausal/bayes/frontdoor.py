"""Front-door model with the latent confounder integrated out.

The observable joint is reparameterized as ``P(t) P(y | t, w)`` (the Omega
block) together with ``P(w | t)`` (the lambda block); all three are
Dirichlet-categorical, so the posterior is conjugate. The causal predictive
weights ``P(y | t', w)`` by the *marginal* ``P(t')``, never by ``P(t' | w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data_io import CountsTable
from ..errors import HeaderMismatch, UnfittedPosterior


@dataclass(frozen=True)
class FrontDoorPosterior:
    treatment: str
    mediator: str
    outcome: str
    t_alpha: np.ndarray  # (card_t,)
    y_alpha: np.ndarray  # (card_t, card_w, card_y)
    w_alpha: np.ndarray  # (card_t, card_w), lambda

    @property
    def t_mean(self) -> np.ndarray:
        return self.t_alpha / self.t_alpha.sum()

    @property
    def y_mean(self) -> np.ndarray:
        return self.y_alpha / self.y_alpha.sum(axis=-1, keepdims=True)

    @property
    def w_mean(self) -> np.ndarray:
        return self.w_alpha / self.w_alpha.sum(axis=-1, keepdims=True)

    def omega_mean(self) -> np.ndarray:
        """Posterior mean of ``P(t') P(y | t', w)``, indexed ``[y, t', w]``."""
        return np.einsum("t,twy->ytw", self.t_mean, self.y_mean)


def fit_frontdoor(table: CountsTable, prior_strength: float = 1.0, treatment: str = "T",
                  mediator: str = "W", outcome: str = "Y") -> FrontDoorPosterior:
    names = (treatment, mediator, outcome)
    if set(table.variables) != set(names) or len(table.variables) != 3:
        raise HeaderMismatch(
            f"front-door table needs exactly columns {list(names)}, got {list(table.variables)}"
        )
    if not prior_strength > 0:
        raise ValueError("prior_strength must be positive")
    c = table.to_array(names).astype(float)
    a = float(prior_strength)
    return FrontDoorPosterior(
        treatment, mediator, outcome,
        t_alpha=c.sum(axis=(1, 2)) + a,
        y_alpha=c + a,
        w_alpha=c.sum(axis=2) + a,
    )


def frontdoor_distribution(fd: FrontDoorPosterior, t_star: int) -> np.ndarray:
    """``sum_w lambda[t*, w] sum_t' P(t') P(y | t', w)`` for every y."""
    if not isinstance(fd, FrontDoorPosterior):
        raise UnfittedPosterior("front-door posterior has not been fitted")
    return np.einsum("w,ytw->y", fd.w_mean[int(t_star)], fd.omega_mean())


def frontdoor_predictive(fd: FrontDoorPosterior, t_star: int, y_state: int) -> float:
    return float(frontdoor_distribution(fd, t_star)[int(y_state)])
