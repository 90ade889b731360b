"""Rejection ABC for the confounded graph T <- Z -> Y, T -> Y with Z latent.

Parameters ``(gamma, phi, psi)`` with ``|Z| = K`` are drawn from Dirichlet
priors. A draw is accepted when its implied observable joint
``Omega[t, y] = sum_z gamma_z phi_z(t) psi_{t,z}(y)`` lies within ``eps`` (max
norm) of the empirical joint. The accepted values of
``Psi[t, y] = sum_z gamma_z psi_{t,z}(y)`` describe what the data say about
``P(y | do(t))``, which is only partially pinned down.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..data_io import CountsTable, empirical_joint
from ..errors import HeaderMismatch, NoAcceptedSamples
from ..rng import make_rng

CHUNK = 100_000


@dataclass(frozen=True)
class CausalContrast:
    treatment: str
    outcome: str
    samples: np.ndarray  # accepted Psi, (n_accepted, card_t, card_y)
    n_samples: int
    tolerance: float
    latent_card: int

    @property
    def n_accepted(self) -> int:
        return int(self.samples.shape[0])

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_samples

    def mean(self, t_star: int, y_state: int = 1) -> float:
        return float(self.samples[:, t_star, y_state].mean())

    def interval(self, t_star: int, y_state: int = 1, level: float = 0.95) -> tuple[float, float]:
        tail = (1.0 - level) / 2.0
        lo, hi = np.quantile(self.samples[:, t_star, y_state], [tail, 1.0 - tail])
        return float(lo), float(hi)

    def to_dict(self, y_state: int = 1) -> dict:
        return {
            "method": "abc",
            "treatment": self.treatment,
            "outcome": self.outcome,
            "latent_card": self.latent_card,
            "epsilon": self.tolerance,
            "n_samples": self.n_samples,
            "n_accepted": self.n_accepted,
            "acceptance_rate": self.acceptance_rate,
            "y_state": y_state,
            "results": [
                {"t_star": t, "mean": self.mean(t, y_state),
                 "interval": list(self.interval(t, y_state))}
                for t in range(self.samples.shape[1])
            ],
        }


def _dirichlet(rng, conc, size):
    g = rng.standard_gamma(conc, size=tuple(size) + (len(conc),))
    return g / g.sum(axis=-1, keepdims=True)


def _chunk(seed, index, n, K, card_t, card_y, psi_conc, target, eps):
    rng = make_rng(seed, index)
    gamma = _dirichlet(rng, np.ones(K), (n,))
    phi = _dirichlet(rng, np.ones(card_t), (n, K))
    psi = _dirichlet(rng, psi_conc, (n, card_t, K))
    omega = np.einsum("nz,nzt,ntzy->nty", gamma, phi, psi)
    keep = np.abs(omega - target).max(axis=(1, 2)) <= eps
    return np.einsum("nz,ntzy->nty", gamma[keep], psi[keep])


def abc_nonidentifiable(table: CountsTable, latent_card: int, n_samples: int,
                        tolerance: float, seed: int, treatment: str = "T",
                        outcome: str = "Y", psi_concentration=None,
                        workers: int | None = None) -> CausalContrast:
    """Accepted ``Psi`` draws for every ``t*``.

    ``psi_concentration`` is the Dirichlet concentration over outcome states
    for each ``psi_{t,z}`` (default uniform). Work is split into fixed-size
    chunks with their own random streams, so ``workers`` never changes the
    result.
    """
    if latent_card < 1:
        raise ValueError("latent_card must be >= 1")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if set(table.variables) != {treatment, outcome} or len(table.variables) != 2:
        raise HeaderMismatch(
            f"ABC needs a ({treatment}, {outcome}) table, got {list(table.variables)}"
        )
    joint = empirical_joint(table.marginalize([treatment, outcome]))
    target = joint.mass
    card_t, card_y = target.shape
    psi_conc = (np.ones(card_y) if psi_concentration is None
                else np.asarray(psi_concentration, dtype=float))
    if psi_conc.shape != (card_y,) or (psi_conc <= 0).any():
        raise ValueError("psi_concentration must be a positive vector over outcome states")

    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)
    args = [(seed, i, n, latent_card, card_t, card_y, psi_conc, target, tolerance)
            for i, n in enumerate(sizes)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _chunk(*a), args))
    else:
        parts = [_chunk(*a) for a in args]
    accepted = np.concatenate(parts) if parts else np.empty((0, card_t, card_y))
    if accepted.shape[0] == 0:
        raise NoAcceptedSamples(
            f"no draws within eps={tolerance} out of {n_samples}; "
            "raise the budget or loosen the tolerance"
        )
    return CausalContrast(treatment, outcome, accepted, int(n_samples), float(tolerance),
                          int(latent_card))
