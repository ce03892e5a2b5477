"""Randomized maximization of a network bound over input scenarios.

A scenario is one two-qubit state per source. Batches of scenarios are drawn
from three families (Haar-random pure states, Wishart mixed states, locally
rotated Bell states), pushed through the channel per the usage pattern and
scored with the closed-form bound. The best pure scenarios are then refined
by a stochastic hill climb on their kets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bloch import BlochState, singular_values
from ..channels import IDENTITY, Channel, apply_arrays, to_affine
from ..config import DEFAULT, Tolerances
from ..errors import PatternMismatch
from ..network import (NetworkScenario, Placement, Topology, UsagePattern, linear_value, star_value,
                       threshold_for)
from .sampling import bloch_arrays, haar_kets, ket_density, structured_kets, wishart_mixed


@dataclass(frozen=True)
class SearchConfig:
    scenarios: int = 10_000
    batch: int = 2_500
    pure_fraction: float = 0.4
    structured_fraction: float = 0.3
    refine_starts: int = 4
    refine_steps: int = 150
    refine_pool: int = 32
    seed: int = 0


@dataclass(frozen=True, eq=False)
class SearchResult:
    sup_bound: float
    threshold: float
    scenario: NetworkScenario
    evaluated: int

    @property
    def exceeds(self) -> bool:
        return self.sup_bound > self.threshold


def _sides(ch: Channel, placement: Placement, tol: Tolerances):
    A = to_affine(ch, tol)
    return {
        Placement.NONE: (IDENTITY, IDENTITY),
        Placement.A: (A, IDENTITY),
        Placement.B: (IDENTITY, A),
        Placement.BOTH: (A, A),
    }[placement]


class _Scorer:
    """Scores stacks of source states with shape ``(scenarios, n, 4, 4)``."""

    def __init__(self, ch: Channel, u: UsagePattern, topology: Topology, tol: Tolerances):
        self.maps = [_sides(ch, p, tol) for p in u.placement]
        self.topology = topology
        self.n = u.n

    def transformed(self, rho: np.ndarray):
        a, b, W = bloch_arrays(rho)
        outs = [apply_arrays(A, B, a[:, j], b[:, j], W[:, j]) for j, (A, B) in enumerate(self.maps)]
        return [np.stack(x, axis=1) for x in zip(*outs)]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        W = self.transformed(rho)[2]
        sv = singular_values(W)
        E1, E2 = sv[..., 0], sv[..., 1]
        if self.topology is Topology.LINEAR:
            return linear_value(E1, E2)
        return star_value(E1, E2)


def _draw(rng: np.random.Generator, count: int, n: int, cfg: SearchConfig):
    """Density stack ``(count, n, 4, 4)`` and kets (``None`` rows for mixed draws)."""
    n_pure = int(round(count * cfg.pure_fraction))
    n_struct = int(round(count * cfg.structured_fraction))
    n_mixed = count - n_pure - n_struct
    kets = np.concatenate([haar_kets(rng, n_pure * n), structured_kets(rng, n_struct * n)])
    kets = kets.reshape(n_pure + n_struct, n, 4)
    mixed = wishart_mixed(rng, n_mixed * n).reshape(n_mixed, n, 4, 4)
    rho = np.concatenate([ket_density(kets), mixed])
    return rho, kets


def _refine(score: _Scorer, kets: np.ndarray, rng: np.random.Generator, cfg: SearchConfig):
    best = float(score(ket_density(kets[None]))[0])
    scale = 0.3
    for _ in range(cfg.refine_steps):
        noise = rng.normal(size=(cfg.refine_pool,) + kets.shape) + 1j * rng.normal(size=(cfg.refine_pool,) + kets.shape)
        cand = kets[None] + scale * noise
        cand /= np.linalg.norm(cand, axis=-1, keepdims=True)
        vals = score(ket_density(cand))
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, kets = float(vals[i]), cand[i]
        else:
            scale *= 0.8
        if scale < 1e-6:
            break
    return best, kets


def max_bound_over_states(ch: Channel, pattern: UsagePattern, topology: Topology | str, n: int | None = None,
                          cfg: SearchConfig = SearchConfig(), tol: Tolerances = DEFAULT) -> SearchResult:
    """Largest bound of the channel-transformed scenario found over random inputs."""
    topology = Topology.parse(topology) if isinstance(topology, str) else topology
    n = pattern.n if n is None else n
    if pattern.n != n:
        raise PatternMismatch(f"pattern is for n = {pattern.n}, requested n = {n}")
    if topology is Topology.STAR_FNN3 and n != 3:
        raise PatternMismatch("the trilocal star needs n = 3")
    score = _Scorer(ch, pattern, topology, tol)
    rng = np.random.default_rng(cfg.seed)

    # untouched Bell corners first: all four Bell states per source
    corners = structured_kets(rng, 4, rotate=False)
    best_val, best_rho = -np.inf, None
    pool: list[tuple[float, np.ndarray]] = []
    done = 0
    while done < cfg.scenarios:
        m = min(cfg.batch, cfg.scenarios - done)
        rho, kets = _draw(rng, m, n, cfg)
        if done == 0:
            fixed = np.repeat(ket_density(corners)[:, None], n, axis=1)
            rho = np.concatenate([fixed, rho])
            kets = np.concatenate([np.repeat(corners[:, None], n, axis=1), kets])
        vals = score(rho)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_rho = float(vals[i]), rho[i]
        top = np.argsort(vals[: len(kets)])[-cfg.refine_starts:]
        pool.extend((float(vals[j]), kets[j]) for j in top)
        done += m
    pool.sort(key=lambda x: -x[0])
    for _, k0 in pool[: cfg.refine_starts]:
        val, k = _refine(score, k0, rng, cfg)
        if val > best_val:
            best_val, best_rho = val, ket_density(k)
    a, b, W = score.transformed(best_rho[None])
    states = tuple(BlochState(a[0, j], b[0, j], W[0, j]) for j in range(n))
    return SearchResult(best_val, threshold_for(topology), NetworkScenario(topology, states),
                        cfg.scenarios + (4 if cfg.scenarios else 0))
