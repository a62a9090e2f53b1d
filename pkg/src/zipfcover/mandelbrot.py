"""Cost/entropy functionals, the Zipf-Mandelbrot law and the local cost-ratio dynamics.

Word k costs ``c0 * log2(k + k0)`` to retrieve.  A distribution p over N
ranked words has average cost C = sum p_k C_k and entropy H = -sum p_k log2 p_k;
the optimized quantity is the cost per bit, C / H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateDistribution, DomainError, NoConvergence
from .evolution import DEFAULT_SEED, make_rng


@dataclass(frozen=True)
class CostModel:
    c0: float = 1.0
    k0: float = 0.0

    def __post_init__(self):
        if not self.c0 > 0:
            raise DomainError("c0 must be positive")
        if not self.k0 >= 0:
            raise DomainError("k0 must be non-negative")

    def costs(self, n: int) -> np.ndarray:
        """C_k for ranks 1..n."""
        return self.c0 * np.log2(np.arange(1, n + 1) + self.k0)


def _as_pmf(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0):
        raise DomainError("p must be a non-empty vector of non-negative numbers")
    return p


def average_cost(p, cm: CostModel) -> float:
    p = _as_pmf(p)
    return float(np.dot(p, cm.costs(p.size)))


def entropy(p) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    p = _as_pmf(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def cost_ratio(p, cm: CostModel) -> float:
    h = entropy(p)
    if h <= 0:
        raise DegenerateDistribution("entropy is zero; cost ratio undefined")
    return average_cost(p, cm) / h


def zipf_mandelbrot_pmf(B: float, k0: float, n: int) -> np.ndarray:
    """p_k proportional to (k + k0)^-B for k = 1..n, normalized over the truncation."""
    if not B > 1:
        raise DomainError(f"B={B!r} must exceed 1")
    if not k0 >= 0:
        raise DomainError("k0 must be non-negative")
    if n < 1:
        raise DomainError("n must be at least 1")
    # work in logs so large B does not underflow the head
    logw = -B * np.log(np.arange(1, n + 1) + k0)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def _gibbs(costs, ratio):
    logw = -ratio * costs * math.log(2.0)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def _selfconsistency_residual(p, costs):
    c = float(np.dot(p, costs))
    h = entropy(p)
    if c <= 0:
        return 0.0
    return float(np.max(np.abs(p - _gibbs(costs, h / c))))


def solve_selfconsistent_pmf(costs: Sequence[float], tol: float = 1e-12, max_iters: int = 100_000) -> np.ndarray:
    """Fixed point of p <- normalize(2^(-H(p) C_k / C(p))), iterated from uniform.

    The map depends on p only through the scalar H/C, so each step is cheap.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 1 or costs.size == 0 or not np.all(np.isfinite(costs)):
        raise DomainError("costs must be a non-empty finite vector")
    if np.any(np.diff(costs) < 0):
        raise DomainError("costs must be non-decreasing")
    n = costs.size
    p = np.full(n, 1.0 / n)
    if costs[0] == costs[-1]:
        return p
    for _ in range(max_iters):
        c = float(np.dot(p, costs))
        q = _gibbs(costs, entropy(p) / c)
        change = float(np.max(np.abs(q - p)))
        p = q
        if change < tol:
            return p
    raise NoConvergence(
        f"no fixed point within {max_iters} iterations",
        residual=_selfconsistency_residual(p, costs),
    )


@dataclass(frozen=True)
class DynamicsConfig:
    n_words: int
    cost_model: CostModel = CostModel()
    band_gamma: float = 0.05
    step_factor: float = 1.05
    max_iters: int = 100_000
    p_floor: float = 1e-15
    stride: int = 1

    def __post_init__(self):
        if self.n_words < 1:
            raise DomainError("n_words must be at least 1")
        if not 0 < self.band_gamma <= 1:
            raise DomainError("band_gamma must lie in (0, 1]")
        if not self.step_factor > 1:
            raise DomainError("step_factor must exceed 1")
        if self.max_iters < 0:
            raise DomainError("max_iters must be non-negative")
        if not 0 < self.p_floor < 1.0 / self.n_words:
            raise DomainError("p_floor must lie in (0, 1/n_words)")
        if self.stride < 1:
            raise DomainError("stride must be at least 1")


@dataclass(frozen=True)
class TrajectoryRow:
    iter: int
    C: float
    H: float
    Cstar: float
    n_changed: int


@dataclass
class DynamicsResult:
    p: np.ndarray
    trajectory: list
    iterations: int
    converged: bool
    p_floor: float

    @property
    def extinct(self) -> int:
        """Words pinned at the floor."""
        return int(np.sum(self.p <= self.p_floor))


def word_cost_ratios(p: np.ndarray, costs: np.ndarray) -> np.ndarray:
    """C*_k = C_k / (-log2 p_k), the per-word cost per bit."""
    return costs / -np.log2(p)


def _renormalize(p, floor):
    # extinct words stay pinned at the floor; live words share the rest.
    # Rescaling can push a live word under the floor, so repeat until none does.
    while True:
        dead = p <= floor
        p[dead] = floor
        live = ~dead
        if not live.any():
            return p
        p[live] *= (1.0 - floor * dead.sum()) / p[live].sum()
        if not np.any(p[live] <= floor):
            return p


def run_local_dynamics(config: DynamicsConfig, seed: int = DEFAULT_SEED, check_normalization: bool = False):
    """Local cost-ratio dynamics.

    Words whose cost per bit sits above the band around the global C/H lose
    frequency by ``step_factor``; words below it gain.  Frequencies are
    floored at p_floor, words are re-ranked by frequency (stable)
    and renormalized.  A word that reaches the floor stays there.  Stops when
    an iteration changes nothing.
    """
    n = config.n_words
    floor = config.p_floor
    rng = make_rng(seed)
    costs = config.cost_model.costs(n)
    p = rng.random(n) + floor
    p = np.sort(p / p.sum())[::-1].copy()
    p = _renormalize(p, floor)
    traj = []
    converged = False
    it = 0
    while True:
        c = float(np.dot(p, costs))
        h = entropy(p)
        cstar = c / h if h > 0 else math.inf
        if it >= config.max_iters:
            traj.append(TrajectoryRow(it, c, h, cstar, -1))
            break
        live = p > floor
        ratios = word_cost_ratios(p, costs)
        lo, hi = (1 - config.band_gamma) * cstar, (1 + config.band_gamma) * cstar
        new = p.copy()
        # a zero frequency scaled by any factor stays zero: extinct words are absorbing
        up = live & (ratios < lo)
        down = live & (ratios > hi)
        new[up] = p[up] * config.step_factor
        new[down] = np.maximum(p[down] / config.step_factor, floor)
        changed = int(np.sum(new != p))
        n_live = int(live.sum())
        if up.sum() == n_live or down.sum() == n_live:
            # every live word scaled alike: renormalization undoes it
            changed = 0
        if it % config.stride == 0 or changed == 0:
            traj.append(TrajectoryRow(it, c, h, cstar, changed))
        if changed == 0:
            converged = True
            break
        order = np.argsort(-new, kind="stable")
        p = _renormalize(new[order], floor)
        if check_normalization and abs(p.sum() - 1.0) > 1e-12:
            raise AssertionError(f"normalization lost at iteration {it}: sum={p.sum()!r}")
        it += 1
    return DynamicsResult(p, traj, it, converged, floor)
