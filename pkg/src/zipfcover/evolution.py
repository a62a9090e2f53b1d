"""Interval-evolution simulators on the unit circle (or segment).

Generalization: zero-length intervals grow by ``delta`` per step; when two
unfrozen intervals touch, a randomly chosen one of the pair freezes.  All
unfrozen intervals share the same length (step * delta), so a collision
happens exactly when that length reaches the centre spacing of two unfrozen
neighbours.  The simulation therefore jumps from collision step to collision
step through a heap of neighbour gaps instead of ticking every step.

Specialization: random intervals; whenever two of comparable length
(ratio inside (1/gamma, gamma)) intersect, the smaller loses the intersection.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .covering import Covering
from .errors import EmptyCovering
from .powerlaw import RankFrequencyTable

DEFAULT_SEED = 20240601


def default_delta(n: int) -> float:
    """1e-7 at n = 10^4, scaled as 1/n."""
    return 1e-3 / max(int(n), 1)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; the only source of randomness in a run."""
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class GenParams:
    n: int
    delta: Optional[float] = None
    seed: int = DEFAULT_SEED
    circular: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.delta is None:
            object.__setattr__(self, "delta", default_delta(self.n))
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")


@dataclass(frozen=True)
class SpecParams:
    n: int
    gamma: float = 2.0
    seed: int = DEFAULT_SEED
    fixpoint_eps: float = 1e-12
    circular: bool = True

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if not self.fixpoint_eps > 0:
            raise ValueError("fixpoint_eps must be positive")
        if not 1.1 <= self.gamma <= 10:
            warnings.warn(f"gamma={self.gamma} is outside the tested range [1.1, 10]", stacklevel=2)


@dataclass
class SimResult:
    covering: Covering
    iterations: int
    rng_trace_hash: int
    params: dict = field(default_factory=dict)
    # generalization: step at which each interval froze (-1: still growing)
    freeze_steps: Optional[np.ndarray] = None
    # specialization: total covered length after each sweep
    length_history: Optional[list] = None


def _trace_hash(cov: Covering, rng: np.random.Generator, iterations: int) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(cov.lo.tobytes())
    h.update(cov.length.tobytes())
    h.update(repr(rng.bit_generator.state).encode())
    h.update(str(iterations).encode())
    return int.from_bytes(h.digest(), "big")


def _random_victim(rng):
    return lambda i, j: i if rng.random() < 0.5 else j


def run_generalization(params: GenParams, _choose: Optional[Callable] = None) -> SimResult:
    n, delta = params.n, float(params.delta)
    rng = make_rng(params.seed)
    centers = np.sort(rng.random(n))
    choose = _choose or _random_victim(rng)

    nxt = list(range(1, n)) + [0]
    prv = [n - 1] + list(range(n - 1))
    gaps = np.empty(n)
    gaps[:-1] = np.diff(centers)
    gaps[-1] = centers[0] + 1.0 - centers[-1]
    if not params.circular:
        gaps[-1] = math.inf
    gaps = gaps.tolist()
    version = [0] * n
    frozen_step = [-1] * n
    unfrozen = n

    def due(g):
        return max(1, math.ceil(g / delta - 1e-9))

    heap = [(due(g), i, 0) for i, g in enumerate(gaps) if math.isfinite(g) and n > 1]
    heapq.heapify(heap)

    def valid(i, ver):
        return frozen_step[i] < 0 and version[i] == ver and frozen_step[nxt[i]] < 0 and nxt[i] != i

    step = 1
    while unfrozen > 1 and heap:
        step = heap[0][0]
        pending = []
        while heap and heap[0][0] <= step:
            _, i, ver = heapq.heappop(heap)
            if valid(i, ver):
                pending.append((i, ver))
        pending = [pending[t] for t in rng.permutation(len(pending))]
        while pending and unfrozen > 1:
            i, ver = pending.pop()
            if not valid(i, ver):
                continue
            j = nxt[i]
            v = choose(i, j)
            frozen_step[v] = step
            unfrozen -= 1
            a, b = prv[v], nxt[v]
            nxt[a], prv[b] = b, a
            gaps[a] = gaps[a] + gaps[v]
            version[a] += 1
            if a == b or not math.isfinite(gaps[a]):
                continue
            d = due(gaps[a])
            if d <= step:
                pending.insert(int(rng.integers(len(pending) + 1)), (a, version[a]))
            else:
                heapq.heappush(heap, (d, a, version[a]))

    fs = np.array(frozen_step)
    lengths = np.where(fs < 0, step, fs) * delta
    lo = centers - lengths / 2
    if params.circular:
        lengths = np.minimum(lengths, 1.0)
        cov = Covering(np.mod(lo, 1.0), lengths, circular=True)
    else:
        a = np.clip(lo, 0.0, 1.0)
        b = np.clip(lo + lengths, 0.0, 1.0)
        cov = Covering(a, b - a)
    order = np.argsort(-lengths, kind="stable")
    return SimResult(cov, int(step), _trace_hash(cov, rng, step), asdict(params), freeze_steps=fs[order])


def arc_overlap(a, la, b, lb, circular=True):
    """Measure of [a, a+la) intersected with [b, b+lb), arrays allowed."""
    if not circular:
        return np.maximum(0.0, np.minimum(a + la, b + lb) - np.maximum(a, b))
    total = 0.0
    for m in (-1.0, 0.0, 1.0):
        total = total + np.maximum(0.0, np.minimum(a + la, b + lb + m) - np.maximum(a, b + m))
    return total


def arc_difference(a, la, b, lb, circular=True):
    """Start and length of B minus A where len(B) <= len(A); empty gives length 0."""
    if not circular:
        left = np.minimum(b + lb, a) - b
        right_start = np.maximum(b, a + la)
        right = b + lb - right_start
        use_left = left > 0
        start = np.where(use_left, b, right_start)
        length = np.where(use_left, left, np.maximum(right, 0.0))
        return start, length
    rel = np.mod(b - a, 1.0)
    p1_start = np.maximum(rel, la)
    p1_len = np.minimum(rel + lb, 1.0) - p1_start
    p2_len = rel + lb - 1.0 - la
    use1 = p1_len > 0
    start = np.where(use1, p1_start, 1.0 + la)
    length = np.where(use1, p1_len, np.maximum(p2_len, 0.0))
    return np.mod(a + start, 1.0), length


def _spec_sweep(lo, length, alive, gamma, eps, circular):
    """One sweep, longest current interval first; returns modification count."""
    n = lo.size
    processed = np.zeros(n, dtype=bool)
    heap = [(-length[i], i) for i in np.nonzero(alive)[0]]
    heapq.heapify(heap)
    changes = 0
    while heap:
        negl, i = heapq.heappop(heap)
        if processed[i] or not alive[i] or -negl != length[i]:
            continue
        processed[i] = True
        li = length[i]
        cand = alive & ~processed & (length <= li) & (length * gamma > li)
        idx = np.nonzero(cand)[0]
        if idx.size == 0:
            continue
        ov = arc_overlap(lo[i], li, lo[idx], length[idx], circular)
        hit = ov > eps
        if not hit.any():
            continue
        idx = idx[hit]
        new_lo, new_len = arc_difference(lo[i], li, lo[idx], length[idx], circular)
        changes += idx.size
        lo[idx] = new_lo
        length[idx] = new_len
        dead = new_len <= eps
        alive[idx[dead]] = False
        length[idx[dead]] = 0.0
        for j, l in zip(idx[~dead].tolist(), new_len[~dead].tolist()):
            heapq.heappush(heap, (-l, j))
    return changes


def run_specialization(params: SpecParams, max_sweeps: int = 100) -> SimResult:
    rng = make_rng(params.seed)
    n = params.n
    centers = rng.random(n)
    length = rng.random(n)
    lo = centers - length / 2
    if params.circular:
        lo = np.mod(lo, 1.0)
    else:
        hi = np.clip(lo + length, 0.0, 1.0)
        lo = np.clip(lo, 0.0, 1.0)
        length = hi - lo
    alive = length > params.fixpoint_eps
    history = [float(length[alive].sum())]
    sweeps = 0
    while sweeps < max_sweeps:
        changes = _spec_sweep(lo, length, alive, params.gamma, params.fixpoint_eps, params.circular)
        history.append(float(length[alive].sum()))
        if changes == 0:
            break
        sweeps += 1
    cov = Covering(lo[alive], length[alive], circular=params.circular)
    p = asdict(params)
    return SimResult(cov, sweeps, _trace_hash(cov, rng, sweeps), p, length_history=history)


def lengths_to_rank_freq(result) -> RankFrequencyTable:
    """Interval lengths as rank frequencies (proportionality constant 1)."""
    cov = result.covering if isinstance(result, SimResult) else result
    lengths = cov.length[cov.length > 0]
    if lengths.size == 0:
        raise EmptyCovering("covering has no interval of positive length")
    return RankFrequencyTable(np.sort(lengths)[::-1])


def fixpoint_violations(cov: Covering, gamma: float, eps: float = 1e-12) -> int:
    """Count pairs that still intersect with a length ratio inside the band."""
    count = 0
    L = cov.length
    for i in range(len(cov)):
        j = np.arange(i + 1, len(cov))
        band = (L[j] * gamma > L[i]) & (L[i] * gamma > L[j])
        j = j[band]
        if j.size:
            ov = arc_overlap(cov.lo[i], L[i], cov.lo[j], L[j], cov.circular)
            count += int(np.sum(ov > eps))
    return count
