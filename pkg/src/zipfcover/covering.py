"""Coverings of the unit interval and their gap/overlap diagnostics.

A covering is a rank-ordered set of arcs on S = [0, 1).  On the circular
topology an arc may run past 1 and wrap to 0.  All measures are computed
exactly by sweeping sorted endpoints with a coverage-depth counter.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DepthTooLarge, InsufficientMass, RankOutOfRange

MAX_DEPTH = 20
SPACE_MEASURE = 1.0
_MASS_RTOL = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    length: float
    wrap: bool = False

    @property
    def hi(self) -> float:
        h = self.lo + self.length
        return h - 1.0 if self.wrap and h > 1.0 else h


class Covering:
    """Arcs sorted by non-increasing length (stable for equal lengths)."""

    def __init__(self, lo, length, circular: bool = False, presorted: bool = False):
        lo = np.asarray(lo, dtype=float).ravel()
        length = np.asarray(length, dtype=float).ravel()
        if lo.shape != length.shape:
            raise ValueError("lo and length must have the same shape")
        if np.any(length < 0) or np.any(length > SPACE_MEASURE):
            raise ValueError("interval lengths must lie in [0, 1]")
        if circular:
            lo = np.mod(lo, 1.0)
        elif np.any(lo < 0) or np.any(lo + length > 1.0 + 1e-12):
            raise ValueError("linear intervals must lie inside [0, 1]")
        if not presorted:
            order = np.argsort(-length, kind="stable")
            lo, length = lo[order], length[order]
        elif np.any(np.diff(length) > 0):
            raise ValueError("presorted covering is not in non-increasing length order")
        lo.setflags(write=False)
        length.setflags(write=False)
        self.lo = lo
        self.length = length
        self.circular = bool(circular)

    @classmethod
    def from_bounds(cls, bounds: Iterable[Sequence[float]]):
        """Linear covering from (lo, hi) pairs."""
        b = np.asarray(list(bounds), dtype=float).reshape(-1, 2)
        return cls(b[:, 0], b[:, 1] - b[:, 0])

    def __len__(self):
        return self.lo.size

    def __eq__(self, other):
        return (
            isinstance(other, Covering)
            and self.circular == other.circular
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.length, other.length)
        )

    def __repr__(self):
        kind = "circular" if self.circular else "linear"
        return f"Covering(n={len(self)}, {kind})"

    @property
    def space_measure(self) -> float:
        return SPACE_MEASURE

    @property
    def intervals(self):
        return [Interval(float(a), float(l), self.circular) for a, l in zip(self.lo, self.length)]

    def subset(self, start: int, stop: int) -> "Covering":
        """Ranks start..stop-1 (0-based slice), order preserved."""
        return Covering(self.lo[start:stop], self.length[start:stop], self.circular, presorted=True)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "lo", "hi", "length"])
            hi = self.lo + self.length
            if self.circular:
                hi = np.where(hi > 1.0, hi - 1.0, hi)
            for k, (a, b, l) in enumerate(zip(self.lo, hi, self.length), start=1):
                w.writerow([k, repr(float(a)), repr(float(b)), repr(float(l))])

    @classmethod
    def from_csv(cls, path, circular: Optional[bool] = None):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        lo = np.array([float(r["lo"]) for r in rows])
        hi = np.array([float(r["hi"]) for r in rows])
        length = np.array([float(r["length"]) for r in rows])
        if circular is None:
            circular = bool(np.any(hi < lo))
        return cls(lo, length, circular)


def _linear_pieces(c: Covering):
    lo, hi = c.lo, c.lo + c.length
    if not c.circular:
        return lo, hi
    over = hi > 1.0
    starts = np.concatenate([lo, np.zeros(over.sum())])
    ends = np.concatenate([np.minimum(hi, 1.0), hi[over] - 1.0])
    return starts, ends


def coverage_profile(c: Covering):
    """(uncovered, covered exactly once, covered at least twice) measures."""
    starts, ends = _linear_pieces(c)
    keep = ends > starts
    starts, ends = starts[keep], ends[keep]
    if starts.size == 0:
        return SPACE_MEASURE, 0.0, 0.0
    pos = np.concatenate([starts, ends, [0.0, SPACE_MEASURE]])
    delta = np.concatenate([np.ones(starts.size), -np.ones(ends.size), [0, 0]])
    order = np.argsort(pos, kind="stable")
    pos, delta = pos[order], delta[order]
    depth = np.cumsum(delta)[:-1]
    seg = np.diff(pos)
    zero = float(seg[depth == 0].sum())
    once = float(seg[depth == 1].sum())
    multi = float(seg[depth >= 2].sum())
    return zero, once, multi


def union_measure(c: Covering) -> float:
    return SPACE_MEASURE - coverage_profile(c)[0]


def gap(c: Covering) -> float:
    """Measure of S not covered by any interval."""
    return coverage_profile(c)[0]


def overlap(c: Covering) -> float:
    """Measure of S covered by two or more intervals."""
    return coverage_profile(c)[2]


def _layer_stop(n, k, rho):
    # small slack so rho = m/k from choose_rho maps back to m
    return min(n, int(math.floor(k * rho + 1e-9)))


def layer(c: Covering, k: int, rho: float) -> Covering:
    """Sub-covering of ranks k..floor(k*rho) (1-based, inclusive)."""
    n = len(c)
    if k < 1 or k > n:
        raise RankOutOfRange(f"k={k} outside 1..{n}")
    if not rho > 1:
        raise ValueError("rho must exceed 1")
    return c.subset(k - 1, _layer_stop(n, k, rho))


def hierarchical_covering(depth: int) -> Covering:
    """Dyadic covering: rank 1 is S, ranks 2^d..2^(d+1)-1 tile S at scale 2^-d."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} > {MAX_DEPTH}")
    lo, length = [], []
    for d in range(depth + 1):
        m = 1 << d
        lo.append(np.arange(m) / m)
        length.append(np.full(m, 1.0 / m))
    return Covering(np.concatenate(lo), np.concatenate(length), presorted=True)


def dyadic_length(k) -> np.ndarray:
    """mu_k = 2^-floor(log2 k), the extent of rank k in the dyadic covering."""
    k = np.asarray(k, dtype=np.int64)
    return np.ldexp(1.0, -(np.floor(np.log2(k)).astype(int)))


def choose_rho(c: Covering, k: int) -> float:
    """Smallest rho with total length of ranks k..k*rho reaching the space measure.

    When rank k alone carries unit length the layer is that single interval;
    rho is then reported as 1 + 1/(2k), which still floors to rank k while
    keeping rho > 1.
    """
    n = len(c)
    if k < 1 or k > n:
        raise RankOutOfRange(f"k={k} outside 1..{n}")
    csum = np.cumsum(c.length[k - 1 :])
    target = SPACE_MEASURE * (1 - _MASS_RTOL)
    idx = int(np.searchsorted(csum, target, side="left"))
    if idx >= csum.size:
        raise InsufficientMass(f"ranks >= {k} hold total length {csum[-1]:.6g} < 1")
    if idx == 0:
        return 1.0 + 0.5 / k
    return (k + idx) / k


@dataclass(frozen=True)
class LayerRow:
    k: int
    rho: float
    gap: float
    overlap: float
    length_sum: float


class LayerDiagnostics(list):
    """Rows of (k, rho, gap, overlap, length_sum), one per start rank."""

    FIELDS = ("k", "rho", "gap", "overlap", "length_sum")

    @property
    def rows(self):
        return list(self)

    def column(self, name) -> np.ndarray:
        return np.array([getattr(r, name) for r in self])

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.FIELDS)
            for r in self:
                w.writerow([r.k] + [repr(float(getattr(r, f))) for f in self.FIELDS[1:]])


def layer_diagnostics(c: Covering, k_values: Iterable[int], rho: Optional[float] = None) -> LayerDiagnostics:
    """Gap and overlap of the (rho, k)-layer for each k.

    With ``rho=None`` each k gets its own rho from :func:`choose_rho`.
    """
    out = LayerDiagnostics()
    for k in k_values:
        r = choose_rho(c, k) if rho is None else float(rho)
        sub = layer(c, k, r)
        g, _, ov = coverage_profile(sub)
        out.append(LayerRow(int(k), r, g, ov, float(sub.length.sum())))
    return out


def feasible_k_values(c: Covering, k_max: Optional[int] = None, per_decade: int = 10) -> list:
    """Log-spaced start ranks whose tail still carries unit mass."""
    tail = np.cumsum(c.length[::-1])[::-1]
    ok = np.nonzero(tail >= SPACE_MEASURE * (1 - _MASS_RTOL))[0]
    if ok.size == 0:
        return []
    hi = int(ok[-1]) + 1
    if k_max is not None:
        hi = min(hi, int(k_max))
    # the layer must fit before the tail runs out; choose_rho enforces that
    ks = np.unique(np.round(np.logspace(0, math.log10(hi), per_decade * max(1, int(math.log10(hi)) + 1))).astype(int))
    return [int(k) for k in ks if 1 <= k <= hi]


def zipfian_test(diag: LayerDiagnostics, threshold: float = 0.1, tail: int = 3) -> bool:
    """Finite-size stand-in for vanishing layer gap: last ``tail`` rows below threshold."""
    if len(diag) == 0:
        return False
    rows = list(diag)[-tail:]
    return all(r.gap < threshold for r in rows)
