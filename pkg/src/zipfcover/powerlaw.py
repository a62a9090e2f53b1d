"""Rank-frequency tables, log-log exponent fits and frequency spectra."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, EmptyInput, InsufficientData


@dataclass(frozen=True)
class RankFrequencyTable:
    """Frequencies indexed by rank 1..n, non-increasing, all positive."""

    frequencies: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        if f.ndim != 1:
            raise ValueError("frequencies must be one-dimensional")
        if f.size and not np.all(f > 0):
            raise ValueError("frequencies must be strictly positive")
        if np.any(np.diff(f) > 0):
            raise ValueError("frequencies must be non-increasing in rank")
        if self.labels is not None and len(self.labels) != f.size:
            raise ValueError("labels must match frequencies in length")
        f.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return self.frequencies.size

    @property
    def ranks(self) -> np.ndarray:
        return np.arange(1, len(self) + 1)

    @property
    def entries(self):
        labels = self.labels or (None,) * len(self)
        return [(k, float(f), w) for k, f, w in zip(self.ranks, self.frequencies, labels)]

    @classmethod
    def from_values(cls, values: Iterable[float], labels=None):
        """Sort arbitrary positive values into a table (stable for ties)."""
        v = np.asarray(list(values), dtype=float)
        order = np.argsort(-v, kind="stable")
        lab = None if labels is None else [labels[i] for i in order]
        return cls(v[order], lab)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if self.labels is None:
                w.writerow(["rank", "frequency"])
                for k, f in zip(self.ranks, self.frequencies):
                    w.writerow([int(k), repr(float(f))])
            else:
                w.writerow(["rank", "frequency", "word"])
                for k, f, lab in zip(self.ranks, self.frequencies, self.labels):
                    w.writerow([int(k), repr(float(f)), lab])

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise EmptyInput(f"{path}: no rows")
        ranks = [int(r["rank"]) for r in rows]
        if ranks != list(range(1, len(rows) + 1)):
            raise ValueError(f"{path}: ranks must be 1..n in order")
        freqs = [float(r["frequency"]) for r in rows]
        labels = [r["word"] for r in rows] if "word" in rows[0] else None
        return cls(np.array(freqs), labels)


@dataclass(frozen=True)
class PowerLawFit:
    B: float
    intercept: float
    r_squared: float
    fit_range: tuple


@dataclass(frozen=True)
class FrequencySpectrum:
    edges: np.ndarray
    centers: np.ndarray
    fractions: np.ndarray
    densities: np.ndarray = field(repr=False)

    @property
    def bins(self):
        return list(zip(self.centers.tolist(), self.fractions.tolist()))


def rank_frequency(tokens: Iterable[str]) -> RankFrequencyTable:
    """Count tokens; ties keep first-occurrence order."""
    counts = Counter(tokens)
    if not counts:
        raise EmptyInput("token stream is empty")
    # Counter preserves insertion order and sorted() is stable
    items = sorted(counts.items(), key=lambda kv: -kv[1])
    return RankFrequencyTable(
        np.array([c for _, c in items], dtype=float), [w for w, _ in items]
    )


def default_fit_range(n: int) -> tuple:
    return (10, max(10, n // 10))


def loglog_ols(x, y):
    """Slope, intercept and r^2 of ln y on ln x."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return float(slope), float(intercept), r2


def fit_zipf_exponent(table: RankFrequencyTable, fit_range: Optional[Sequence[int]] = None) -> PowerLawFit:
    """OLS of log frequency on log rank over ranks k_min..k_max inclusive."""
    n = len(table)
    k_min, k_max = fit_range if fit_range is not None else default_fit_range(n)
    k_min, k_max = max(1, int(k_min)), min(n, int(k_max))
    if k_max - k_min + 1 < 10:
        raise InsufficientData(f"fit range [{k_min}, {k_max}] has fewer than 10 ranks (table has {n})")
    ranks = np.arange(k_min, k_max + 1)
    slope, intercept, r2 = loglog_ols(ranks, table.frequencies[k_min - 1 : k_max])
    return PowerLawFit(-slope, intercept, r2, (k_min, k_max))


def frequency_spectrum(table: RankFrequencyTable, n_bins: int = 30) -> FrequencySpectrum:
    """Histogram of word frequencies on logarithmic bins over [f_min, f_max]."""
    f = table.frequencies
    if f.size == 0:
        raise EmptyInput("table is empty")
    lo, hi = float(f.min()), float(f.max())
    if lo == hi:
        edges = np.array([lo, lo])
        counts = np.array([f.size])
        widths = np.array([1.0])
    else:
        edges = np.geomspace(lo, hi, n_bins + 1)
        idx = np.clip(np.searchsorted(edges, f, side="right") - 1, 0, n_bins - 1)
        counts = np.bincount(idx, minlength=n_bins)
        widths = np.diff(edges)
    fractions = counts / f.size
    return FrequencySpectrum(edges, np.sqrt(edges[:-1] * edges[1:]), fractions, fractions / widths)


def spectrum_exponent(spec: FrequencySpectrum, f_min: float = 0.0, f_max: float = math.inf) -> float:
    """beta from OLS of log density on log bin centre, occupied bins only."""
    c, d = spec.centers, spec.densities
    mask = (d > 0) & (c >= f_min) & (c <= f_max)
    if mask.sum() < 3:
        raise InsufficientData("fewer than 3 occupied bins in range")
    slope, _, _ = loglog_ols(c[mask], d[mask])
    return -slope


def harmonic_sum_bounds(k: int, n: int):
    """Integral bounds on the harmonic block sum_{j=k}^n 1/j, 2 <= k < n.

    Returns (ln(n/k), sum, ln(n/(k-1))).  Each 1/j lies strictly between the
    integrals of 1/x over [j, j+1] and [j-1, j], which gives both strict
    inequalities for every k >= 2.
    """
    if k < 2 or n <= k:
        raise DomainError(f"need 2 <= k < n, got k={k}, n={n}")
    s = float(np.sum(1.0 / np.arange(k, n + 1, dtype=float)))
    return math.log1p((n - k) / k), s, math.log1p((n - k + 1) / (k - 1))
