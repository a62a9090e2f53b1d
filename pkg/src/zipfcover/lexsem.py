"""Hyponym frequency sums and PCA classification of adjectives by test-noun compatibility."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateMatrix, EmptyTable, ParseError

ROLES = ("head", "hyponym", "excluded")
ZERO_VARIANCE = 1e-12


@dataclass(frozen=True)
class Entry:
    word: str
    freq: float
    note: str = ""
    weight: Optional[float] = None
    translit: str = ""
    gloss: str = ""


@dataclass(frozen=True)
class HyponymTable:
    """Head word(s), their hyponyms, and hyponyms left out of the sum (with reasons)."""

    name: str
    head: tuple
    hyponyms: tuple
    exclusions: tuple = ()

    def __post_init__(self):
        for part in ("head", "hyponyms", "exclusions"):
            object.__setattr__(self, part, tuple(getattr(self, part)))
        entries = self.head + self.hyponyms + self.exclusions
        if any(e.freq < 0 for e in entries):
            raise ValueError(f"{self.name}: negative frequency")
        words = [e.word for e in entries]
        if len(set(words)) != len(words):
            dup = sorted({w for w in words if words.count(w) > 1})
            raise ValueError(f"{self.name}: duplicate word labels {dup}")

    @property
    def head_sum(self) -> float:
        return _sum(self.head)

    @property
    def hyponym_sum(self) -> float:
        return _sum(self.hyponyms)

    @property
    def all_hyponym_sum(self) -> float:
        """Hyponyms including the excluded ones."""
        return _sum(self.hyponyms + self.exclusions)

    @classmethod
    def from_csv(cls, path, name: Optional[str] = None) -> "HyponymTable":
        parts = {r: [] for r in ROLES}
        for lineno, row in _csv_rows(path):
            role = row.get("role", "")
            if role not in parts:
                raise ParseError(f"{path}:{lineno}: unknown role {role!r}")
            try:
                freq = float(row["freq_per_million"])
                weight = float(row["weight"]) if row.get("weight") else None
            except (KeyError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            parts[role].append(
                Entry(row["word"], freq, row.get("note", ""), weight, row.get("translit", ""), row.get("gloss", ""))
            )
        try:
            return cls(name or str(path), parts["head"], parts["hyponym"], parts["excluded"])
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def _sum(entries) -> float:
    return math.fsum(e.freq for e in entries)


def _csv_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [(i, line) for i, line in enumerate(fh, start=1) if not line.startswith("#")]
    if not lines:
        raise ParseError(f"{path}: no header")
    reader = csv.DictReader([line for _, line in lines])
    for (lineno, _), row in zip(lines[1:], reader):
        yield lineno, row


@dataclass(frozen=True)
class SumCheck:
    head_sum: float
    hyponym_sum: float
    ratio: float
    passed: bool


def hyponym_sum_check(table: HyponymTable, tolerance: float = 0.20, include_excluded: bool = False) -> SumCheck:
    """Compare hyponym and head frequency sums.

    Passes when the two sums differ by at most ``tolerance`` of the larger one,
    so the margin is the same whichever side is bigger.
    """
    if not table.head or not (table.hyponyms or table.exclusions):
        raise EmptyTable(f"{table.name}: needs at least one head word and one hyponym")
    head = table.head_sum
    hyp = table.all_hyponym_sum if include_excluded else table.hyponym_sum
    if head <= 0:
        raise EmptyTable(f"{table.name}: head frequency sum is zero")
    ratio = hyp / head
    passed = abs(hyp - head) <= tolerance * max(head, hyp)
    return SumCheck(head, hyp, ratio, passed)


@dataclass(frozen=True)
class CompatibilityMatrix:
    """Adjective x test-noun co-occurrence counts."""

    rows: tuple
    freqs: np.ndarray
    cols: tuple
    polarity: tuple
    counts: np.ndarray
    flags: tuple = ()

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        freqs = np.asarray(self.freqs, dtype=float)
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        object.__setattr__(self, "polarity", tuple(self.polarity))
        if counts.shape != (len(self.rows), len(self.cols)):
            raise ValueError(f"counts shape {counts.shape} does not match {len(self.rows)}x{len(self.cols)}")
        if freqs.shape != (len(self.rows),):
            raise ValueError("one frequency per row required")
        if len(self.polarity) != len(self.cols) or any(p not in "+-" for p in self.polarity):
            raise ValueError("one polarity (+ or -) per column required")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        if not self.flags:
            object.__setattr__(self, "flags", ("",) * len(self.rows))
        counts.setflags(write=False)
        freqs.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "freqs", freqs)

    def permuted(self, order) -> "CompatibilityMatrix":
        order = list(order)
        return CompatibilityMatrix(
            [self.rows[i] for i in order], self.freqs[order], self.cols, self.polarity,
            self.counts[order], [self.flags[i] for i in order],
        )

    @classmethod
    def from_csv(cls, path) -> "CompatibilityMatrix":
        with open(path, newline="", encoding="utf-8") as fh:
            lines = [line for line in fh if not line.startswith("#")]
        table = list(csv.reader(lines))
        if len(table) < 2:
            raise ParseError(f"{path}: no data rows")
        header = table[0]
        has_flag = header[-1] == "flag"
        noun_cells = header[2:-1] if has_flag else header[2:]
        cols, pol = [], []
        for cell in noun_cells:
            name, _, sign = cell.rpartition(":")
            if sign not in ("+", "-") or not name:
                raise ParseError(f"{path}: column {cell!r} lacks a :+ or :- polarity tag")
            cols.append(name)
            pol.append(sign)
        rows, freqs, counts, flags = [], [], [], []
        for i, r in enumerate(table[1:], start=2):
            try:
                rows.append(r[0])
                freqs.append(float(r[1]))
                counts.append([int(c) for c in r[2 : 2 + len(cols)]])
                flags.append(r[-1] if has_flag else "")
            except (IndexError, ValueError) as exc:
                raise ParseError(f"{path}: data row {i}: {exc}") from exc
        try:
            return cls(rows, freqs, cols, pol, counts, flags)
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class PcaResult:
    eigenvector: np.ndarray
    eigenvalue: float
    weights: np.ndarray
    retained_rows: tuple
    dropped_rows: tuple
    classification: tuple = field(default=())

    def weight_of(self, label) -> float:
        return float(self.weights[self.retained_rows.index(label)])


def power_iteration(a: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000):
    """Leading eigenpair of a symmetric positive semi-definite matrix, started from all ones."""
    a = np.asarray(a, dtype=float)
    v = np.ones(a.shape[0]) / np.sqrt(a.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            raise DegenerateMatrix("matrix annihilates the start vector")
        w /= norm
        lam = float(w @ a @ w)
        # compare up to sign so a negative leading eigenvalue cannot stall the loop
        if min(np.linalg.norm(w - v), np.linalg.norm(w + v)) < tol:
            return w, lam
        v = w
    return v, lam


def _standardize(x, axis):
    mu = x.mean(axis=axis, keepdims=True)
    sd = x.std(axis=axis, keepdims=True)
    return (x - mu) / np.where(sd > 0, sd, 1.0)


def pca_classify(m: CompatibilityMatrix, normalize: str = "columns", zero_variance: float = ZERO_VARIANCE) -> PcaResult:
    """Leading principal component of the adjective x noun table.

    Rows whose counts have zero variance carry no contrast and are dropped.
    With ``normalize="columns"`` (default) each noun column is standardized
    over the retained rows, the 8x8 correlation matrix is diagonalized and each
    adjective's weight is its standardized row projected on the eigenvector.
    ``normalize="rows"`` z-scores each adjective row instead and uses the
    uncentred column second-moment matrix of that table.  Population standard
    deviations throughout.  The eigenvector is oriented so its components sum
    to a non-negative number.
    """
    if normalize not in ("columns", "rows"):
        raise ValueError("normalize must be 'columns' or 'rows'")
    counts = m.counts
    keep = counts.var(axis=1) >= zero_variance
    if keep.sum() < 2 or counts.shape[1] < 2:
        raise DegenerateMatrix(f"{int(keep.sum())} usable rows x {counts.shape[1]} columns; need at least 2 x 2")
    x = counts[keep]
    if normalize == "columns":
        if np.any(x.std(axis=0) == 0):
            raise DegenerateMatrix("a test-noun column is constant over the retained rows")
        z = _standardize(x, axis=0)
    else:
        z = _standardize(x, axis=1)
    corr = z.T @ z / z.shape[0]
    vec, lam = power_iteration(corr)
    if vec.sum() < 0:
        vec = -vec
    weights = z @ vec
    retained = tuple(r for r, k in zip(m.rows, keep) if k)
    dropped = tuple(r for r, k in zip(m.rows, keep) if not k)
    cls = tuple(int(s) for s in np.sign(weights))
    return PcaResult(vec, lam, weights, retained, dropped, cls)


def positive_weight_frequency_sum(pca: PcaResult, m: CompatibilityMatrix) -> float:
    """Total per-million frequency of adjectives with positive weight."""
    freq = dict(zip(m.rows, m.freqs.tolist()))
    return math.fsum(freq[r] for r, w in zip(pca.retained_rows, pca.weights) if w > 0)
