"""Reference text processes (random typing, Simon's cumulative advantage) and
stream measurements: word-length histograms, n-word selection, new-word rate."""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyInput, StreamTooShort
from .evolution import DEFAULT_SEED, make_rng
from .powerlaw import loglog_ols

SOURCES = ("random_typing", "simon", "file")
ALPHABET = string.ascii_lowercase + string.ascii_uppercase
_WORD = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple
    source: str = "file"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")
        toks = tuple(self.tokens)
        if any(t == "" for t in toks):
            raise ValueError("empty-string tokens are not allowed")
        object.__setattr__(self, "tokens", toks)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        """Lowercase, split on anything that is not a letter."""
        return cls(_WORD.findall(text.lower()), "file")

    @classmethod
    def from_file(cls, path) -> "TokenStream":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(" ".join(self.tokens))
            fh.write("\n")


def random_typing(alphabet_size: int, n_chars: int, seed: int = DEFAULT_SEED) -> TokenStream:
    """Uniform keystrokes over ``alphabet_size`` letters plus a space; words are
    the runs between spaces."""
    if not 1 <= alphabet_size <= len(ALPHABET):
        raise DomainError(f"alphabet_size must lie in 1..{len(ALPHABET)}")
    if n_chars < 1:
        raise DomainError("n_chars must be at least 1")
    rng = make_rng(seed)
    table = np.frombuffer((ALPHABET[:alphabet_size] + " ").encode("ascii"), dtype=np.uint8)
    codes = rng.integers(0, alphabet_size + 1, size=n_chars)
    text = table[codes].tobytes().decode("ascii")
    return TokenStream(text.split(), "random_typing")


def simon_ids(p_new: float, n_tokens: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Word ids of a Simon stream; ids are numbered in order of first appearance."""
    if not 0 <= p_new <= 1:
        raise DomainError("p_new must lie in [0, 1]")
    if n_tokens < 1:
        raise DomainError("n_tokens must be at least 1")
    rng = make_rng(seed)
    is_new = rng.random(n_tokens) < p_new
    is_new[0] = True
    t = np.arange(n_tokens)
    src = (rng.random(n_tokens) * t).astype(np.int64)
    ptr = np.where(is_new, t, src)
    # every copy points strictly backwards, so pointer doubling reaches a new token
    while True:
        nxt = ptr[ptr]
        if np.array_equal(nxt, ptr):
            break
        ptr = nxt
    word_of_new = np.cumsum(is_new) - 1
    return word_of_new[ptr]


def word_label(i: int) -> str:
    """Letters-only label for word id i (w + bijective base 26), so a saved
    stream survives the letters-only tokenizer."""
    out = []
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        out.append(string.ascii_lowercase[r])
    return "w" + "".join(reversed(out))


def simon_process(p_new: float, n_tokens: int, seed: int = DEFAULT_SEED) -> TokenStream:
    """New word with probability p_new, otherwise a copy of a uniform earlier token."""
    ids = simon_ids(p_new, n_tokens, seed)
    labels = [word_label(i) for i in range(int(ids.max()) + 1)]
    return TokenStream([labels[i] for i in ids.tolist()], "simon")


@dataclass(frozen=True)
class NWordSeries:
    """Per position t: was token t an n-word of the prefix, and what fraction
    of prefix tokens belonged to n-words."""

    n: int
    is_n_word: np.ndarray
    n_word_fraction: np.ndarray


def n_word_selection_probability(stream, n: int) -> NWordSeries:
    tokens = list(stream)
    if not tokens:
        raise EmptyInput("stream is empty")
    if n < 1:
        raise DomainError("n must be at least 1")
    counts = Counter()
    types_with = Counter()  # count value -> number of types having it
    hit = np.zeros(len(tokens))
    frac = np.zeros(len(tokens))
    for t, w in enumerate(tokens):
        c = counts[w]
        if t:
            frac[t] = types_with[n] * n / t
        hit[t] = c == n
        if c:
            types_with[c] -= 1
        counts[w] = c + 1
        types_with[c + 1] += 1
    return NWordSeries(n, hit, frac)


@dataclass(frozen=True)
class NewWordRateSeries:
    n_tokens: np.ndarray
    rate: np.ndarray
    fitted_decay_exponent: float

    @property
    def points(self):
        return list(zip(self.n_tokens.tolist(), self.rate.tolist()))


def first_occurrences(stream) -> np.ndarray:
    seen = set()
    out = np.zeros(len(stream), dtype=bool)
    for t, w in enumerate(stream):
        if w not in seen:
            seen.add(w)
            out[t] = True
    return out


def new_word_rate(stream, window: int = 1000) -> NewWordRateSeries:
    """Fraction of first occurrences per consecutive window, and its log-log decay."""
    if window < 100:
        raise DomainError("window must be at least 100 tokens")
    first = first_occurrences(stream)
    m = first.size // window
    if m < 2:
        raise StreamTooShort(f"{first.size} tokens give fewer than 2 windows of {window}")
    rate = first[: m * window].reshape(m, window).mean(axis=1)
    ends = np.arange(1, m + 1) * window
    ok = rate > 0
    if ok.sum() < 2:
        raise StreamTooShort("fewer than 2 windows with new words")
    slope, _, _ = loglog_ols(ends[ok], rate[ok])
    return NewWordRateSeries(ends, rate, -slope)


def word_length_distribution(stream) -> dict:
    """Word length -> number of distinct word types of that length."""
    types = set(stream)
    if not types:
        raise EmptyInput("stream is empty")
    return dict(sorted(Counter(len(w) for w in types).items()))
