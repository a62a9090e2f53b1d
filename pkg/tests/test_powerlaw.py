import math
from fractions import Fraction

import numpy as np
import pytest

from zipfcover.errors import DomainError, EmptyInput, InsufficientData
from zipfcover.powerlaw import (
    RankFrequencyTable,
    default_fit_range,
    fit_zipf_exponent,
    frequency_spectrum,
    harmonic_sum_bounds,
    rank_frequency,
    spectrum_exponent,
)


def test_exact_power_law_recovered():
    k = np.arange(1, 2001)
    fit = fit_zipf_exponent(RankFrequencyTable(3.0 * k**-1.3))
    assert fit.B == pytest.approx(1.3, abs=1e-10)
    assert fit.fit_range == (10, 200)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_range_clipped_and_too_short():
    t = RankFrequencyTable(1.0 / np.arange(1, 51))
    assert fit_zipf_exponent(t, (10, 1000)).fit_range == (10, 50)
    with pytest.raises(InsufficientData):
        fit_zipf_exponent(t, (45, 1000))
    assert default_fit_range(50) == (10, 10)


def test_rank_frequency_ties_keep_first_occurrence():
    t = rank_frequency("b a c a b d".split())
    assert t.labels == ("b", "a", "c", "d")
    assert t.frequencies.tolist() == [2, 2, 1, 1]
    with pytest.raises(EmptyInput):
        rank_frequency([])


def test_table_validation():
    with pytest.raises(ValueError):
        RankFrequencyTable([1.0, 2.0])
    with pytest.raises(ValueError):
        RankFrequencyTable([1.0, 0.0])


def test_csv_roundtrip(tmp_path):
    t = rank_frequency("x y x z x y".split())
    t.to_csv(tmp_path / "t.csv")
    back = RankFrequencyTable.from_csv(tmp_path / "t.csv")
    assert back.frequencies.tolist() == t.frequencies.tolist()
    assert back.labels == t.labels


def test_spectrum_exponent_of_pareto_sample():
    rng = np.random.default_rng(5)
    f = np.sort((1 - rng.random(200_000)) ** (-1 / 1.5))[::-1]
    spec = frequency_spectrum(RankFrequencyTable(f), 30)
    assert spec.fractions.sum() == pytest.approx(1.0)
    assert spectrum_exponent(spec, 1, 100) == pytest.approx(2.5, abs=0.05)


def test_harmonic_bounds_against_exact_fractions():
    for k, n in [(2, 3), (2, 10), (7, 100), (100, 200)]:
        lo, s, hi = harmonic_sum_bounds(k, n)
        exact = sum(Fraction(1, j) for j in range(k, n + 1))
        assert s == pytest.approx(float(exact), rel=1e-14)
        assert lo < s < hi
    assert harmonic_sum_bounds(2, 10)[2] == pytest.approx(math.log(10), abs=1e-12)


def test_harmonic_bounds_domain():
    for k, n in [(1, 10), (5, 5), (6, 5)]:
        with pytest.raises(DomainError):
            harmonic_sum_bounds(k, n)
