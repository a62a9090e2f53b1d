"""Simulation and analysis toolkit for Zipf's law as a property of coverings."""

__version__ = "0.1.0"

from .covering import Covering, gap, hierarchical_covering, layer, layer_diagnostics, overlap
from .evolution import GenParams, SpecParams, run_generalization, run_specialization
from .powerlaw import RankFrequencyTable, fit_zipf_exponent, rank_frequency
from .zeta import hurwitz_zeta, riemann_zeta, solve_exponent

__all__ = [
    "Covering",
    "GenParams",
    "RankFrequencyTable",
    "SpecParams",
    "fit_zipf_exponent",
    "gap",
    "hierarchical_covering",
    "hurwitz_zeta",
    "layer",
    "layer_diagnostics",
    "overlap",
    "rank_frequency",
    "riemann_zeta",
    "run_generalization",
    "run_specialization",
    "solve_exponent",
]
