"""Copula specs, samplers, exact evaluators and a Monte-Carlo oracle."""
from .exact import UnsupportedCombination, exact_dissimilarity
from .families import (
    BlockProduct,
    Clayton,
    Comonotone,
    Frank,
    GaussianEquicorr,
    Gumbel,
    Independence,
    comonotone_block_product,
    sample,
)
from .oracle import OracleEstimate, kendall_companion_estimate, mc_oracle
from .params import debye1, frank_tau, param_to_tau, tau_to_param
from .polynomial import (
    PolynomialCopula,
    asymmetric_perturbation,
    fgm3,
    four_way_perturbation,
    independence_polynomial,
    negative_fgm_pair,
    pairwise_independent_perturbation,
)

__all__ = [
    "BlockProduct",
    "Clayton",
    "Comonotone",
    "Frank",
    "GaussianEquicorr",
    "Gumbel",
    "Independence",
    "OracleEstimate",
    "PolynomialCopula",
    "UnsupportedCombination",
    "asymmetric_perturbation",
    "comonotone_block_product",
    "debye1",
    "exact_dissimilarity",
    "fgm3",
    "four_way_perturbation",
    "frank_tau",
    "independence_polynomial",
    "kendall_companion_estimate",
    "mc_oracle",
    "negative_fgm_pair",
    "pairwise_independent_perturbation",
    "param_to_tau",
    "sample",
    "tau_to_param",
]
