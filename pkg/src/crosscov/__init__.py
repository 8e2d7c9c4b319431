"""Rank-one cross-covariance latent variable models and two-block graph equivalences."""
from .covariance import (
    AlphaBounds,
    BlockCovariance,
    LatentParams,
    RankOneFactors,
    ReconstructionParts,
    Tolerances,
    reconstruct,
    validate,
)
from .graphs import (
    Figure4Spec,
    MixedGraph,
    SeparationQuery,
    ancestors,
    figure4,
    implied_separations,
    is_ancestral,
    is_maximal,
    m_separated,
    markov_equivalent,
)
from .parameterization import (
    FeasiblePoint,
    alpha_bounds,
    decompose,
    error_cov_at_alpha,
    feasible_region,
    is_feasible,
    lemma6_curve,
    lemma7_split,
    min_eig_f,
    min_eig_g,
    paired_params,
    salience_at_alpha,
    single_latent_params,
)
from .simulation import (
    DataMatrix,
    empirical_cov,
    fit,
    fit_covariance,
    marginal_independence_check,
    rank_one_project,
    sample_latent,
    tetrad_residual,
)

__version__ = "0.1.0"
