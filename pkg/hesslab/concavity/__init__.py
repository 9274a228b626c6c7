from .inequality import (
    deficit, deficit_terms_batch, worst_direction, worst_direction_batch, classify_branch,
    semiconvex_subcase, sigma_n_representation_check, fii_lambda_identity, fiijj_lambda_identity,
    lambda_lower_bound, default_constants, default_A, default_delta0,
)
from .certificate import (
    certificate_matrix, certificate_minors, certificate_determinant_bound,
    rank_one_update_definite, determinant_lemma_residual,
)
from .sampler import sample_cone, sample_batch, sample_xi, sample_gamma_k_batch
from .campaign import run_campaign, search_constants, verdict_mask

__all__ = [
    "deficit", "deficit_terms_batch", "worst_direction", "worst_direction_batch", "classify_branch",
    "semiconvex_subcase", "sigma_n_representation_check", "fii_lambda_identity", "fiijj_lambda_identity",
    "lambda_lower_bound", "default_constants", "default_A", "default_delta0",
    "certificate_matrix", "certificate_minors", "certificate_determinant_bound",
    "rank_one_update_definite", "determinant_lemma_residual",
    "sample_cone", "sample_batch", "sample_xi", "sample_gamma_k_batch",
    "run_campaign", "search_constants", "verdict_mask",
]
