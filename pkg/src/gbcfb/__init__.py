"""Numerical lab for two-user Gaussian broadcast channels with passive feedback.

Computes no-feedback capacity regions, the feedback-noise-variance threshold
above which noisy feedback of the strong user's signal is provably useless,
exact information rates of linear feedback schemes via Gaussian covariance
algebra, and numerically verifies every inequality of the associated converse
chains (including the entropy-power-inequality lemma).
"""

__version__ = "0.1.0"

from .channels import (ClassMembership, NoiseDecomposition, OutsideClassError,
                       ScalarChannel, VectorChannel, channel_from_obj, classify,
                       decompose_noise, is_physically_degraded, load_channel,
                       validate_scalar, validate_vector)
from .gaussian import (CovMatrix, EntropyNats, cond_cov, cond_entropy,
                       diff_entropy, entropy_power_term, mutual_info)
from .regions import (MrcDecomposition, RatePair, RegionPoint, boundary,
                      contains, mrc_params, scalar_rate_pair, vector_rate_pair)
from .schemes import (ConverseReport, InequalityStep, LinearScheme,
                      SchemeEvaluation, build_joint_cov, build_vector_joint_cov,
                      evaluate, normalize_power, sample_scheme, scheme_from_obj,
                      scheme_to_obj, simulate_paths, superposition_scheme,
                      verify_lemma1, verify_scalar_converse,
                      verify_vector_converse)
from .search import SearchConfig, SearchResult, certify, search, violation_bits
from .threshold import (PhaseMapRow, ThresholdReport, Verdict, feedback_useless,
                        phase_map, threshold)

__all__ = [
    "__version__",
    "ClassMembership", "NoiseDecomposition", "OutsideClassError",
    "ScalarChannel", "VectorChannel", "channel_from_obj", "classify",
    "decompose_noise", "is_physically_degraded", "load_channel",
    "validate_scalar", "validate_vector",
    "CovMatrix", "EntropyNats", "cond_cov", "cond_entropy", "diff_entropy",
    "entropy_power_term", "mutual_info",
    "MrcDecomposition", "RatePair", "RegionPoint", "boundary", "contains",
    "mrc_params", "scalar_rate_pair", "vector_rate_pair",
    "ConverseReport", "InequalityStep", "LinearScheme", "SchemeEvaluation",
    "build_joint_cov", "build_vector_joint_cov", "evaluate", "normalize_power",
    "sample_scheme", "scheme_from_obj", "scheme_to_obj", "simulate_paths",
    "superposition_scheme", "verify_lemma1", "verify_scalar_converse",
    "verify_vector_converse",
    "SearchConfig", "SearchResult", "certify", "search", "violation_bits",
    "PhaseMapRow", "ThresholdReport", "Verdict", "feedback_useless",
    "phase_map", "threshold",
]
