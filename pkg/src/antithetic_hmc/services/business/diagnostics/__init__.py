"""
诊断包：有效样本量与跨链相关
"""

from .ess import (
    EssReport,
    multivariate_ess,
    batch_means_ess,
    batch_means_covariance,
    antithetic_mess,
    is_degenerate_rho,
    cross_correlations,
    max_cross_correlation,
    normalized_ess,
    round_mess,
    round_normalized,
)

__all__ = [
    'EssReport',
    'multivariate_ess',
    'batch_means_ess',
    'batch_means_covariance',
    'antithetic_mess',
    'is_degenerate_rho',
    'cross_correlations',
    'max_cross_correlation',
    'normalized_ess',
    'round_mess',
    'round_normalized',
]
