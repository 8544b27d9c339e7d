"""
目标模型包

提供贝叶斯逻辑回归、Merton 跳跃扩散以及测试用基准目标，
并包含 SoftAbs 度量变换。
"""

from .logistic_regression import (
    BayesianLogisticRegression,
    blr_neg_log_posterior,
    blr_grad,
    blr_hessian,
)
from .jump_diffusion import (
    JumpDiffusionParams,
    MertonJumpDiffusion,
    poisson_truncation,
    jd_transition_log_density,
    jd_neg_log_posterior,
    jd_grad,
    jd_hessian,
)
from .benchmark_targets import GaussianTarget, BananaTarget
from .softabs import SoftAbsMetric, softabs_metric, softabs_eigenvalues
from .finite_differences import finite_difference_hessian, coordinate_steps

__all__ = [
    'BayesianLogisticRegression',
    'blr_neg_log_posterior',
    'blr_grad',
    'blr_hessian',
    'JumpDiffusionParams',
    'MertonJumpDiffusion',
    'poisson_truncation',
    'jd_transition_log_density',
    'jd_neg_log_posterior',
    'jd_grad',
    'jd_hessian',
    'GaussianTarget',
    'BananaTarget',
    'SoftAbsMetric',
    'softabs_metric',
    'softabs_eigenvalues',
    'finite_difference_hessian',
    'coordinate_steps',
]
