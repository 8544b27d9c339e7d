"""
黎曼流形 HMC：以 SoftAbs 正则化的 Hessian 作为位置相关质量矩阵
"""

import logging
import math
from typing import Any, Optional

import numpy as np

from ...core.exceptions import FactorizationError
from ...core.hamiltonian import PhasePoint
from ..integrators.generalized_leapfrog import RiemannianHamiltonian, integrate_generalized_leapfrog
from ..integrators.leapfrog import IntegrationResult
from .base_sampler import BaseSampler

# 设置日志记录器
logger = logging.getLogger(__name__)


class RMHMCSampler(BaseSampler):
    """
    RMHMC 内核

    动量 p ~ N(0, G(w))，积分使用广义蛙跳，δH 使用完整黎曼哈密顿量。

    Attributes:
        riemannian: 黎曼哈密顿量（持有当前位置的度量缓存）
    """

    name = "rmhmc"
    default_trajectory_length = 6
    requires_hessian = True

    def __init__(self, model, config, metric_fn=None):
        super().__init__(model, config)
        self.riemannian = RiemannianHamiltonian(model, softabs_alpha=config.softabs_alpha, metric_fn=metric_fn)

    def draw_iteration_mass(self, streams: Any) -> None:
        return None

    def sample_momentum(self, w: np.ndarray, iteration_mass: Optional[Any], rng: np.random.Generator) -> np.ndarray:
        """
        从 N(0, G(w)) 抽取动量

        度量在 w 处无法分解时仍消耗 D 个正态数并返回 NaN 动量，
        随后的提议会因能量非有限而被拒绝。
        """
        try:
            return self.riemannian.mass_at(w).sample(rng)
        except FactorizationError as e:
            logger.warning(f"当前位置度量分解失败，本次迭代将被拒绝: {e}")
            rng.standard_normal(self.dimension)
            return np.full(self.dimension, np.nan)

    def energy(self, x: PhasePoint, iteration_mass: Optional[Any]) -> float:
        if not np.all(np.isfinite(x.momentum)):
            return math.inf
        return self.riemannian.energy(x)

    def integrate(self, x: PhasePoint, step_size: float, iteration_mass: Optional[Any]) -> IntegrationResult:
        if not np.all(np.isfinite(x.momentum)):
            return IntegrationResult(x, divergent=True)
        return integrate_generalized_leapfrog(self.riemannian, x, self.leapfrog_config(step_size),
                                              self.config.fixed_point)
