"""
哈密顿蒙特卡罗（固定质量矩阵）
"""

import logging
import math
from typing import Any, Optional

import numpy as np

from ...core.hamiltonian import PhasePoint, RealizedMass, hamiltonian
from ..integrators.leapfrog import IntegrationResult, integrate_leapfrog
from .base_sampler import BaseSampler

# 设置日志记录器
logger = logging.getLogger(__name__)


class HMCSampler(BaseSampler):
    """
    HMC 内核：质量矩阵在整个运行中固定
    """

    name = "hmc"
    default_trajectory_length = 200

    def __init__(self, model, config):
        super().__init__(model, config)
        self._mass = config.mass.realize(model.dimension)

    def draw_iteration_mass(self, streams: Any) -> RealizedMass:
        return self._mass

    def sample_momentum(self, w: np.ndarray, iteration_mass: RealizedMass, rng: np.random.Generator) -> np.ndarray:
        return iteration_mass.sample(rng)

    def energy(self, x: PhasePoint, iteration_mass: RealizedMass) -> float:
        value = hamiltonian(self.model, x, iteration_mass)
        return value if math.isfinite(value) else math.inf

    def integrate(self, x: PhasePoint, step_size: float, iteration_mass: RealizedMass) -> IntegrationResult:
        return integrate_leapfrog(self.model, x, iteration_mass, self.leapfrog_config(step_size))
