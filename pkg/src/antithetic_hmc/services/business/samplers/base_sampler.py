"""
采样内核基类

一次 Metropolis 迭代拆为：抽取质量矩阵 -> 抽取动量 -> 积分并计算 δH -> 判决。
单链运行与反向耦合运行共用这些步骤，区别只在随机数如何在两条链之间共享。
"""

import abc
import logging
import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ...core.hamiltonian import PhasePoint, acceptance_probability
from ...core.interfaces import ISampler, ITargetModel
from ..integrators.leapfrog import IntegrationResult, LeapfrogConfig
from .config import SamplerConfig

# 设置日志记录器
logger = logging.getLogger(__name__)


@dataclass
class Proposal:
    """
    一次提议

    Attributes:
        position: 提议位置
        delta_h: δH = H(旧) − H(新)，发散时为 −inf
        alpha: 接受概率
        divergent: 是否发散
        fixed_point_failures: 不动点未收敛次数
    """
    position: np.ndarray
    delta_h: float
    alpha: float
    divergent: bool = False
    fixed_point_failures: int = 0


class BaseSampler(ISampler):
    """
    采样内核基类

    Attributes:
        model: 目标模型
        config: 采样配置
        trajectory_length: 实际使用的轨迹步数
    """

    name = "base"
    default_trajectory_length = 200
    requires_hessian = False

    def __init__(self, model: ITargetModel, config: SamplerConfig):
        """
        初始化采样内核

        Args:
            model: 目标模型
            config: 采样配置
        """
        if self.requires_hessian and not model.has_hessian():
            raise ValueError(f"采样器 {self.name} 需要模型 {model.name} 提供 Hessian")
        self.model = model
        self.config = config
        self.trajectory_length = config.trajectory_length or self.default_trajectory_length

    def get_name(self) -> str:
        return self.name

    @property
    def dimension(self) -> int:
        return self.model.dimension

    @abc.abstractmethod
    def energy(self, x: PhasePoint, iteration_mass: Optional[Any]) -> float:
        """计算哈密顿量，非有限时返回 +inf"""
        pass

    @abc.abstractmethod
    def integrate(self, x: PhasePoint, step_size: float, iteration_mass: Optional[Any]) -> IntegrationResult:
        """积分一条轨迹"""
        pass

    def leapfrog_config(self, step_size: float) -> LeapfrogConfig:
        return LeapfrogConfig(step_size=step_size, n_steps=self.trajectory_length)

    def propose(self, w: np.ndarray, p: np.ndarray, step_size: float, iteration_mass: Optional[Any]) -> Proposal:
        """
        积分并计算接受概率

        非有限能量或 |δH| 超过阈值时视为发散，α = 0。
        """
        start = PhasePoint(w, p)
        h_old = self.energy(start, iteration_mass)
        result = self.integrate(start, step_size, iteration_mass)
        if result.divergent:
            return Proposal(w, -math.inf, 0.0, True, result.fixed_point_failures)
        h_new = self.energy(result.point, iteration_mass)
        delta_h = h_old - h_new
        if not math.isfinite(delta_h) or abs(delta_h) > self.config.divergence_threshold:
            return Proposal(w, -math.inf if not math.isfinite(delta_h) else delta_h, 0.0, True,
                            result.fixed_point_failures)
        return Proposal(result.point.position, delta_h, acceptance_probability(delta_h),
                        False, result.fixed_point_failures)
