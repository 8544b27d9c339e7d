"""
显式蛙跳积分器

可分离哈密顿量 H(w, p) = U(w) + K(p) 的辛积分：
半步动量 -> 整步位置 -> 半步动量，重复 L 次，最后把动量取反，
使一次积分映射成为对合。
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ...core.hamiltonian import MassLike, PhasePoint, realize_mass

# 设置日志记录器
logger = logging.getLogger(__name__)

MAX_STEPS = 10 ** 6


@dataclass(frozen=True)
class LeapfrogConfig:
    """
    蛙跳积分配置

    Attributes:
        step_size: 步长 ε
        n_steps: 步数 L
    """
    step_size: float
    n_steps: int

    def __post_init__(self):
        if not (math.isfinite(self.step_size) and self.step_size > 0):
            raise ValueError(f"步长必须为有限正数: {self.step_size}")
        if not 0 <= self.n_steps <= MAX_STEPS:
            raise ValueError(f"步数必须在 [0, {MAX_STEPS}] 内: {self.n_steps}")


@dataclass
class IntegrationResult:
    """
    一条轨迹的积分结果

    Attributes:
        point: 终点（动量已取反）
        divergent: 轨迹中出现非有限值
        gradient_evaluations: 梯度求值次数
        fixed_point_failures: 未在迭代上限内收敛的不动点求解次数
    """
    point: PhasePoint
    divergent: bool = False
    gradient_evaluations: int = 0
    fixed_point_failures: int = 0


def _finite(*arrays: np.ndarray) -> bool:
    return all(bool(np.all(np.isfinite(a))) for a in arrays)


def integrate_leapfrog(model: Any, x: PhasePoint, mass: MassLike, cfg: LeapfrogConfig) -> IntegrationResult:
    """
    蛙跳积分并返回轨迹统计

    Args:
        model: 目标模型
        x: 起点
        mass: 整条轨迹固定的质量矩阵
        cfg: 积分配置

    Returns:
        积分结果；梯度或位置出现非有限值时标记为发散
    """
    m = realize_mass(mass)
    eps = cfg.step_size
    w = np.array(x.position, dtype=float)
    p = np.array(x.momentum, dtype=float)
    if cfg.n_steps == 0:
        return IntegrationResult(PhasePoint(w, -p))

    g = np.asarray(model.grad(w), dtype=float)
    evaluations = 1
    if not _finite(g):
        return IntegrationResult(PhasePoint(w, -p), divergent=True, gradient_evaluations=evaluations)

    for _ in range(cfg.n_steps):
        p = p - 0.5 * eps * g
        w = w + eps * m.inverse_apply(p)
        g = np.asarray(model.grad(w), dtype=float)
        evaluations += 1
        if not _finite(w, g):
            logger.debug("蛙跳轨迹发散：梯度或位置非有限")
            return IntegrationResult(PhasePoint(w, -p), divergent=True, gradient_evaluations=evaluations)
        p = p - 0.5 * eps * g

    return IntegrationResult(PhasePoint(w, -p), gradient_evaluations=evaluations)


def leapfrog(model: Any, x: PhasePoint, mass: MassLike, cfg: LeapfrogConfig) -> PhasePoint:
    """
    蛙跳积分，返回 (w', −p')

    发散时返回的终点含非有限值，调用方据此拒绝提议。
    """
    return integrate_leapfrog(model, x, mass, cfg).point
