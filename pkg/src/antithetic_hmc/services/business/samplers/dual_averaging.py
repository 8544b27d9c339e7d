"""
对偶平均步长自适应

在预烧期间把接受概率推向目标 δ：
    H̄ₘ = (1 − 1/(m+t₀))·H̄ₘ₋₁ + (δ − αₘ)/(m+t₀)
    log εₘ = μ − (√m/γ)·H̄ₘ
    log ε̄ₘ = m^{−κ}·log εₘ + (1 − m^{−κ})·log ε̄ₘ₋₁
预烧结束后步长固定为 ε̄。
"""

import math
from dataclasses import dataclass, replace
from typing import Tuple


@dataclass(frozen=True)
class DualAveragingState:
    """
    对偶平均状态

    Attributes:
        mu: 近端中心 log(10·ε₀)
        epsilon_bar: 平均步长 ε̄
        h_bar: 平均误差信号 H̄
        target: 目标接受率 δ
        gamma: γ
        t0: t₀
        kappa: κ
        m: 已完成的更新次数
    """
    mu: float
    epsilon_bar: float = 1.0
    h_bar: float = 0.0
    target: float = 0.8
    gamma: float = 0.05
    t0: float = 10.0
    kappa: float = 0.75
    m: int = 0

    @classmethod
    def initial(cls, step_size: float, target: float = 0.8, gamma: float = 0.05,
                t0: float = 10.0, kappa: float = 0.75) -> "DualAveragingState":
        if not step_size > 0:
            raise ValueError(f"初始步长必须为正: {step_size}")
        return cls(mu=math.log(10.0 * step_size), target=target, gamma=gamma, t0=t0, kappa=kappa)


def dual_averaging_step(state: DualAveragingState, alpha: float) -> Tuple[DualAveragingState, float]:
    """
    用第 m 次迭代的接受概率更新状态

    Args:
        state: 当前状态
        alpha: 接受概率 αₘ

    Returns:
        (新状态, 下一次迭代使用的步长 εₘ)
    """
    m = state.m + 1
    eta = 1.0 / (m + state.t0)
    h_bar = (1.0 - eta) * state.h_bar + eta * (state.target - alpha)
    log_epsilon = state.mu - math.sqrt(m) / state.gamma * h_bar
    weight = m ** (-state.kappa)
    log_epsilon_bar = weight * log_epsilon + (1.0 - weight) * math.log(state.epsilon_bar)
    new_state = replace(state, m=m, h_bar=h_bar, epsilon_bar=math.exp(log_epsilon_bar))
    return new_state, math.exp(log_epsilon)


class DualAveraging:
    """
    有状态的步长自适应器

    Attributes:
        state: 当前对偶平均状态
        step_size: 当前应使用的步长
    """

    def __init__(self, step_size: float, target: float = 0.8, gamma: float = 0.05,
                 t0: float = 10.0, kappa: float = 0.75):
        self.state = DualAveragingState.initial(step_size, target, gamma, t0, kappa)
        self.step_size = step_size

    def step(self, alpha: float) -> float:
        """记录一次接受概率并返回下一次迭代的步长"""
        self.state, self.step_size = dual_averaging_step(self.state, alpha)
        return self.step_size

    def final_step_size(self) -> float:
        """预烧结束后冻结使用的 ε̄（从未更新时为初始步长）"""
        return self.state.epsilon_bar if self.state.m > 0 else self.step_size
