"""
链轨迹记录与步长调度
"""

import logging
from typing import Optional

import numpy as np

from ...core.hamiltonian import metropolis
from .base_sampler import Proposal
from .config import ChainOutput, SamplerConfig
from .dual_averaging import DualAveraging

# 设置日志记录器
logger = logging.getLogger(__name__)


class StepSizeSchedule:
    """
    预烧期间对偶平均，预烧结束时冻结为 ε̄

    Attributes:
        current: 当前迭代使用的步长
    """

    def __init__(self, config: SamplerConfig):
        self.current = config.step_size
        self._adapter: Optional[DualAveraging] = None
        if config.adapt_during_burnin and config.n_burnin > 0:
            self._adapter = DualAveraging(config.step_size, config.adapt_target,
                                          config.gamma, config.t0, config.kappa)

    def observe(self, alpha: float) -> None:
        if self._adapter is not None:
            self.current = self._adapter.step(alpha)

    def freeze(self) -> float:
        if self._adapter is not None:
            self.current = self._adapter.final_step_size()
            logger.debug(f"步长自适应完成，冻结步长 ε = {self.current:.6g}")
        return self.current


def apply_metropolis(proposal: Proposal, u: float, current: np.ndarray):
    """
    执行判决，发散提议一律拒绝

    Returns:
        (下一位置, 是否接受)
    """
    if proposal.divergent:
        return current, False
    accepted = not proposal.alpha < u
    return metropolis(proposal.alpha, u, proposal.position, current), accepted


class ChainTrace:
    """单链逐次迭代记录"""

    def __init__(self, config: SamplerConfig, dimension: int):
        self.n_burnin = config.n_burnin
        total = config.n_burnin + config.n_samples
        self.samples = np.empty((config.n_samples, dimension))
        self.delta_h = np.empty(total)
        self.alpha = np.empty(total)
        self.accepted = np.zeros(config.n_samples, dtype=bool)
        self.n_divergent = 0
        self.fixed_point_failures = 0

    def record(self, iteration: int, position: np.ndarray, proposal: Proposal, accepted: bool) -> None:
        self.delta_h[iteration] = proposal.delta_h
        self.alpha[iteration] = proposal.alpha
        self.n_divergent += int(proposal.divergent)
        self.fixed_point_failures += proposal.fixed_point_failures
        if iteration >= self.n_burnin:
            row = iteration - self.n_burnin
            self.samples[row] = position
            self.accepted[row] = accepted

    def to_output(self, seconds: float, step_size: float) -> ChainOutput:
        return ChainOutput(
            samples=self.samples,
            acceptance_rate=float(np.mean(self.accepted)),
            delta_h=self.delta_h,
            accept_probabilities=self.alpha[self.n_burnin:].copy(),
            burnin_accept_probabilities=self.alpha[:self.n_burnin].copy(),
            n_divergent=self.n_divergent,
            seconds=seconds,
            step_size=step_size,
            fixed_point_failures=self.fixed_point_failures,
        )
