"""
采样器配置与输出结构
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

import numpy as np

from ...core.hamiltonian import MassSpec
from ..integrators.generalized_leapfrog import FixedPointConfig


@dataclass(frozen=True)
class SamplerConfig:
    """
    采样器配置

    Attributes:
        n_samples: 预烧后保留的样本数
        n_burnin: 预烧迭代数
        step_size: 初始步长 ε₀（关闭自适应时全程使用）
        trajectory_length: 轨迹步数 L，None 表示使用算法默认值
        adapt_target: 对偶平均的目标接受率 δ
        adapt_during_burnin: 预烧期间是否运行对偶平均
        mass: 质量矩阵规格（HMC 固定质量、QIHMC 对数正态尺度）
        seed: 主种子，None 时使用系统熵
        softabs_alpha: RMHMC 的 SoftAbs 系数
        fixed_point: RMHMC 不动点迭代配置
        divergence_threshold: |δH| 超过该值视为发散
        init_scale: 随机初始位置的标准差
        gamma: 对偶平均 γ
        t0: 对偶平均 t₀
        kappa: 对偶平均 κ
    """
    n_samples: int = 1000
    n_burnin: int = 0
    step_size: float = 0.05
    trajectory_length: Optional[int] = None
    adapt_target: float = 0.8
    adapt_during_burnin: bool = True
    mass: MassSpec = field(default_factory=MassSpec.identity)
    seed: Optional[int] = None
    softabs_alpha: float = 1e6
    fixed_point: FixedPointConfig = field(default_factory=FixedPointConfig)
    divergence_threshold: float = 1000.0
    init_scale: float = 0.1
    gamma: float = 0.05
    t0: float = 10.0
    kappa: float = 0.75

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"样本数至少为 1: {self.n_samples}")
        if self.n_burnin < 0:
            raise ValueError(f"预烧数必须非负: {self.n_burnin}")
        if not (math.isfinite(self.step_size) and self.step_size > 0):
            raise ValueError(f"步长必须为有限正数: {self.step_size}")
        if self.trajectory_length is not None and self.trajectory_length < 1:
            raise ValueError(f"轨迹长度至少为 1: {self.trajectory_length}")
        if not 0.0 < self.adapt_target < 1.0:
            raise ValueError(f"目标接受率必须在 (0, 1) 内: {self.adapt_target}")

    def with_overrides(self, **changes: Any) -> "SamplerConfig":
        """返回修改部分字段后的新配置"""
        return replace(self, **changes)


@dataclass
class ChainOutput:
    """
    单链输出

    Attributes:
        samples: n_samples × D 样本矩阵（仅预烧后）
        acceptance_rate: 预烧后的接受比例
        delta_h: 每次迭代的 δH（含预烧）
        accept_probabilities: 预烧后每次迭代的 α
        burnin_accept_probabilities: 预烧期间每次迭代的 α
        n_divergent: 发散轨迹数（含预烧）
        seconds: 采样阶段耗时
        step_size: 采样阶段使用的步长
        fixed_point_failures: 不动点未收敛次数（RMHMC）
    """
    samples: np.ndarray
    acceptance_rate: float
    delta_h: np.ndarray
    accept_probabilities: np.ndarray
    burnin_accept_probabilities: np.ndarray
    n_divergent: int = 0
    seconds: float = 0.0
    step_size: float = 0.0
    fixed_point_failures: int = 0

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.samples.shape[1])

    def summary(self) -> Dict[str, Any]:
        """获取链的摘要信息"""
        return {
            "n_samples": self.n_samples,
            "dimension": self.dimension,
            "acceptance_rate": self.acceptance_rate,
            "n_divergent": self.n_divergent,
            "seconds": self.seconds,
            "step_size": self.step_size,
            "fixed_point_failures": self.fixed_point_failures,
        }


@dataclass
class CoupledOutput:
    """
    反向耦合链对输出

    Attributes:
        chain_x: 原链
        chain_y: 反向链
        correlations: 每个维度的跨链 Pearson 相关系数
        rho: 各维度相关系数的最大值
        seconds: 链对采样阶段总耗时
    """
    chain_x: ChainOutput
    chain_y: ChainOutput
    correlations: np.ndarray
    rho: float
    seconds: float = 0.0

    def __post_init__(self):
        if self.chain_x.n_samples != self.chain_y.n_samples:
            raise ValueError("两条链的样本数必须相同")
