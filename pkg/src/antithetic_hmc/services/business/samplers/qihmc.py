"""
量子启发 HMC：每次迭代重新抽取对角质量矩阵

M = diag(exp(location + scale·z))，z ~ N(0, I_D) 取自 "mass" 随机流。
抽到的 M 用于该次迭代的动量抽样、位置更新以及两次能量计算。
scale = 0 时 M 恒为单位阵，与 HMC 走完全相同的浮点路径。
"""

import logging
from typing import Any

import numpy as np

from ...core.hamiltonian import MassKind, RealizedMass
from .hmc import HMCSampler

# 设置日志记录器
logger = logging.getLogger(__name__)


class QIHMCSampler(HMCSampler):
    """QIHMC 内核"""

    name = "qihmc"
    default_trajectory_length = 200

    def __init__(self, model, config):
        mass = config.mass
        if mass.kind is not MassKind.STOCHASTIC_DIAGONAL:
            raise ValueError(f"QIHMC 需要随机对角质量规格，得到 {mass.kind.value}")
        self.location = mass.location
        self.scale = mass.scale
        # 跳过 HMCSampler 的固定质量实现
        super(HMCSampler, self).__init__(model, config)

    def draw_iteration_mass(self, streams: Any) -> RealizedMass:
        """
        抽取本次迭代的对角质量矩阵

        总是消耗 D 个标准正态数（scale = 0 时也一样）。
        """
        z = streams.mass.standard_normal(self.dimension)
        return RealizedMass.from_diagonal(np.exp(self.location + self.scale * z), name="qihmc_mass")
