"""
基准目标模块

解析可知的目标分布，供采样器与积分器的性质测试使用。
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg

from ...core.exceptions import FactorizationError
from ...core.interfaces import ITargetModel

# 设置日志记录器
logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)


class GaussianTarget(ITargetModel):
    """
    多元高斯目标 N(mean, covariance)

    势能为精确的负对数密度（含归一化常数）。
    """

    name = "gaussian"

    def __init__(self, mean: Optional[np.ndarray] = None, covariance: Optional[np.ndarray] = None,
                 dimension: Optional[int] = None):
        """
        初始化高斯目标

        Args:
            mean: 均值向量，默认零向量
            covariance: 协方差矩阵，默认单位阵
            dimension: 仅给出维度时使用标准正态
        """
        if mean is None and covariance is None and dimension is None:
            raise ValueError("必须至少给出 mean、covariance 或 dimension 之一")
        if covariance is not None:
            covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
            dim = covariance.shape[0]
        elif mean is not None:
            dim = int(np.size(mean))
        else:
            dim = int(dimension)
        self.mean = np.zeros(dim) if mean is None else np.asarray(mean, dtype=float).ravel()
        self.covariance = np.eye(dim) if covariance is None else covariance
        try:
            chol = linalg.cholesky(self.covariance, lower=True)
        except linalg.LinAlgError as e:
            raise FactorizationError("covariance", str(e)) from e
        self.precision = linalg.cho_solve((chol, True), np.eye(dim))
        self.precision = 0.5 * (self.precision + self.precision.T)
        self._log_norm = 0.5 * (dim * LOG_2PI) + float(np.sum(np.log(np.diag(chol))))

    @property
    def dimension(self) -> int:
        return int(self.mean.size)

    def neg_log_posterior(self, w: np.ndarray) -> float:
        d = np.asarray(w, dtype=float) - self.mean
        return self._log_norm + 0.5 * float(d @ (self.precision @ d))

    def grad(self, w: np.ndarray) -> np.ndarray:
        return self.precision @ (np.asarray(w, dtype=float) - self.mean)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return self.precision.copy()


class BananaTarget(ITargetModel):
    """
    二维弯曲高斯（香蕉形）目标

    x₁ ~ N(0, s²)，x₂ | x₁ ~ N(b·(x₁² − s²), 1)。
    Hessian 在尾部不定，需要 SoftAbs 修正。
    """

    name = "banana"

    def __init__(self, curvature: float = 0.1, scale: float = 2.0):
        if scale <= 0:
            raise ValueError(f"尺度必须为正: {scale}")
        self.curvature = float(curvature)
        self.scale = float(scale)

    @property
    def dimension(self) -> int:
        return 2

    def _residual(self, w: np.ndarray) -> float:
        return float(w[1] - self.curvature * (w[0] * w[0] - self.scale * self.scale))

    def neg_log_posterior(self, w: np.ndarray) -> float:
        w = np.asarray(w, dtype=float)
        u = self._residual(w)
        return LOG_2PI + math.log(self.scale) + 0.5 * w[0] * w[0] / self.scale ** 2 + 0.5 * u * u

    def grad(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        u = self._residual(w)
        return np.array([w[0] / self.scale ** 2 - 2.0 * self.curvature * w[0] * u, u])

    def hessian(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        u = self._residual(w)
        b = self.curvature
        cross = -2.0 * b * w[0]
        return np.array([
            [1.0 / self.scale ** 2 + cross * cross - 2.0 * b * u, cross],
            [cross, 1.0],
        ])
