"""
贝叶斯逻辑回归目标模块

似然为标准伯努利对数似然 y·log σ(xᵀw) + (1−y)·log(1−σ(xᵀw))，
先验为 w_d ~ N(0, prior_scale²)，作用于包括偏置在内的全部权重。
势能不含与 w 无关的归一化常数。
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.special import expit

from ...core.interfaces import ITargetModel
from ..data.types import ClassificationData

# 设置日志记录器
logger = logging.getLogger(__name__)


def _prior_precision(prior_scale: Optional[float]) -> float:
    """先验精度 1/s²；scale 为 None 或 inf 时不加先验"""
    if prior_scale is None or math.isinf(prior_scale):
        return 0.0
    if prior_scale <= 0:
        raise ValueError(f"先验标准差必须为正: {prior_scale}")
    return 1.0 / (prior_scale * prior_scale)


def blr_neg_log_posterior(w: np.ndarray, data: ClassificationData, prior_scale: Optional[float] = 1.0) -> float:
    """
    负对数后验

    −log σ(z) = log(1+e^{−z}) 与 −log(1−σ(z)) = log(1+e^{z}) 用 logaddexp 计算，
    |z| 达到 10³ 也不会溢出。

    Args:
        w: 权重向量（长度 D）
        data: 分类数据
        prior_scale: 先验标准差，None 表示无先验

    Returns:
        势能值
    """
    w = np.asarray(w, dtype=float)
    z = data.X @ w
    nll = float(np.sum(data.y * np.logaddexp(0.0, -z) + (1.0 - data.y) * np.logaddexp(0.0, z)))
    return nll + 0.5 * _prior_precision(prior_scale) * float(w @ w)


def blr_grad(w: np.ndarray, data: ClassificationData, prior_scale: Optional[float] = 1.0) -> np.ndarray:
    """
    解析梯度 Xᵀ(σ(Xw) − y) + w/s²

    Args:
        w: 权重向量
        data: 分类数据
        prior_scale: 先验标准差

    Returns:
        梯度向量
    """
    w = np.asarray(w, dtype=float)
    residual = expit(data.X @ w) - data.y
    return data.X.T @ residual + _prior_precision(prior_scale) * w


def blr_hessian(w: np.ndarray, data: ClassificationData, prior_scale: Optional[float] = 1.0) -> np.ndarray:
    """
    Hessian XᵀΛX + I/s²，Λ = diag(σ(1−σ))

    Args:
        w: 权重向量
        data: 分类数据
        prior_scale: 先验标准差

    Returns:
        D×D 对称矩阵
    """
    w = np.asarray(w, dtype=float)
    s = expit(data.X @ w)
    weights = s * (1.0 - s)
    hess = (data.X * weights[:, None]).T @ data.X
    hess += _prior_precision(prior_scale) * np.eye(w.size)
    return 0.5 * (hess + hess.T)


class BayesianLogisticRegression(ITargetModel):
    """
    贝叶斯逻辑回归后验

    Attributes:
        data: 分类数据（按引用持有）
        prior_scale: 先验标准差
    """

    name = "blr"

    def __init__(self, data: ClassificationData, prior_scale: Optional[float] = 1.0):
        """
        初始化模型

        Args:
            data: 标准化并含偏置列的分类数据
            prior_scale: 先验标准差
        """
        self.data = data
        self.prior_scale = prior_scale
        _prior_precision(prior_scale)
        logger.debug(f"创建逻辑回归模型: N={data.n_observations}, D={data.dimension}")

    @property
    def dimension(self) -> int:
        return self.data.dimension

    def neg_log_posterior(self, w: np.ndarray) -> float:
        return blr_neg_log_posterior(w, self.data, self.prior_scale)

    def grad(self, w: np.ndarray) -> np.ndarray:
        return blr_grad(w, self.data, self.prior_scale)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return blr_hessian(w, self.data, self.prior_scale)
