"""
有限差分工具

为解析二阶导数代价过高的模型提供基于解析梯度的 Hessian。
"""

from typing import Callable

import numpy as np


def coordinate_steps(theta: np.ndarray, relative: float = 1e-5, floor: float = 1e-5) -> np.ndarray:
    """每个坐标的差分步长 h_i = max(floor, relative·|θ_i|)"""
    return np.maximum(floor, relative * np.abs(theta))


def finite_difference_hessian(grad_fn: Callable[[np.ndarray], np.ndarray], theta: np.ndarray,
                              relative: float = 1e-5, floor: float = 1e-5) -> np.ndarray:
    """
    对解析梯度做中心差分得到 Hessian，并对称化 (H + Hᵀ)/2

    Args:
        grad_fn: 梯度函数
        theta: 求值点
        relative: 相对步长
        floor: 最小步长

    Returns:
        对称 Hessian 矩阵
    """
    theta = np.asarray(theta, dtype=float)
    d = theta.size
    steps = coordinate_steps(theta, relative, floor)
    hess = np.empty((d, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = steps[i]
        hess[:, i] = (grad_fn(theta + e) - grad_fn(theta - e)) / (2.0 * steps[i])
    return 0.5 * (hess + hess.T)
