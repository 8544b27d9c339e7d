"""
SoftAbs 度量模块

将可能不定的对称矩阵映射为保持特征向量的正定矩阵：
特征值 λ ↦ λ·coth(αλ)，λ→0 时极限为 1/α。
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ...core.exceptions import FactorizationError

# 设置日志记录器
logger = logging.getLogger(__name__)

# |αλ| 小于该值时使用级数展开
SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class SoftAbsMetric:
    """
    SoftAbs 度量及其派生量

    Attributes:
        G: 正定度量矩阵
        logdet: log|G|
        G_inverse: G⁻¹
        eigenvalues: G 的特征值（softabs 映射后）
        eigenvectors: 特征向量（与输入矩阵相同）
    """
    G: np.ndarray
    logdet: float
    G_inverse: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def softabs_eigenvalues(eigenvalues: np.ndarray, alpha: float) -> np.ndarray:
    """
    逐元素计算 λ·coth(αλ)

    Args:
        eigenvalues: 原始特征值
        alpha: 软化系数，越大越接近 |λ|

    Returns:
        映射后的正特征值
    """
    lam = np.asarray(eigenvalues, dtype=float)
    x = alpha * lam
    small = np.abs(x) < SERIES_THRESHOLD
    out = np.empty_like(lam)
    # λ·coth(αλ) = (1/α)·x·coth(x) ≈ (1/α)(1 + x²/3 − x⁴/45)
    xs = x[small]
    out[small] = (1.0 + xs * xs / 3.0 - xs ** 4 / 45.0) / alpha
    xl = x[~small]
    out[~small] = lam[~small] / np.tanh(xl)
    return out


def softabs_metric(H: np.ndarray, alpha: float = 1e6, name: str = "hessian") -> SoftAbsMetric:
    """
    计算 SoftAbs 度量 G = Q·softabs(Λ)·Qᵀ

    Args:
        H: 对称矩阵
        alpha: 软化系数（> 0）
        name: 错误信息中的矩阵名称

    Returns:
        SoftAbsMetric（含对数行列式与逆）

    Raises:
        FactorizationError: 特征分解失败或输入非有限
    """
    if alpha <= 0:
        raise ValueError(f"SoftAbs 系数必须为正: {alpha}")
    H = np.atleast_2d(np.asarray(H, dtype=float))
    if not np.all(np.isfinite(H)):
        raise FactorizationError(name, "包含非有限元素")
    try:
        lam, Q = linalg.eigh(0.5 * (H + H.T))
    except linalg.LinAlgError as e:
        raise FactorizationError(name, str(e)) from e
    s = softabs_eigenvalues(lam, alpha)
    G = (Q * s) @ Q.T
    G_inverse = (Q / s) @ Q.T
    return SoftAbsMetric(
        G=0.5 * (G + G.T),
        logdet=float(np.sum(np.log(s))),
        G_inverse=0.5 * (G_inverse + G_inverse.T),
        eigenvalues=s,
        eigenvectors=Q,
    )
