"""
有效样本量诊断

多元有效样本量 mESS = N·(|Λ|/|Σ|)^{1/D}，其中 Λ 为样本协方差，
Σ 为批均值法估计的马尔可夫链渐近协方差（批大小 b = ⌊√N⌋）。
行列式比值在对数域中计算。
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ...core.exceptions import DiagnosticsError

# 设置日志记录器
logger = logging.getLogger(__name__)

# ρ 不大于 −1 + 该值时返回 +inf 哨兵
DEGENERATE_RHO_MARGIN = 1e-12


@dataclass(frozen=True)
class EssReport:
    """
    mESS 计算结果

    Attributes:
        m_ess: 多元有效样本量
        n: 样本数
        d: 维度
        batch_size: 批大小 b
        n_batches: 批数 a
        sigma_logdet: log|Σ|
        lambda_logdet: log|Λ|
    """
    m_ess: float
    n: int
    d: int
    batch_size: int
    n_batches: int
    sigma_logdet: float
    lambda_logdet: float


def _as_matrix(samples: np.ndarray) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DiagnosticsError(f"样本必须是 N×D 矩阵，得到形状 {x.shape}")
    return x


def _constant_columns(x: np.ndarray) -> List[int]:
    return [int(i) for i in np.nonzero(np.ptp(x, axis=0) == 0)[0]]


def batch_means_covariance(x: np.ndarray, batch_size: int) -> np.ndarray:
    """
    批均值协方差 Σ = b/(a−1)·Σₖ(ȳₖ − ȳ)(ȳₖ − ȳ)ᵀ

    N 不能被 b 整除时丢弃最前面的余数行。
    """
    n, d = x.shape
    n_batches = n // batch_size
    trimmed = x[n - n_batches * batch_size:]
    means = trimmed.reshape(n_batches, batch_size, d).mean(axis=1)
    centered = means - trimmed.mean(axis=0)
    return batch_size / (n_batches - 1) * (centered.T @ centered)


def multivariate_ess(samples: np.ndarray) -> EssReport:
    """
    计算多元有效样本量

    Args:
        samples: N×D 样本矩阵（一维数组视为 D = 1）

    Returns:
        EssReport

    Raises:
        DiagnosticsError: 样本不足、存在常数列或 Σ 奇异
    """
    x = _as_matrix(samples)
    n, d = x.shape
    if n < 4 or d < 1:
        raise DiagnosticsError(f"样本不足: N={n}, D={d}")
    batch_size = int(math.floor(math.sqrt(n)))
    n_batches = n // batch_size
    if n < 4 * batch_size or n_batches < 2:
        raise DiagnosticsError(f"样本不足以分批: N={n}, b={batch_size}")
    constant = _constant_columns(x)
    if constant:
        raise DiagnosticsError(f"样本存在常数列（维度 {constant}），无法计算 mESS")

    lam = np.atleast_2d(np.cov(x, rowvar=False))
    sigma = batch_means_covariance(x, batch_size)
    sign_l, logdet_l = np.linalg.slogdet(lam)
    sign_s, logdet_s = np.linalg.slogdet(sigma)
    if sign_s <= 0 or not np.isfinite(logdet_s):
        eigenvalues, eigenvectors = np.linalg.eigh(sigma)
        weak = eigenvectors[:, 0]
        dims = [int(i) for i in np.nonzero(np.abs(weak) > 0.1)[0]]
        raise DiagnosticsError(f"批均值协方差 Σ 奇异，退化维度 {dims}")
    if sign_l <= 0 or not np.isfinite(logdet_l):
        raise DiagnosticsError("样本协方差 Λ 奇异")

    m_ess = n * math.exp((logdet_l - logdet_s) / d)
    return EssReport(m_ess, n, d, batch_size, n_batches, float(logdet_s), float(logdet_l))


def batch_means_ess(x: np.ndarray) -> float:
    """一维批均值 ESS：N·s²/σ²_bm"""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < 4:
        raise DiagnosticsError(f"样本不足: N={n}")
    batch_size = int(math.floor(math.sqrt(n)))
    if n < 4 * batch_size:
        raise DiagnosticsError(f"样本不足以分批: N={n}, b={batch_size}")
    if np.ptp(x) == 0:
        raise DiagnosticsError("样本为常数，无法计算 ESS")
    variance = float(np.var(x, ddof=1))
    sigma2 = float(batch_means_covariance(x[:, None], batch_size)[0, 0])
    if not sigma2 > 0:
        raise DiagnosticsError("批均值方差为零")
    return n * variance / sigma2


def is_degenerate_rho(rho: float) -> bool:
    """ρ 是否落在 −1 附近的退化区域（此时反向 mESS 为 +inf 哨兵）"""
    return rho <= -1.0 + DEGENERATE_RHO_MARGIN


def antithetic_mess(m_ess_original: float, rho: float) -> float:
    """
    反向耦合有效样本量 2·mESS/(1 + ρ)

    Args:
        m_ess_original: 原链的 mESS
        rho: 最大跨链相关系数

    Returns:
        反向 mESS；ρ ≤ −1 + 10⁻¹² 时返回 +inf
    """
    if is_degenerate_rho(rho):
        logger.warning(f"跨链相关系数 ρ = {rho:.12g} 接近 −1，反向 mESS 记为 +inf")
        return math.inf
    return 2.0 * m_ess_original / (1.0 + rho)


def cross_correlations(chain_x: np.ndarray, chain_y: np.ndarray) -> np.ndarray:
    """
    每个维度的跨链 Pearson 相关系数

    常数列对应的维度返回 NaN 并记录警告。

    Args:
        chain_x: N×D 原链样本
        chain_y: N×D 反向链样本

    Returns:
        长度 D 的相关系数向量
    """
    x = _as_matrix(chain_x)
    y = _as_matrix(chain_y)
    if x.shape != y.shape:
        raise DiagnosticsError(f"两条链形状不一致: {x.shape} != {y.shape}")
    xc = x - x.mean(axis=0)
    yc = y - y.mean(axis=0)
    sx = np.sqrt(np.sum(xc * xc, axis=0))
    sy = np.sqrt(np.sum(yc * yc, axis=0))
    result = np.full(x.shape[1], np.nan)
    valid = (sx > 0) & (sy > 0)
    for i in np.nonzero(~valid)[0]:
        logger.warning(f"维度 {int(i)} 在至少一条链中为常数，跳过相关系数")
    result[valid] = np.sum(xc[:, valid] * yc[:, valid], axis=0) / (sx[valid] * sy[valid])
    return np.clip(result, -1.0, 1.0)


def max_cross_correlation(chain_x: np.ndarray, chain_y: np.ndarray) -> float:
    """
    各维度相关系数的最大值（带符号）

    Raises:
        DiagnosticsError: 所有维度都被跳过
    """
    correlations = cross_correlations(chain_x, chain_y)
    if np.all(np.isnan(correlations)):
        raise DiagnosticsError("所有维度均为常数，无法计算跨链相关系数")
    return float(np.nanmax(correlations))


def normalized_ess(m_ess: float, seconds: float) -> float:
    """
    按耗时归一化的有效样本量 mESS/t

    Raises:
        DiagnosticsError: 耗时非正
    """
    if not seconds > 0:
        raise DiagnosticsError(f"耗时必须为正: {seconds}")
    return m_ess / seconds


def round_mess(m_ess: Optional[float]) -> Optional[float]:
    """报告中的 mESS 取整；None 与 +inf 原样返回"""
    if m_ess is None or not math.isfinite(m_ess):
        return m_ess
    return float(round(m_ess))


def round_normalized(value: Optional[float]) -> Optional[float]:
    """报告中的 mESS/t 保留两位小数"""
    if value is None or not math.isfinite(value):
        return value
    return round(value, 2)
