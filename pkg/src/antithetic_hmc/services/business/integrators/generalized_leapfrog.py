"""
广义蛙跳积分器

位置相关度量 G(w) 下的哈密顿量
    H(w, p) = U(w) + ½·log((2π)^D |G(w)|) + ½·pᵀG(w)⁻¹p
不可分离，每步包含两个隐式子步（动量半步、位置整步），
用 Picard 不动点迭代求解，收敛判据为 max_i |xᵢ − x*ᵢ| ≤ tolerance。
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple

import numpy as np

from ...core.exceptions import FactorizationError
from ...core.hamiltonian import LOG_2PI, PhasePoint, RealizedMass
from ..models.softabs import SoftAbsMetric, softabs_metric
from .leapfrog import IntegrationResult, LeapfrogConfig

# 设置日志记录器
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointConfig:
    """
    不动点迭代配置

    Attributes:
        tolerance: 收敛容差
        max_iterations: 最大迭代次数，达到后停止但不视为错误
    """
    tolerance: float = 1e-6
    max_iterations: int = 10

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"不动点容差必须为正: {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"不动点迭代次数至少为 1: {self.max_iterations}")


class RiemannianHamiltonian:
    """
    黎曼哈密顿量

    度量默认取模型 Hessian 的 SoftAbs 变换，只缓存当前一个位置的度量。
    有限差分求导时的邻近位置求值不写入缓存。

    Attributes:
        model: 目标模型
        softabs_alpha: SoftAbs 系数
    """

    def __init__(self, model: Any, softabs_alpha: float = 1e6,
                 metric_fn: Optional[Callable[[np.ndarray], Any]] = None,
                 fd_relative: float = 1e-5):
        """
        初始化

        Args:
            model: 提供 grad/neg_log_posterior（默认度量还需要 hessian）的目标模型
            softabs_alpha: SoftAbs 系数
            metric_fn: 自定义度量 w -> G(w)（矩阵或 SoftAbsMetric），None 时使用 SoftAbs Hessian
            fd_relative: 度量导数的相对差分步长
        """
        self.model = model
        self.softabs_alpha = softabs_alpha
        self.metric_fn = metric_fn
        self.fd_relative = fd_relative
        self._cache_w: Optional[np.ndarray] = None
        self._cache_metric: Optional[SoftAbsMetric] = None

    @property
    def dimension(self) -> int:
        return self.model.dimension

    def _evaluate_metric(self, w: np.ndarray) -> SoftAbsMetric:
        if self.metric_fn is None:
            return softabs_metric(self.model.hessian(w), self.softabs_alpha, name=f"{self.model.name}_hessian")
        value = self.metric_fn(w)
        if isinstance(value, SoftAbsMetric):
            return value
        # 自定义度量矩阵直接作为 G，特征值即为其自身谱
        G = np.atleast_2d(np.asarray(value, dtype=float))
        if not np.all(np.isfinite(G)):
            raise FactorizationError("metric", "包含非有限元素")
        eigenvalues, eigenvectors = np.linalg.eigh(G)
        if np.any(eigenvalues <= 0):
            raise FactorizationError("metric", "度量非正定")
        G_inverse = (eigenvectors / eigenvalues) @ eigenvectors.T
        return SoftAbsMetric(G, float(np.sum(np.log(eigenvalues))), 0.5 * (G_inverse + G_inverse.T),
                             eigenvalues, eigenvectors)

    def metric(self, w: np.ndarray) -> SoftAbsMetric:
        """
        获取位置 w 处的度量（命中缓存时不重新计算）

        Raises:
            FactorizationError: 度量无法分解
        """
        if self._cache_w is not None and np.array_equal(self._cache_w, w):
            return self._cache_metric
        metric = self._evaluate_metric(w)
        self._cache_w = np.array(w, dtype=float, copy=True)
        self._cache_metric = metric
        return metric

    def mass_at(self, w: np.ndarray) -> RealizedMass:
        """把 w 处的度量包装为质量矩阵（用于动量抽样）"""
        metric = self.metric(w)
        return RealizedMass.from_matrix(metric.G, name="riemannian_metric",
                                        logdet=metric.logdet, inverse=metric.G_inverse)

    def energy(self, x: PhasePoint) -> float:
        """
        完整黎曼哈密顿量（含 ½log|G| 项）

        Returns:
            能量值，度量失败或势能非有限时为 +inf
        """
        try:
            metric = self.metric(x.position)
        except FactorizationError as e:
            logger.debug(f"度量分解失败，能量记为 +inf: {e}")
            return math.inf
        u = float(self.model.neg_log_posterior(x.position))
        p = x.momentum
        value = u + 0.5 * (x.dimension * LOG_2PI + metric.logdet) + 0.5 * float(p @ (metric.G_inverse @ p))
        return value if math.isfinite(value) else math.inf

    def metric_derivatives(self, w: np.ndarray) -> np.ndarray:
        """
        度量对各坐标的偏导 ∂G/∂wᵢ（中心差分，步长 10⁻⁵·max(1,|wᵢ|)）

        Returns:
            形状 (D, D, D) 的数组，第一维为坐标下标
        """
        w = np.asarray(w, dtype=float)
        d = w.size
        steps = self.fd_relative * np.maximum(1.0, np.abs(w))
        derivatives = np.empty((d, d, d))
        for i in range(d):
            e = np.zeros(d)
            e[i] = steps[i]
            derivatives[i] = (self._evaluate_metric(w + e).G - self._evaluate_metric(w - e).G) / (2.0 * steps[i])
        return derivatives

    def dH_dp(self, w: np.ndarray, p: np.ndarray) -> np.ndarray:
        return self.metric(w).G_inverse @ p

    def dH_dw(self, w: np.ndarray, p: np.ndarray, derivatives: Optional[np.ndarray] = None) -> np.ndarray:
        """
        ∂H/∂w = ∇U + ½·tr(G⁻¹∂ᵢG) − ½·pᵀG⁻¹(∂ᵢG)G⁻¹p

        Args:
            w: 位置
            p: 动量
            derivatives: 预先计算的度量导数（同一位置多次求值时复用）
        """
        metric = self.metric(w)
        if derivatives is None:
            derivatives = self.metric_derivatives(w)
        v = metric.G_inverse @ p
        trace_term = np.einsum('jk,ikj->i', metric.G_inverse, derivatives)
        quadratic_term = np.einsum('j,ijk,k->i', v, derivatives, v)
        return np.asarray(self.model.grad(w), dtype=float) + 0.5 * trace_term - 0.5 * quadratic_term


def riemannian_hamiltonian_grads(rh: RiemannianHamiltonian, x: PhasePoint) -> Tuple[np.ndarray, np.ndarray]:
    """
    计算 (∂H/∂w, ∂H/∂p)

    Args:
        rh: 黎曼哈密顿量
        x: 相空间点

    Returns:
        (dH_dw, dH_dp)
    """
    return rh.dH_dw(x.position, x.momentum), rh.dH_dp(x.position, x.momentum)


def _max_change(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def integrate_generalized_leapfrog(rh: RiemannianHamiltonian, x: PhasePoint, cfg: LeapfrogConfig,
                                   fp: Optional[FixedPointConfig] = None) -> IntegrationResult:
    """
    广义蛙跳积分并返回轨迹统计

    每步：隐式动量半步 -> 隐式位置整步 -> 显式动量半步。
    不动点未收敛只计数，不中断积分；度量失败或出现非有限值时标记发散。

    Args:
        rh: 黎曼哈密顿量
        x: 起点
        cfg: 步长与步数
        fp: 不动点配置

    Returns:
        积分结果（终点动量已取反）
    """
    fp = fp or FixedPointConfig()
    eps = cfg.step_size
    half = 0.5 * eps
    w = np.array(x.position, dtype=float)
    p = np.array(x.momentum, dtype=float)
    failures = 0

    try:
        for _ in range(cfg.n_steps):
            # 动量隐式半步，度量导数只与 w 有关
            derivatives = rh.metric_derivatives(w)
            p0 = p
            converged = False
            for _ in range(fp.max_iterations):
                p_next = p0 - half * rh.dH_dw(w, p, derivatives)
                change = _max_change(p_next, p)
                p = p_next
                if change <= fp.tolerance:
                    converged = True
                    break
            failures += 0 if converged else 1

            # 位置隐式整步
            w0 = w
            v0 = rh.dH_dp(w0, p)
            w = w0 + eps * v0
            converged = False
            for _ in range(fp.max_iterations):
                w_next = w0 + half * (v0 + rh.dH_dp(w, p))
                change = _max_change(w_next, w)
                w = w_next
                if change <= fp.tolerance:
                    converged = True
                    break
            failures += 0 if converged else 1

            # 动量显式半步
            p = p - half * rh.dH_dw(w, p)
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(p))):
                logger.debug("广义蛙跳轨迹发散：出现非有限值")
                return IntegrationResult(PhasePoint(w, -p), divergent=True, fixed_point_failures=failures)
    except FactorizationError as e:
        logger.debug(f"广义蛙跳轨迹发散: {e}")
        return IntegrationResult(PhasePoint(w, -p), divergent=True, fixed_point_failures=failures)
    except FloatingPointError as e:
        logger.debug(f"广义蛙跳轨迹数值错误: {e}")
        return IntegrationResult(PhasePoint(w, -p), divergent=True, fixed_point_failures=failures)

    return IntegrationResult(PhasePoint(w, -p), fixed_point_failures=failures)


def generalized_leapfrog(rh: RiemannianHamiltonian, x: PhasePoint, cfg: LeapfrogConfig,
                         fp: Optional[FixedPointConfig] = None) -> PhasePoint:
    """广义蛙跳积分，返回 (w', −p')"""
    return integrate_generalized_leapfrog(rh, x, cfg, fp).point
