"""
Merton 跳跃扩散目标模块

对数收益率的转移密度是按泊松权重混合的无穷高斯混合：
    p(r) = Σₙ e^{−λτ}(λτ)ⁿ/n! · N(r; cτ + n·μ_J, σ²τ + n·σ_J²)
其中漂移 c 在 "ito" 约定下为 μ − σ²/2，在 "raw" 约定下为 μ。

参数在无约束空间中采样: θ = (μ, log σ, log λ, μ_J, log σ_J)，
N(0, s²) 先验直接作用在 θ 上，不额外加入变量替换的雅可比项。
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import poisson

from ...core.interfaces import ITargetModel
from ..data.types import ReturnSeries
from .finite_differences import finite_difference_hessian

# 设置日志记录器
logger = logging.getLogger(__name__)

DRIFT_CONVENTIONS = ("ito", "raw")
TAIL_BOUND = 1e-12
N_MAX_RANGE = (10, 100)
PARAMETER_NAMES = ("mu", "log_sigma", "log_lambda", "mu_jump", "log_sigma_jump")


@dataclass(frozen=True)
class JumpDiffusionParams:
    """
    跳跃扩散参数（无约束表示）

    Attributes:
        mu: 漂移（每单位时间）
        log_sigma: 扩散系数的对数
        log_lambda: 跳跃强度的对数（每单位时间）
        mu_jump: 平均跳跃幅度
        log_sigma_jump: 跳跃幅度标准差的对数
    """
    mu: float
    log_sigma: float
    log_lambda: float
    mu_jump: float
    log_sigma_jump: float

    @classmethod
    def from_vector(cls, theta: np.ndarray) -> "JumpDiffusionParams":
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != 5:
            raise ValueError(f"跳跃扩散参数必须是 5 维向量，得到 {theta.size} 维")
        return cls(*(float(v) for v in theta))

    @classmethod
    def from_constrained(cls, mu: float, sigma: float, lam: float, mu_jump: float, sigma_jump: float) -> "JumpDiffusionParams":
        """
        从原始（受约束）参数构造

        Raises:
            ValueError: σ、λ、σ_J 非正
        """
        for key, value in (("sigma", sigma), ("lambda", lam), ("sigma_jump", sigma_jump)):
            if not value > 0:
                raise ValueError(f"参数 {key} 必须为正: {value}")
        return cls(mu, math.log(sigma), math.log(lam), mu_jump, math.log(sigma_jump))

    def to_vector(self) -> np.ndarray:
        return np.array([self.mu, self.log_sigma, self.log_lambda, self.mu_jump, self.log_sigma_jump])

    def constrained(self) -> Dict[str, float]:
        """返回原始尺度的参数字典"""
        return {
            "mu": self.mu,
            "sigma": math.exp(self.log_sigma),
            "lambda": math.exp(self.log_lambda),
            "mu_jump": self.mu_jump,
            "sigma_jump": math.exp(self.log_sigma_jump),
        }


@lru_cache(maxsize=512)
def poisson_truncation(lam_tau: float, tail: float = TAIL_BOUND) -> Tuple[int, float]:
    """
    泊松截断阶数：上尾概率 P(N > n) < tail 的最小 n，限制在 [10, 100]

    Args:
        lam_tau: 泊松均值 λτ
        tail: 尾部阈值

    Returns:
        (n_max, 保留的混合权重总和)
    """
    lower, upper = N_MAX_RANGE
    if not lam_tau > 0:
        return lower, 1.0
    ns = np.arange(upper + 1)
    sf = poisson.sf(ns, lam_tau)
    hits = np.nonzero(sf < tail)[0]
    n_max = int(hits[0]) if hits.size else upper
    n_max = min(max(n_max, lower), upper)
    return n_max, float(1.0 - sf[n_max])


def _resolve_n_max(lam_tau: float, n_max: Optional[int]) -> Tuple[int, bool]:
    """返回 (截断阶数, 是否未满足尾部界)"""
    if n_max is not None:
        if n_max < 0:
            raise ValueError(f"n_max 必须非负: {n_max}")
        return int(n_max), False
    n, retained = poisson_truncation(float(lam_tau))
    return n, retained < 1.0 - TAIL_BOUND


def _component_log_terms(r: np.ndarray, theta: np.ndarray, tau: float, n_max: int, drift_convention: str):
    """
    计算每个观测、每个混合分量的对数项及其中间量

    Returns:
        (l, n, mean, var, sigma2, lam_tau, sj2)，l 的形状为 (T, n_max+1)
    """
    mu, log_sigma, log_lambda, mu_jump, log_sigma_jump = theta
    sigma2 = math.exp(2.0 * log_sigma)
    sj2 = math.exp(2.0 * log_sigma_jump)
    lam_tau = math.exp(log_lambda) * tau
    drift = mu - 0.5 * sigma2 if drift_convention == "ito" else mu
    n = np.arange(n_max + 1, dtype=float)
    log_weights = -lam_tau + n * (log_lambda + math.log(tau)) - gammaln(n + 1.0)
    mean = drift * tau + n * mu_jump
    var = sigma2 * tau + n * sj2
    resid = r[:, None] - mean[None, :]
    log_phi = -0.5 * (np.log(2.0 * math.pi * var)[None, :] + resid * resid / var[None, :])
    return log_weights[None, :] + log_phi, n, mean, var, sigma2, lam_tau, sj2


def jd_transition_log_density(r: float, params: JumpDiffusionParams, tau: float = 1.0,
                              n_max: Optional[int] = None, drift_convention: str = "ito") -> float:
    """
    单个对数收益率的转移对数密度（log-sum-exp 求和）

    Args:
        r: 对数收益率
        params: 跳跃扩散参数
        tau: 观测间隔
        n_max: 截断阶数，None 时按泊松尾部规则选取
        drift_convention: "ito" 或 "raw"

    Returns:
        对数密度
    """
    if tau <= 0:
        raise ValueError(f"观测间隔必须为正: {tau}")
    if drift_convention not in DRIFT_CONVENTIONS:
        raise ValueError(f"未知漂移约定: {drift_convention}")
    theta = params.to_vector()
    n, shortfall = _resolve_n_max(math.exp(theta[2]) * tau, n_max)
    if shortfall:
        logger.warning(f"泊松截断未达到尾部界: λτ={math.exp(theta[2]) * tau:.4g}, n_max={n}")
    l = _component_log_terms(np.atleast_1d(float(r)), theta, tau, n, drift_convention)[0]
    return float(logsumexp(l, axis=1)[0])


def _prior_precision(prior_scale: Optional[float]) -> float:
    if prior_scale is None or math.isinf(prior_scale):
        return 0.0
    if prior_scale <= 0:
        raise ValueError(f"先验标准差必须为正: {prior_scale}")
    return 1.0 / (prior_scale * prior_scale)


def jd_neg_log_posterior(theta: np.ndarray, series: ReturnSeries, prior_scale: Optional[float] = 1.0,
                         n_max: Optional[int] = None, drift_convention: str = "ito") -> float:
    """
    负对数后验 −Σₜ log p(rₜ) + ½‖θ‖²/s²

    任何中间量非有限时返回 +inf，迫使 Metropolis 拒绝。

    Args:
        theta: 无约束 5 维参数
        series: 收益率序列
        prior_scale: 先验标准差
        n_max: 截断阶数
        drift_convention: 漂移约定

    Returns:
        势能值
    """
    theta = np.asarray(theta, dtype=float)
    prior = 0.5 * _prior_precision(prior_scale) * float(theta @ theta)
    if len(series) == 0:
        return prior
    with np.errstate(all="ignore"):
        try:
            n, _ = _resolve_n_max(math.exp(theta[2]) * series.tau, n_max)
            l = _component_log_terms(series.r, theta, series.tau, n, drift_convention)[0]
            value = -float(np.sum(logsumexp(l, axis=1))) + prior
        except (OverflowError, ValueError):
            return math.inf
    return value if math.isfinite(value) else math.inf


def jd_grad(theta: np.ndarray, series: ReturnSeries, prior_scale: Optional[float] = 1.0,
            n_max: Optional[int] = None, drift_convention: str = "ito") -> np.ndarray:
    """
    解析梯度：每个分量的责任权重乘以该分量的高斯得分，含对数坐标的链式因子

    Args:
        theta: 无约束 5 维参数
        series: 收益率序列
        prior_scale: 先验标准差
        n_max: 截断阶数
        drift_convention: 漂移约定

    Returns:
        5 维梯度，数值失败时为 NaN 向量
    """
    theta = np.asarray(theta, dtype=float)
    prior_grad = _prior_precision(prior_scale) * theta
    if len(series) == 0:
        return prior_grad
    tau = series.tau
    with np.errstate(all="ignore"):
        try:
            n_terms, _ = _resolve_n_max(math.exp(theta[2]) * tau, n_max)
            l, n, mean, var, sigma2, lam_tau, sj2 = _component_log_terms(series.r, theta, tau, n_terms, drift_convention)
        except (OverflowError, ValueError):
            return np.full(5, np.nan)
        resp = np.exp(l - logsumexp(l, axis=1, keepdims=True))
        resid = series.r[:, None] - mean[None, :]
        # ∂l/∂mean 与 ∂l/∂var
        d_mean = resid / var[None, :]
        d_var = 0.5 * (resid * resid / (var * var)[None, :] - 1.0 / var[None, :])
        dmean_dlogsigma = -sigma2 * tau if drift_convention == "ito" else 0.0
        g_mu = d_mean * tau
        g_log_sigma = d_mean * dmean_dlogsigma + d_var * (2.0 * sigma2 * tau)
        g_log_lambda = np.broadcast_to(n - lam_tau, l.shape)
        g_mu_jump = d_mean * n[None, :]
        g_log_sigma_jump = d_var * (2.0 * n * sj2)[None, :]
        score = np.array([
            np.sum(resp * g_mu),
            np.sum(resp * g_log_sigma),
            np.sum(resp * g_log_lambda),
            np.sum(resp * g_mu_jump),
            np.sum(resp * g_log_sigma_jump),
        ])
        grad = -score + prior_grad
    if not np.all(np.isfinite(grad)):
        return np.full(5, np.nan)
    return grad


def jd_hessian(theta: np.ndarray, series: ReturnSeries, prior_scale: Optional[float] = 1.0,
               n_max: Optional[int] = None, drift_convention: str = "ito") -> np.ndarray:
    """
    Hessian：对解析梯度做中心差分（步长 max(1e-5, 1e-5·|θᵢ|)）后对称化

    Returns:
        5×5 对称矩阵
    """
    return finite_difference_hessian(
        lambda t: jd_grad(t, series, prior_scale, n_max, drift_convention),
        np.asarray(theta, dtype=float),
    )


class MertonJumpDiffusion(ITargetModel):
    """
    Merton 跳跃扩散后验（D = 5）

    Attributes:
        series: 收益率序列（按引用持有）
        prior_scale: 先验标准差
        n_max: 固定截断阶数，None 表示按 λ 自动选取
        drift_convention: 漂移约定
        truncation_warnings: 自动截断未达到尾部界的次数
    """

    name = "jump_diffusion"

    def __init__(self, series: ReturnSeries, prior_scale: Optional[float] = 1.0,
                 n_max: Optional[int] = None, drift_convention: str = "ito"):
        """
        初始化模型

        Args:
            series: 对数收益率序列
            prior_scale: 先验标准差
            n_max: 截断阶数
            drift_convention: "ito"（μ − σ²/2）或 "raw"（μ）
        """
        if drift_convention not in DRIFT_CONVENTIONS:
            raise ValueError(f"未知漂移约定: {drift_convention}，可选 {DRIFT_CONVENTIONS}")
        self.series = series
        self.prior_scale = prior_scale
        self.n_max = n_max
        self.drift_convention = drift_convention
        self.truncation_warnings = 0
        logger.debug(f"创建跳跃扩散模型: N={len(series)}, τ={series.tau}, 漂移约定={drift_convention}")

    @property
    def dimension(self) -> int:
        return 5

    def _check_truncation(self, theta: np.ndarray) -> None:
        if self.n_max is not None or len(self.series) == 0:
            return
        lam_tau = math.exp(min(float(theta[2]), 700.0)) * self.series.tau
        _, shortfall = _resolve_n_max(lam_tau, None)
        if shortfall:
            if self.truncation_warnings == 0:
                logger.warning(f"泊松截断未达到 {TAIL_BOUND:g} 尾部界 (λτ={lam_tau:.4g})，已限制为 {N_MAX_RANGE[1]} 项")
            self.truncation_warnings += 1

    def neg_log_posterior(self, w: np.ndarray) -> float:
        self._check_truncation(w)
        return jd_neg_log_posterior(w, self.series, self.prior_scale, self.n_max, self.drift_convention)

    def grad(self, w: np.ndarray) -> np.ndarray:
        return jd_grad(w, self.series, self.prior_scale, self.n_max, self.drift_convention)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return jd_hessian(w, self.series, self.prior_scale, self.n_max, self.drift_convention)
