"""
合成数据生成模块

- 跳跃扩散：每个间隔的对数收益率为高斯增量加上 Poisson(λτ) 个 N(μ_J, σ_J²) 跳跃之和
- 逻辑回归：标准正态特征，标签 y ~ Bern(σ(w₀ + xᵀw))
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import expit

from ...core.exceptions import ConfigError
from .types import ClassificationData, PriceSeries, ReturnSeries

# 设置日志记录器
logger = logging.getLogger(__name__)

SYNTHETIC_KINDS = ("jump_diffusion", "blr")

DEFAULT_JUMP_DIFFUSION_PARAMS: Dict[str, float] = {
    "mu": 0.0005,
    "sigma": 0.01,
    "lambda": 0.05,
    "mu_jump": -0.01,
    "sigma_jump": 0.03,
}

DEFAULT_BLR_PARAMS: Dict[str, Any] = {
    "n_features": 14,
    "weights": None,
}


@dataclass(frozen=True)
class SyntheticSpec:
    """
    合成数据规格

    Attributes:
        model: "jump_diffusion" 或 "blr"
        n: 观测数（跳跃扩散为收益率个数）
        params: 真实参数；跳跃扩散用 mu/sigma/lambda/mu_jump/sigma_jump，
            逻辑回归用 n_features 与 weights（含首位偏置）
        seed: 随机种子
        tau: 观测间隔
        drift_convention: 跳跃扩散漂移约定
        initial_price: 写出价格文件时的初始价格
    """
    model: str
    n: int = 1000
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = 0
    tau: float = 1.0
    drift_convention: str = "ito"
    initial_price: float = 100.0

    def resolved_params(self) -> Dict[str, Any]:
        defaults = DEFAULT_JUMP_DIFFUSION_PARAMS if self.model == "jump_diffusion" else DEFAULT_BLR_PARAMS
        merged = dict(defaults)
        merged.update(self.params or {})
        return merged


def simulate_jump_diffusion_returns(rng: np.random.Generator, n: int, mu: float, sigma: float, lam: float,
                                    mu_jump: float, sigma_jump: float, tau: float = 1.0,
                                    drift_convention: str = "ito") -> np.ndarray:
    """
    按间隔 τ 精确模拟跳跃扩散的对数收益率

    Raises:
        ConfigError: 参数无效
    """
    if not sigma > 0:
        raise ConfigError(f"扩散系数 sigma 必须为正: {sigma}")
    if lam < 0:
        raise ConfigError(f"跳跃强度 lambda 不能为负: {lam}")
    if sigma_jump < 0:
        raise ConfigError(f"跳跃标准差 sigma_jump 不能为负: {sigma_jump}")
    if not tau > 0:
        raise ConfigError(f"观测间隔必须为正: {tau}")
    if n < 1:
        raise ConfigError(f"观测数至少为 1: {n}")
    drift = mu - 0.5 * sigma * sigma if drift_convention == "ito" else mu
    diffusion = drift * tau + sigma * math.sqrt(tau) * rng.standard_normal(n)
    counts = rng.poisson(lam * tau, n)
    jumps = counts * mu_jump + np.sqrt(counts) * sigma_jump * rng.standard_normal(n)
    return diffusion + jumps


def simulate_logistic_data(rng: np.random.Generator, n: int, weights: Sequence[float]):
    """
    按逻辑回归生成模型模拟数据

    Args:
        rng: 随机流
        n: 观测数
        weights: 真实权重，首位为偏置

    Returns:
        (X, y)，X 不含偏置列
    """
    weights = np.asarray(weights, dtype=float)
    if weights.size < 2:
        raise ConfigError("逻辑回归真实权重至少包含偏置和一个特征")
    X = rng.standard_normal((n, weights.size - 1))
    y = (rng.random(n) < expit(weights[0] + X @ weights[1:])).astype(float)
    return X, y


def generate_synthetic(spec: SyntheticSpec) -> Union[ReturnSeries, ClassificationData]:
    """
    生成合成数据集

    Args:
        spec: 合成数据规格

    Returns:
        跳跃扩散返回 ReturnSeries，逻辑回归返回未标准化的 ClassificationData
    """
    if spec.model not in SYNTHETIC_KINDS:
        raise ConfigError(f"未知合成模型: {spec.model}，可选 {SYNTHETIC_KINDS}")
    rng = np.random.default_rng(spec.seed)
    params = spec.resolved_params()
    if spec.model == "jump_diffusion":
        r = simulate_jump_diffusion_returns(
            rng, spec.n, float(params["mu"]), float(params["sigma"]), float(params["lambda"]),
            float(params["mu_jump"]), float(params["sigma_jump"]), spec.tau, spec.drift_convention,
        )
        logger.info(f"生成合成跳跃扩散收益率: N={spec.n}")
        return ReturnSeries(r, tau=spec.tau, name="synthetic_jump_diffusion")

    weights = params.get("weights")
    if weights is None:
        n_features = int(params.get("n_features", 14))
        weights = rng.normal(0.0, 1.0, n_features + 1)
    X, y = simulate_logistic_data(rng, spec.n, weights)
    logger.info(f"生成合成逻辑回归数据: N={spec.n}, 特征数={X.shape[1]}")
    return ClassificationData(X, y, feature_names=[f"x{i}" for i in range(X.shape[1])], name="synthetic_blr")


def returns_to_prices(series: ReturnSeries, initial_price: float = 100.0) -> PriceSeries:
    """收益率累积为价格序列 S₀·exp(cumsum(r))"""
    prices = initial_price * np.exp(np.concatenate([[0.0], np.cumsum(series.r)]))
    return PriceSeries(prices, name=series.name)


def write_synthetic(dataset: Union[ReturnSeries, ClassificationData], path: Union[str, Path],
                    initial_price: float = 100.0) -> Path:
    """
    把合成数据写为 CSV（价格文件或分类文件），可被加载器直接读取

    Returns:
        写出的文件路径
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(dataset, ReturnSeries):
        prices = returns_to_prices(dataset, initial_price)
        frame = pd.DataFrame({"price": prices.prices})
    else:
        frame = pd.DataFrame(dataset.X, columns=dataset.feature_names)
        frame["label"] = dataset.y.astype(int)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"合成数据已写入: {path}")
    return path
