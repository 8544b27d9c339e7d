"""
数据结构模块

此模块定义了数据集在加载、预处理与建模之间传递的统一结构。
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


@dataclass
class PriceSeries:
    """
    价格序列

    Attributes:
        prices: 严格为正的价格
        dates: 可选的 ISO-8601 日期字符串
        name: 数据集名称
    """
    prices: np.ndarray
    dates: Optional[List[str]] = None
    name: str = "prices"

    def __len__(self) -> int:
        return int(self.prices.size)


@dataclass
class ReturnSeries:
    """
    对数收益率序列

    Attributes:
        r: 对数收益率
        tau: 观测间隔（默认 1.0，一个交易日）
        name: 数据集名称
    """
    r: np.ndarray
    tau: float = 1.0
    name: str = "returns"

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float).ravel()
        if self.tau <= 0:
            raise ValueError(f"观测间隔必须为正: {self.tau}")

    def __len__(self) -> int:
        return int(self.r.size)


@dataclass
class ClassificationData:
    """
    分类数据

    标准化后 X 的第一列为全 1 偏置列，其余各列均值 0、标准差 1。

    Attributes:
        X: N×D 设计矩阵
        y: N 个 {0,1} 标签
        feature_names: 特征名称（不含偏置列）
        means: 标准化时使用的列均值
        scales: 标准化时使用的列标准差
        has_bias: 是否已前置偏置列
        name: 数据集名称
    """
    X: np.ndarray
    y: np.ndarray
    feature_names: List[str] = field(default_factory=list)
    means: Optional[np.ndarray] = None
    scales: Optional[np.ndarray] = None
    has_bias: bool = False
    name: str = "classification"

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.X.shape[0] != self.y.size:
            raise ValueError(f"样本数不一致: X 有 {self.X.shape[0]} 行, y 有 {self.y.size} 个")

    @property
    def n_observations(self) -> int:
        return int(self.X.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    def destandardize(self, X: Optional[np.ndarray] = None) -> np.ndarray:
        """
        还原原始特征（去掉偏置列）

        Args:
            X: 标准化后的设计矩阵，默认使用自身

        Returns:
            原始尺度的特征矩阵
        """
        if self.means is None or self.scales is None:
            raise ValueError("数据尚未标准化")
        X = self.X if X is None else np.atleast_2d(X)
        features = X[:, 1:] if self.has_bias else X
        return features * self.scales + self.means
