"""
哈密顿量核心模块

此模块提供所有采样器共享的能量记账与随机化原语：
- 质量矩阵的规格（MassSpec）与实现（RealizedMass）
- 动能、哈密顿量、动量采样
- Metropolis 接受/拒绝

动能包含高斯归一化项 ½·log((2π)^D |M|)。固定质量时该项在 δH 中抵消，
随机质量（QIHMC）与位置相关度量（RMHMC）时不抵消，所以始终计算。
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Union

import numpy as np
from scipy import linalg

from .exceptions import FactorizationError

# 设置日志记录器
logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class PhasePoint:
    """
    相空间点

    Attributes:
        position: 位置 w（无约束参数）
        momentum: 动量 p，维度与位置相同
    """
    position: np.ndarray
    momentum: np.ndarray

    def __post_init__(self):
        if np.shape(self.position) != np.shape(self.momentum):
            raise ValueError(f"位置与动量维度不一致: {np.shape(self.position)} != {np.shape(self.momentum)}")

    @property
    def dimension(self) -> int:
        return int(np.size(self.position))

    def flipped(self) -> "PhasePoint":
        """返回动量取反后的相空间点"""
        return PhasePoint(self.position, -self.momentum)


class MassKind(enum.Enum):
    """质量矩阵类型"""
    IDENTITY = "identity"
    FIXED_DENSE = "fixed_dense"
    STOCHASTIC_DIAGONAL = "stochastic_diagonal"
    POSITION_DEPENDENT = "position_dependent"


@dataclass(frozen=True)
class MassSpec:
    """
    动能度量规格

    Attributes:
        kind: 质量矩阵类型
        matrix: FIXED_DENSE 时的 D×D 矩阵
        location: STOCHASTIC_DIAGONAL 时对数正态的位置参数
        scale: STOCHASTIC_DIAGONAL 时对数正态的尺度参数（0 即退化为单位阵）
        metric: POSITION_DEPENDENT 时的度量函数 w -> G(w)
    """
    kind: MassKind = MassKind.IDENTITY
    matrix: Optional[np.ndarray] = None
    location: float = 0.0
    scale: float = 1.0
    metric: Optional[Callable[[np.ndarray], Any]] = None

    @classmethod
    def identity(cls) -> "MassSpec":
        return cls(MassKind.IDENTITY)

    @classmethod
    def fixed_dense(cls, matrix: np.ndarray) -> "MassSpec":
        return cls(MassKind.FIXED_DENSE, matrix=np.asarray(matrix, dtype=float))

    @classmethod
    def stochastic_diagonal(cls, location: float = 0.0, scale: float = 1.0) -> "MassSpec":
        if scale < 0:
            raise ValueError(f"对数正态尺度必须非负: {scale}")
        return cls(MassKind.STOCHASTIC_DIAGONAL, location=location, scale=scale)

    @classmethod
    def position_dependent(cls, metric: Optional[Callable[[np.ndarray], Any]] = None) -> "MassSpec":
        return cls(MassKind.POSITION_DEPENDENT, metric=metric)

    def realize(self, dimension: int) -> "RealizedMass":
        """
        实现固定质量矩阵

        Args:
            dimension: 参数维度

        Returns:
            实现后的质量矩阵
        """
        if self.kind is MassKind.IDENTITY:
            return RealizedMass.from_diagonal(np.ones(dimension))
        if self.kind is MassKind.FIXED_DENSE:
            if self.matrix is None or self.matrix.shape != (dimension, dimension):
                raise FactorizationError("fixed_dense", f"需要 {dimension}×{dimension} 矩阵")
            return realize_mass(self.matrix, name="fixed_dense")
        raise ValueError(f"质量类型 {self.kind.value} 需逐次迭代实现")


class RealizedMass:
    """
    已实现（数值化）的质量矩阵

    持有 Cholesky 因子、对数行列式以及逆矩阵作用。对角矩阵走独立的快速路径，
    单位阵与随机对角阵因此共用同一套浮点运算。

    Attributes:
        dimension: 维度
        diagonal: 对角元（对角路径），否则为 None
        cholesky: 下三角 Cholesky 因子（稠密路径），否则为 None
        logdet: log|M|
    """

    def __init__(self, dimension: int, logdet: float,
                 diagonal: Optional[np.ndarray] = None,
                 cholesky: Optional[np.ndarray] = None,
                 inverse: Optional[np.ndarray] = None):
        self.dimension = dimension
        self.logdet = float(logdet)
        self.diagonal = diagonal
        self.cholesky = cholesky
        self._inverse = inverse

    @classmethod
    def from_diagonal(cls, diagonal: np.ndarray, name: str = "diagonal_mass") -> "RealizedMass":
        diagonal = np.asarray(diagonal, dtype=float)
        if not np.all(np.isfinite(diagonal)) or np.any(diagonal <= 0):
            raise FactorizationError(name, "对角元必须为有限正数")
        return cls(diagonal.size, float(np.sum(np.log(diagonal))), diagonal=diagonal)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, name: str = "mass_matrix",
                    logdet: Optional[float] = None,
                    inverse: Optional[np.ndarray] = None) -> "RealizedMass":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise FactorizationError(name, f"需要方阵，得到形状 {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise FactorizationError(name, "包含非有限元素")
        try:
            chol = linalg.cholesky(matrix, lower=True)
        except linalg.LinAlgError as e:
            raise FactorizationError(name, str(e)) from e
        if logdet is None:
            logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
        return cls(matrix.shape[0], logdet, cholesky=chol, inverse=inverse)

    def inverse_apply(self, p: np.ndarray) -> np.ndarray:
        """计算 M⁻¹p"""
        if self.diagonal is not None:
            return p / self.diagonal
        if self._inverse is not None:
            return self._inverse @ p
        return linalg.cho_solve((self.cholesky, True), p)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """
        从 N(0, M) 抽样

        按下标顺序恰好消耗 D 个标准正态随机数。
        """
        z = rng.standard_normal(self.dimension)
        if self.diagonal is not None:
            return np.sqrt(self.diagonal) * z
        return self.cholesky @ z

    def matrix(self) -> np.ndarray:
        """返回稠密矩阵形式"""
        if self.diagonal is not None:
            return np.diag(self.diagonal)
        return self.cholesky @ self.cholesky.T


MassLike = Union[RealizedMass, np.ndarray]


def realize_mass(mass: MassLike, name: str = "mass_matrix") -> RealizedMass:
    """
    将矩阵转换为 RealizedMass，Cholesky 作为正定性检验

    Args:
        mass: 已实现质量或 D×D 矩阵
        name: 错误信息中使用的矩阵名称

    Returns:
        已实现质量

    Raises:
        FactorizationError: 矩阵非对称正定
    """
    if isinstance(mass, RealizedMass):
        return mass
    matrix = np.atleast_2d(np.asarray(mass, dtype=float))
    if not np.allclose(matrix, matrix.T, rtol=1e-10, atol=1e-12):
        raise FactorizationError(name, "矩阵不对称")
    return RealizedMass.from_matrix(matrix, name=name)


def kinetic_energy(p: np.ndarray, mass: MassLike) -> float:
    """
    动能 K(p) = ½·log((2π)^D |M|) + ½·pᵀM⁻¹p

    Args:
        p: 动量
        mass: 质量矩阵

    Returns:
        动能
    """
    m = realize_mass(mass)
    p = np.asarray(p, dtype=float)
    return 0.5 * (m.dimension * LOG_2PI + m.logdet) + 0.5 * float(p @ m.inverse_apply(p))


def kinetic_gradient(p: np.ndarray, mass: MassLike) -> np.ndarray:
    """动能对动量的梯度 M⁻¹p"""
    return realize_mass(mass).inverse_apply(np.asarray(p, dtype=float))


def hamiltonian(model: Any, x: PhasePoint, mass: MassLike) -> float:
    """
    哈密顿量 H(w, p) = U(w) + K(p)

    Args:
        model: 目标模型（ITargetModel）
        x: 相空间点
        mass: 质量矩阵

    Returns:
        能量值，U 非有限时为 +inf
    """
    m = realize_mass(mass)
    if x.dimension != m.dimension:
        raise ValueError(f"维度不一致: 相空间 {x.dimension}, 质量矩阵 {m.dimension}")
    return float(model.neg_log_posterior(x.position)) + kinetic_energy(x.momentum, m)


def sample_momentum(mass: MassLike, rng: np.random.Generator) -> np.ndarray:
    """
    动量采样 p ~ N(0, M)，Cholesky 因子乘标准正态向量

    Args:
        mass: 质量矩阵
        rng: 随机流

    Returns:
        动量向量
    """
    return realize_mass(mass).sample(rng)


def acceptance_probability(delta_h: float) -> float:
    """
    接受概率 α = min(1, exp(δH))

    δH > 0 时直接取 1，不做指数运算；非有限 δH 视为必然拒绝。
    """
    if not np.isfinite(delta_h):
        return 0.0
    if delta_h > 0:
        return 1.0
    return math.exp(delta_h)


def metropolis(alpha: float, u: float, proposed: np.ndarray, current: np.ndarray) -> np.ndarray:
    """
    Metropolis 判决：α < u 时拒绝（保留当前位置），否则接受提议

    Args:
        alpha: 接受概率
        u: Uniform(0,1) 随机数
        proposed: 提议位置
        current: 当前位置

    Returns:
        下一状态位置
    """
    if alpha < u:
        return current
    return proposed
