"""
可复现随机流工具

一个主种子派生出若干命名子流（动量、质量矩阵、均匀数、初始化），
反向耦合链的“共享随机数”因而可以表述为“两条链读取同一个命名流”。
"""

import logging
from typing import Dict, Iterable, Optional

import numpy as np

# 设置日志记录器
logger = logging.getLogger(__name__)

# 子流名称与固定的派生键，顺序不可更改
STREAM_KEYS: Dict[str, int] = {
    "momentum": 0,
    "mass": 1,
    "uniform": 2,
    "init": 3,
}


class RandomStreams:
    """
    命名随机流集合

    Attributes:
        seed: 主种子
    """

    def __init__(self, seed: Optional[int] = None, seed_sequence: Optional[np.random.SeedSequence] = None):
        """
        初始化随机流

        Args:
            seed: 主种子，None 时使用操作系统熵
            seed_sequence: 直接给定的种子序列（优先于 seed）
        """
        self._root = seed_sequence if seed_sequence is not None else np.random.SeedSequence(seed)
        self.seed = self._root.entropy
        self._streams: Dict[str, np.random.Generator] = {}

    def stream(self, name: str) -> np.random.Generator:
        """
        获取命名子流（首次访问时创建）

        Args:
            name: 子流名称，必须是 STREAM_KEYS 之一

        Returns:
            numpy 随机数生成器
        """
        if name not in STREAM_KEYS:
            raise KeyError(f"未知随机流: {name}")
        if name not in self._streams:
            child = np.random.SeedSequence(
                entropy=self._root.entropy,
                spawn_key=tuple(self._root.spawn_key) + (STREAM_KEYS[name],),
            )
            self._streams[name] = np.random.Generator(np.random.PCG64(child))
        return self._streams[name]

    @property
    def momentum(self) -> np.random.Generator:
        return self.stream("momentum")

    @property
    def mass(self) -> np.random.Generator:
        return self.stream("mass")

    @property
    def uniform(self) -> np.random.Generator:
        return self.stream("uniform")

    @property
    def init(self) -> np.random.Generator:
        return self.stream("init")


def child_seed_sequence(master_seed: int, algorithm_index: int, repeat: int) -> np.random.SeedSequence:
    """
    为 (算法, 重复) 单元派生种子序列

    派生键 (algorithm_index, repeat) 互不相同，因此任意两个单元不共享随机流。

    Args:
        master_seed: 主种子
        algorithm_index: 算法在固定算法表中的下标
        repeat: 重复编号

    Returns:
        子种子序列
    """
    if algorithm_index < 0 or repeat < 0:
        raise ValueError("算法下标与重复编号必须非负")
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(1000 + algorithm_index, repeat))


def streams_for_cell(master_seed: int, algorithm_index: int, repeat: int) -> RandomStreams:
    """获取单元对应的随机流"""
    return RandomStreams(seed_sequence=child_seed_sequence(master_seed, algorithm_index, repeat))


def initial_positions(rng: np.random.Generator, dimension: int, count: int = 1, scale: float = 0.1) -> Iterable[np.ndarray]:
    """
    从 N(0, scale²) 抽取初始位置

    Args:
        rng: 初始化随机流
        dimension: 维度
        count: 位置个数
        scale: 标准差

    Returns:
        初始位置列表
    """
    return [scale * rng.standard_normal(dimension) for _ in range(count)]
