"""
采样器注册表模块

此模块提供了采样内核的注册和查找功能。反向耦合算法名 "a-<name>"
解析为同一个内核加上耦合驱动。
"""

import logging
from typing import Any, Dict, List, Optional, Tuple, Type

from ...core.hamiltonian import MassKind, MassSpec
from ...core.interfaces import ITargetModel
from .base_sampler import BaseSampler
from .config import SamplerConfig
from .hmc import HMCSampler
from .qihmc import QIHMCSampler
from .rmhmc import RMHMCSampler

# 设置日志记录器
logger = logging.getLogger(__name__)

ANTITHETIC_PREFIX = "a-"


class SamplerRegistry:
    """
    采样器注册表

    管理所有采样内核类，提供注册、获取、列举以及按名称构造的功能。
    """

    def __init__(self):
        """初始化采样器注册表"""
        self.samplers: Dict[str, Type[BaseSampler]] = {}
        self.sampler_metadata: Dict[str, Dict[str, Any]] = {}

    def register(self, name: str, sampler_cls: Type[BaseSampler], metadata: Optional[Dict[str, Any]] = None) -> bool:
        """
        注册采样器

        Args:
            name: 采样器名称
            sampler_cls: 采样内核类
            metadata: 元数据

        Returns:
            注册是否成功
        """
        if name.startswith(ANTITHETIC_PREFIX):
            logger.error(f"注册采样器失败: 名称不能以 '{ANTITHETIC_PREFIX}' 开头 ({name})")
            return False
        if name in self.samplers:
            logger.warning(f"采样器已存在，将被覆盖: {name}")
        self.samplers[name] = sampler_cls
        self.sampler_metadata[name] = metadata or {
            "name": name,
            "default_trajectory_length": sampler_cls.default_trajectory_length,
            "requires_hessian": sampler_cls.requires_hessian,
        }
        logger.debug(f"成功注册采样器: {name}")
        return True

    def unregister(self, name: str) -> bool:
        if name not in self.samplers:
            logger.warning(f"注销采样器失败: 找不到采样器 {name}")
            return False
        del self.samplers[name]
        self.sampler_metadata.pop(name, None)
        return True

    def resolve(self, algorithm: str) -> Tuple[str, bool]:
        """
        解析算法名称

        Args:
            algorithm: 算法名，例如 "hmc" 或 "a-rmhmc"

        Returns:
            (内核名称, 是否反向耦合)

        Raises:
            KeyError: 未注册的算法
        """
        antithetic = algorithm.startswith(ANTITHETIC_PREFIX)
        base = algorithm[len(ANTITHETIC_PREFIX):] if antithetic else algorithm
        if base not in self.samplers:
            raise KeyError(f"未知算法: {algorithm}，可选 {self.list_algorithms()}")
        return base, antithetic

    def has(self, algorithm: str) -> bool:
        try:
            self.resolve(algorithm)
            return True
        except KeyError:
            return False

    def get(self, name: str) -> Optional[Type[BaseSampler]]:
        return self.samplers.get(name)

    def get_metadata(self, name: str) -> Optional[Dict[str, Any]]:
        return self.sampler_metadata.get(name)

    def list_samplers(self) -> List[str]:
        return list(self.samplers.keys())

    def list_algorithms(self) -> List[str]:
        """列出全部算法名（原始与反向耦合）"""
        names = self.list_samplers()
        return names + [ANTITHETIC_PREFIX + n for n in names]

    def create(self, algorithm: str, model: ITargetModel, config: SamplerConfig) -> BaseSampler:
        """
        构造采样内核

        QIHMC 在质量规格为默认单位阵时改用标准对数正态规格。

        Args:
            algorithm: 算法名（反向耦合前缀会被忽略）
            model: 目标模型
            config: 采样配置

        Returns:
            采样内核实例
        """
        base, _ = self.resolve(algorithm)
        sampler_cls = self.samplers[base]
        if issubclass(sampler_cls, QIHMCSampler) and config.mass.kind is MassKind.IDENTITY:
            config = config.with_overrides(mass=MassSpec.stochastic_diagonal())
        return sampler_cls(model, config)


_default_registry: Optional[SamplerRegistry] = None


def get_sampler_registry() -> SamplerRegistry:
    """获取内置采样器注册表（hmc、qihmc、rmhmc）"""
    global _default_registry
    if _default_registry is None:
        registry = SamplerRegistry()
        registry.register("hmc", HMCSampler)
        registry.register("qihmc", QIHMCSampler)
        registry.register("rmhmc", RMHMCSampler)
        _default_registry = registry
    return _default_registry
