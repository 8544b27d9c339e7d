"""
核心接口定义模块

此模块定义了采样库中核心组件的接口，提供了组件间交互的标准契约：
- ITargetModel: 目标后验（势能 U(w) 及其导数）
- ISampler: 单链采样内核，反向耦合驱动器通过它组合两条链
- IServiceRegistry: 服务注册与发现
"""

import abc
from typing import Any, Dict, Optional

import numpy as np

from .exceptions import ModelEvaluationError


class ITargetModel(abc.ABC):
    """
    目标模型接口
    
    所有目标后验必须实现此接口。参数向量处于无约束空间，
    势能为负对数后验（似然加先验）。
    """

    name: str = "target"

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        """参数维度 D"""
        pass

    @abc.abstractmethod
    def neg_log_posterior(self, w: np.ndarray) -> float:
        """
        计算负对数后验 U(w)
        
        Args:
            w: 参数向量
            
        Returns:
            势能值，超出支撑集时返回 +inf
        """
        pass

    @abc.abstractmethod
    def grad(self, w: np.ndarray) -> np.ndarray:
        """
        计算 U(w) 的梯度
        
        Args:
            w: 参数向量
            
        Returns:
            长度为 D 的梯度向量
        """
        pass

    def hessian(self, w: np.ndarray) -> np.ndarray:
        """
        计算 U(w) 的 Hessian 矩阵
        
        Args:
            w: 参数向量
            
        Returns:
            D×D 对称矩阵

        Raises:
            ModelEvaluationError: 模型未提供 Hessian
        """
        raise ModelEvaluationError(f"模型 {self.name} 未提供 Hessian")

    def has_hessian(self) -> bool:
        """
        检查模型是否提供 Hessian（RMHMC 需要）
        
        Returns:
            是否提供 Hessian
        """
        return type(self).hessian is not ITargetModel.hessian

    def describe(self) -> Dict[str, Any]:
        """获取模型描述信息"""
        return {"name": self.name, "dimension": self.dimension, "has_hessian": self.has_hessian()}


class ISampler(abc.ABC):
    """
    采样内核接口
    
    一次迭代被拆成可组合的几个步骤，使单链运行和反向耦合运行共享同一套代码：
    抽取本次迭代的质量矩阵 -> 抽取动量 -> 积分并计算 δH -> Metropolis。
    """

    @abc.abstractmethod
    def get_name(self) -> str:
        """获取采样器名称"""
        pass

    @abc.abstractmethod
    def draw_iteration_mass(self, streams: Any) -> Optional[Any]:
        """
        抽取本次迭代共享的质量矩阵
        
        Args:
            streams: 命名随机流
            
        Returns:
            质量矩阵（与位置无关时），位置相关时返回 None
        """
        pass

    @abc.abstractmethod
    def sample_momentum(self, w: np.ndarray, iteration_mass: Optional[Any], rng: np.random.Generator) -> np.ndarray:
        """
        抽取动量
        
        Args:
            w: 当前位置
            iteration_mass: draw_iteration_mass 的结果
            rng: 动量随机流
            
        Returns:
            动量向量
        """
        pass

    @abc.abstractmethod
    def propose(self, w: np.ndarray, p: np.ndarray, step_size: float, iteration_mass: Optional[Any]) -> Any:
        """
        积分一条轨迹并计算能量差
        
        Args:
            w: 当前位置
            p: 初始动量
            step_size: 步长
            iteration_mass: draw_iteration_mass 的结果
            
        Returns:
            提议结果（位置、δH、接受概率、发散标记）
        """
        pass


class IServiceRegistry(abc.ABC):
    """
    服务注册接口
    
    定义服务注册和发现的标准接口。
    """
    
    @abc.abstractmethod
    def register_service(self, service_name: str, service_instance: Any) -> bool:
        """
        注册服务
        
        Args:
            service_name: 服务名称
            service_instance: 服务实例
            
        Returns:
            注册是否成功
        """
        pass
    
    @abc.abstractmethod
    def get_service(self, service_name: str) -> Optional[Any]:
        """
        获取服务实例
        
        Args:
            service_name: 服务名称
            
        Returns:
            服务实例，不存在则返回None
        """
        pass
    
    @abc.abstractmethod
    def has_service(self, service_name: str) -> bool:
        """检查服务是否存在"""
        pass
