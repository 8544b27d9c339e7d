"""
服务基类模块

服务负责组织实验流程：读取配置、调度采样任务、输出报告。
数值内核（模型、积分器、采样器）是普通对象，不继承此类。
"""

import abc
import logging
from typing import Any, Dict, Optional

# 设置日志记录器
logger = logging.getLogger(__name__)


class BaseService(abc.ABC):
    """
    服务基类

    生命周期：创建 -> initialize() -> 使用 -> shutdown()。
    ServiceFactory 只把 initialize() 返回 True 的服务交给调用方。

    Attributes:
        name: 服务名称，同时是在 ServiceFactory 中的注册名
        config: 服务自身的配置项
        is_initialized: 是否已完成初始化
    """

    def __init__(self, name: str, config: Optional[Dict[str, Any]] = None):
        self.name = name
        self.config = config or {}
        self.is_initialized = False
        logger.debug(f"创建服务: {name}")

    @abc.abstractmethod
    def initialize(self) -> bool:
        """
        初始化服务

        Returns:
            初始化是否成功；失败时不得抛出异常
        """

    def shutdown(self) -> bool:
        """
        关闭服务并释放资源

        Returns:
            关闭是否成功
        """
        logger.debug(f"关闭服务: {self.name}")
        self.is_initialized = False
        return True

    def get_name(self) -> str:
        return self.name

    def is_available(self) -> bool:
        return self.is_initialized
