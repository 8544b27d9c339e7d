"""
服务工厂模块

此模块提供服务工厂类，负责创建、初始化、获取和关闭命令行所需的服务实例：
配置服务、实验服务和报告服务。
"""

import logging
from typing import Any, Dict, List, Optional, Set

from .base_service import BaseService
from .interfaces import IServiceRegistry
from ..infrastructure.config_service import ConfigService
from ..infrastructure.report_service import ReportService
from ..business.experiment.experiment_service import ExperimentService

# 设置日志记录器
logger = logging.getLogger(__name__)

# 初始化顺序即依赖顺序
SERVICE_ORDER = ("config_service", "experiment_service", "report_service")


class ServiceFactory(IServiceRegistry):
    """
    服务工厂类

    管理一次命令行调用中的全部服务实例。

    Attributes:
        config_file: 实验配置文件路径
        show_progress: 实验服务是否显示进度条
    """

    # 单例实例
    _instance = None

    @classmethod
    def get_instance(cls, config_file: Optional[str] = None, show_progress: bool = True) -> "ServiceFactory":
        """获取单例实例"""
        if cls._instance is None:
            cls._instance = cls(config_file, show_progress)
            logger.debug("创建ServiceFactory单例实例")
        return cls._instance

    @classmethod
    def reset_instance(cls) -> None:
        """丢弃单例实例（先关闭其服务）"""
        if cls._instance is not None:
            cls._instance.shutdown_all_services()
        cls._instance = None

    def __init__(self, config_file: Optional[str] = None, show_progress: bool = True):
        """
        初始化服务工厂

        Args:
            config_file: 实验配置文件路径，None 时只使用默认配置
            show_progress: 是否显示进度条
        """
        self.config_file = config_file
        self.show_progress = show_progress
        # 存储已创建的服务实例
        self._services: Dict[str, BaseService] = {}
        # 记录已初始化的服务
        self._initialized_services: Set[str] = set()
        logger.debug("服务工厂已创建")

    def _create_service(self, service_name: str) -> Optional[BaseService]:
        if service_name == "config_service":
            return ConfigService(self.config_file)
        if service_name == "experiment_service":
            return ExperimentService(show_progress=self.show_progress)
        if service_name == "report_service":
            return ReportService()
        logger.error(f"未知的服务类型: {service_name}")
        return None

    def register_service(self, service_name: str, service_instance: Any) -> bool:
        """
        注册外部创建的服务实例

        Args:
            service_name: 服务名称
            service_instance: 服务实例

        Returns:
            注册是否成功
        """
        if not isinstance(service_instance, BaseService):
            logger.warning(f"注册服务失败: {service_name} 不是BaseService的实例")
            return False
        self._services[service_name] = service_instance
        if service_instance.is_available():
            self._initialized_services.add(service_name)
        logger.info(f"成功注册服务: {service_name}")
        return True

    def get_service(self, service_name: str) -> Optional[BaseService]:
        """
        获取服务实例，必要时创建并初始化

        Args:
            service_name: 服务名称

        Returns:
            服务实例，创建或初始化失败时返回 None
        """
        service = self._services.get(service_name)
        if service is None:
            service = self._create_service(service_name)
            if service is None:
                return None
            self._services[service_name] = service
        if service_name not in self._initialized_services:
            if not service.initialize():
                logger.error(f"初始化服务 '{service_name}' 失败")
                return None
            self._initialized_services.add(service_name)
        return service

    def has_service(self, service_name: str) -> bool:
        return service_name in self._services

    def list_services(self) -> List[str]:
        return list(self._services.keys())

    def initialize_all_services(self) -> bool:
        """
        按依赖顺序初始化全部服务

        Returns:
            是否全部初始化成功
        """
        success = all(self.get_service(name) is not None for name in SERVICE_ORDER)
        if success:
            logger.debug("所有服务初始化成功")
        else:
            logger.error("部分服务初始化失败")
        return success

    def shutdown_all_services(self) -> bool:
        """
        按初始化的反序关闭服务

        Returns:
            是否全部关闭成功
        """
        success = True
        for service_name in reversed(list(self._services)):
            if service_name not in self._initialized_services:
                continue
            if self._services[service_name].shutdown():
                self._initialized_services.discard(service_name)
            else:
                logger.error(f"关闭服务 '{service_name}' 失败")
                success = False
        return success
