"""
服务包

此包包含采样库的分层结构：
- core: 服务基类、接口、异常、哈密顿量与服务工厂
- infrastructure: 配置服务与报告输出服务
- business: 模型、积分器、采样器、诊断、数据与实验
"""

from .core.base_service import BaseService
from .infrastructure.config_service import ConfigService
from .infrastructure.report_service import ReportService
from .business.experiment.experiment_service import ExperimentService
from .core.service_factory import ServiceFactory

__all__ = [
    'BaseService',
    'ConfigService',
    'ReportService',
    'ExperimentService',
    'ServiceFactory',
]
