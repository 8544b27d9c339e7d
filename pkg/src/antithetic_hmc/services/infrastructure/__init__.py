"""
基础设施服务包：配置管理与报告输出
"""

from .config_service import ConfigService, deep_update
from .report_service import ReportService, summary_frame, runs_frame, runs_path

__all__ = [
    'ConfigService',
    'deep_update',
    'ReportService',
    'summary_frame',
    'runs_frame',
    'runs_path',
]
