"""
实验包：配置校验、实验调度与报告结构
"""

from .experiment_config import (
    ALGORITHMS,
    DatasetSpec,
    ExperimentConfig,
    build_experiment_config,
)
from .report import CellResult, AlgorithmSummary, RunReport, best_algorithms
from .experiment_service import ExperimentService, load_dataset, build_model, check_compatibility

__all__ = [
    'ALGORITHMS',
    'DatasetSpec',
    'ExperimentConfig',
    'build_experiment_config',
    'CellResult',
    'AlgorithmSummary',
    'RunReport',
    'best_algorithms',
    'ExperimentService',
    'load_dataset',
    'build_model',
    'check_compatibility',
]
