"""
核心包：服务基类、接口、异常层次与哈密顿量原语
"""

from .base_service import BaseService
from .interfaces import ITargetModel, ISampler, IServiceRegistry
from .exceptions import (
    AntitheticHMCError,
    FactorizationError,
    ModelEvaluationError,
    DataError,
    ConfigError,
    DiagnosticsError,
    ReportError,
)
from .hamiltonian import (
    PhasePoint,
    MassKind,
    MassSpec,
    RealizedMass,
    realize_mass,
    kinetic_energy,
    kinetic_gradient,
    hamiltonian,
    sample_momentum,
    acceptance_probability,
    metropolis,
)

__all__ = [
    'BaseService',
    'ITargetModel',
    'ISampler',
    'IServiceRegistry',
    'AntitheticHMCError',
    'FactorizationError',
    'ModelEvaluationError',
    'DataError',
    'ConfigError',
    'DiagnosticsError',
    'ReportError',
    'PhasePoint',
    'MassKind',
    'MassSpec',
    'RealizedMass',
    'realize_mass',
    'kinetic_energy',
    'kinetic_gradient',
    'hamiltonian',
    'sample_momentum',
    'acceptance_probability',
    'metropolis',
]
