"""
辛积分器包
"""

from .leapfrog import LeapfrogConfig, IntegrationResult, leapfrog, integrate_leapfrog
from .generalized_leapfrog import (
    FixedPointConfig,
    RiemannianHamiltonian,
    riemannian_hamiltonian_grads,
    generalized_leapfrog,
    integrate_generalized_leapfrog,
)

__all__ = [
    'LeapfrogConfig',
    'IntegrationResult',
    'leapfrog',
    'integrate_leapfrog',
    'FixedPointConfig',
    'RiemannianHamiltonian',
    'riemannian_hamiltonian_grads',
    'generalized_leapfrog',
    'integrate_generalized_leapfrog',
]
