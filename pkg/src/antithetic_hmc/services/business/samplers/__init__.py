"""
采样器包

HMC、QIHMC、RMHMC 三种内核，反向耦合驱动以及对偶平均步长自适应。
"""

from .config import SamplerConfig, ChainOutput, CoupledOutput
from .dual_averaging import DualAveragingState, DualAveraging, dual_averaging_step
from .base_sampler import BaseSampler, Proposal
from .hmc import HMCSampler
from .qihmc import QIHMCSampler
from .rmhmc import RMHMCSampler
from .sampler_registry import SamplerRegistry, get_sampler_registry
from .antithetic import run_coupled_chains
from .runner import (
    run_single_chain,
    hmc_run,
    qihmc_run,
    rmhmc_run,
    antithetic_run,
    adapt_then_sample,
)

__all__ = [
    'SamplerConfig',
    'ChainOutput',
    'CoupledOutput',
    'DualAveragingState',
    'DualAveraging',
    'dual_averaging_step',
    'BaseSampler',
    'Proposal',
    'HMCSampler',
    'QIHMCSampler',
    'RMHMCSampler',
    'SamplerRegistry',
    'get_sampler_registry',
    'run_coupled_chains',
    'run_single_chain',
    'hmc_run',
    'qihmc_run',
    'rmhmc_run',
    'antithetic_run',
    'adapt_then_sample',
]
