"""
反向耦合驱动

两条链共享每次迭代的随机数：
- 质量矩阵（QIHMC）只抽一次，两条链共用
- 动量 pˣ 按原链抽取（RMHMC 使用原链位置的度量），反向链取 pʸ = −pˣ
- Metropolis 的均匀数 u 只抽一次，两条链用同一个 u 判决
步长自适应只在原链上进行，所得步长同时用于反向链。
每次迭代先完整推进原链，再推进反向链。
"""

import logging
import time

import numpy as np

from ....utils.rng import RandomStreams
from ..diagnostics.ess import cross_correlations
from .base_sampler import BaseSampler
from .chain_trace import ChainTrace, StepSizeSchedule, apply_metropolis
from .config import CoupledOutput

# 设置日志记录器
logger = logging.getLogger(__name__)


def run_coupled_chains(sampler: BaseSampler, init_x: np.ndarray, init_y: np.ndarray,
                       streams: RandomStreams) -> CoupledOutput:
    """
    运行一对反向耦合链

    Args:
        sampler: 采样内核（两条链共用）
        init_x: 原链初始位置
        init_y: 反向链初始位置
        streams: 命名随机流

    Returns:
        CoupledOutput
    """
    config = sampler.config
    w_x = np.array(init_x, dtype=float)
    w_y = np.array(init_y, dtype=float)
    if not (np.all(np.isfinite(w_x)) and np.all(np.isfinite(w_y))):
        raise ValueError("初始位置必须全部有限")
    trace_x = ChainTrace(config, sampler.dimension)
    trace_y = ChainTrace(config, sampler.dimension)
    schedule = StepSizeSchedule(config)
    total = config.n_burnin + config.n_samples
    start = time.perf_counter()

    for m in range(total):
        if m == config.n_burnin:
            schedule.freeze()
            start = time.perf_counter()
        step_size = schedule.current
        mass = sampler.draw_iteration_mass(streams)
        p_x = sampler.sample_momentum(w_x, mass, streams.momentum)
        p_y = -p_x
        proposal_x = sampler.propose(w_x, p_x, step_size, mass)
        proposal_y = sampler.propose(w_y, p_y, step_size, mass)
        u = streams.uniform.random()
        w_x, accepted_x = apply_metropolis(proposal_x, u, w_x)
        w_y, accepted_y = apply_metropolis(proposal_y, u, w_y)
        trace_x.record(m, w_x, proposal_x, accepted_x)
        trace_y.record(m, w_y, proposal_y, accepted_y)
        if m < config.n_burnin:
            schedule.observe(proposal_x.alpha)

    seconds = time.perf_counter() - start
    chain_x = trace_x.to_output(seconds, schedule.current)
    chain_y = trace_y.to_output(seconds, schedule.current)
    for label, chain in (("x", chain_x), ("y", chain_y)):
        if chain.n_divergent:
            logger.warning(f"{sampler.get_name()} 反向链对的 {label} 链出现 {chain.n_divergent} 次发散轨迹")

    correlations = cross_correlations(chain_x.samples, chain_y.samples)
    if np.all(np.isnan(correlations)):
        logger.warning("所有维度均为常数，跨链相关系数记为 NaN")
        rho = float("nan")
    else:
        rho = float(np.nanmax(correlations))
    return CoupledOutput(chain_x, chain_y, correlations, rho, seconds)
