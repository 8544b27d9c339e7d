"""
采样运行入口

提供按算法运行单链或反向耦合链的函数。每次运行：
按配置进行预烧（对偶平均自适应步长），冻结步长，计时采样阶段。
"""

import logging
import time
from typing import Optional, Union

import numpy as np

from ...core.interfaces import ITargetModel
from ....utils.rng import RandomStreams, initial_positions
from .antithetic import run_coupled_chains
from .base_sampler import BaseSampler
from .chain_trace import ChainTrace, StepSizeSchedule, apply_metropolis
from .config import ChainOutput, CoupledOutput, SamplerConfig
from .sampler_registry import get_sampler_registry

# 设置日志记录器
logger = logging.getLogger(__name__)

RunOutput = Union[ChainOutput, CoupledOutput]


def run_single_chain(sampler: BaseSampler, init: np.ndarray, streams: RandomStreams) -> ChainOutput:
    """
    运行单条链

    Args:
        sampler: 采样内核
        init: 初始位置
        streams: 命名随机流

    Returns:
        ChainOutput
    """
    config = sampler.config
    w = np.array(init, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("初始位置必须全部有限")
    trace = ChainTrace(config, sampler.dimension)
    schedule = StepSizeSchedule(config)
    total = config.n_burnin + config.n_samples
    start = time.perf_counter()

    for m in range(total):
        if m == config.n_burnin:
            schedule.freeze()
            start = time.perf_counter()
        mass = sampler.draw_iteration_mass(streams)
        p = sampler.sample_momentum(w, mass, streams.momentum)
        proposal = sampler.propose(w, p, schedule.current, mass)
        u = streams.uniform.random()
        w, accepted = apply_metropolis(proposal, u, w)
        trace.record(m, w, proposal, accepted)
        if m < config.n_burnin:
            schedule.observe(proposal.alpha)

    seconds = time.perf_counter() - start
    output = trace.to_output(seconds, schedule.current)
    if output.n_divergent:
        logger.warning(f"{sampler.get_name()} 出现 {output.n_divergent} 次发散轨迹")
    logger.debug(f"{sampler.get_name()} 完成: {output.summary()}")
    return output


def _streams(config: SamplerConfig, streams: Optional[RandomStreams]) -> RandomStreams:
    return streams if streams is not None else RandomStreams(config.seed)


def _run_named(algorithm: str, model: ITargetModel, config: SamplerConfig,
               init: Optional[np.ndarray], streams: Optional[RandomStreams]) -> ChainOutput:
    streams = _streams(config, streams)
    sampler = get_sampler_registry().create(algorithm, model, config)
    if init is None:
        init = initial_positions(streams.init, model.dimension, 1, config.init_scale)[0]
    return run_single_chain(sampler, init, streams)


def hmc_run(model: ITargetModel, config: SamplerConfig, init: Optional[np.ndarray] = None,
            streams: Optional[RandomStreams] = None) -> ChainOutput:
    """
    HMC 单链运行

    Args:
        model: 目标模型
        config: 采样配置
        init: 初始位置，None 时从初始化随机流抽取
        streams: 命名随机流，None 时由 config.seed 构造

    Returns:
        ChainOutput
    """
    return _run_named("hmc", model, config, init, streams)


def qihmc_run(model: ITargetModel, config: SamplerConfig, init: Optional[np.ndarray] = None,
              streams: Optional[RandomStreams] = None) -> ChainOutput:
    """QIHMC 单链运行（每次迭代抽取对数正态对角质量）"""
    return _run_named("qihmc", model, config, init, streams)


def rmhmc_run(model: ITargetModel, config: SamplerConfig, init: Optional[np.ndarray] = None,
              streams: Optional[RandomStreams] = None) -> ChainOutput:
    """RMHMC 单链运行（模型需提供 Hessian）"""
    return _run_named("rmhmc", model, config, init, streams)


def antithetic_run(algorithm: str, model: ITargetModel, config: SamplerConfig,
                   init_x: Optional[np.ndarray] = None, init_y: Optional[np.ndarray] = None,
                   streams: Optional[RandomStreams] = None) -> CoupledOutput:
    """
    反向耦合运行

    未给出初始位置时依次从初始化随机流抽取 init_x、init_y，
    因此原链与同种子的单链运行逐位一致。

    Args:
        algorithm: "hmc"、"qihmc"、"rmhmc"（可带 "a-" 前缀）
        model: 目标模型
        config: 采样配置
        init_x: 原链初始位置
        init_y: 反向链初始位置
        streams: 命名随机流

    Returns:
        CoupledOutput
    """
    streams = _streams(config, streams)
    sampler = get_sampler_registry().create(algorithm, model, config)
    if init_x is None:
        init_x = initial_positions(streams.init, model.dimension, 1, config.init_scale)[0]
    if init_y is None:
        init_y = initial_positions(streams.init, model.dimension, 1, config.init_scale)[0]
    return run_coupled_chains(sampler, init_x, init_y, streams)


def adapt_then_sample(algorithm: str, model: ITargetModel, config: SamplerConfig,
                      streams: Optional[RandomStreams] = None) -> RunOutput:
    """
    按算法名预烧自适应后采样

    轨迹长度未配置时使用算法默认值（HMC/QIHMC 为 200，RMHMC 为 6）。

    Args:
        algorithm: 六种算法之一，例如 "a-qihmc"
        model: 目标模型
        config: 采样配置
        streams: 命名随机流

    Returns:
        单链为 ChainOutput，反向耦合为 CoupledOutput
    """
    _, antithetic = get_sampler_registry().resolve(algorithm)
    logger.debug(f"运行 {algorithm}: 预烧 {config.n_burnin}, 采样 {config.n_samples}")
    if antithetic:
        return antithetic_run(algorithm, model, config, streams=streams)
    return _run_named(algorithm, model, config, None, streams)
