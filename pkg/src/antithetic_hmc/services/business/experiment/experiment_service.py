"""
实验服务模块

按实验配置加载数据、构建目标模型，并对 (算法, 重复) 单元逐个运行
预烧自适应与采样，汇总为 RunReport。单元之间互相独立，可并行执行；
任何单元失败只记录在该单元中，不影响其余单元。
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import List, Tuple, Union

import numpy as np
from tqdm import tqdm

from ...core.base_service import BaseService
from ...core.exceptions import ConfigError, DiagnosticsError
from ...core.interfaces import ITargetModel
from ....utils.rng import streams_for_cell
from ..data.catalog import check_against_catalog
from ..data.loaders import load_classification_csv, load_price_csv, standardize_and_bias, to_log_returns
from ..data.synthetic import SyntheticSpec, generate_synthetic
from ..data.types import ClassificationData, ReturnSeries
from ..diagnostics.ess import antithetic_mess, is_degenerate_rho, multivariate_ess, normalized_ess
from ..models.jump_diffusion import MertonJumpDiffusion
from ..models.logistic_regression import BayesianLogisticRegression
from ..samplers.config import CoupledOutput
from ..samplers.runner import adapt_then_sample
from ..samplers.sampler_registry import get_sampler_registry
from .experiment_config import ALGORITHMS, DatasetSpec, ExperimentConfig
from .report import CellResult, RunReport

# 设置日志记录器
logger = logging.getLogger(__name__)

Dataset = Union[ReturnSeries, ClassificationData]


def load_dataset(spec: DatasetSpec, model: str, drift_convention: str = "ito") -> Dataset:
    """
    按数据集规格加载并预处理数据

    - returns: 读取价格 CSV 并转为对数收益率
    - classification: 读取分类 CSV，标准化特征并加入偏置列
    - synthetic: 在内存中生成，逻辑回归数据同样标准化

    Args:
        spec: 数据集规格
        model: 模型类型
        drift_convention: 合成跳跃扩散数据使用的漂移约定

    Returns:
        ReturnSeries 或带偏置的 ClassificationData
    """
    if spec.kind == "returns":
        prices = load_price_csv(spec.path, column=spec.column, date_column=spec.date_column, name=spec.name)
        return to_log_returns(prices, tau=spec.tau)
    if spec.kind == "classification":
        raw = load_classification_csv(spec.path, label_column=spec.label_column,
                                      label_map=spec.label_map, name=spec.name)
        return standardize_and_bias(raw, ddof=spec.ddof)

    synthetic = spec.synthetic
    dataset = generate_synthetic(SyntheticSpec(
        model=synthetic.get("model", model),
        n=int(synthetic.get("n", 1000)),
        params=dict(synthetic.get("params") or {}),
        seed=synthetic.get("seed", 0),
        tau=spec.tau,
        drift_convention=drift_convention,
    ))
    if isinstance(dataset, ClassificationData):
        dataset = standardize_and_bias(dataset, ddof=spec.ddof)
    return dataset


def build_model(config: ExperimentConfig, dataset: Dataset) -> ITargetModel:
    """
    根据配置构建目标模型

    Raises:
        ConfigError: 模型类型与数据类型不匹配
    """
    if config.model == "jump_diffusion":
        if not isinstance(dataset, ReturnSeries):
            raise ConfigError("跳跃扩散模型需要收益率数据")
        return MertonJumpDiffusion(dataset, prior_scale=config.prior_scale, n_max=config.n_max,
                                   drift_convention=config.drift_convention)
    if not isinstance(dataset, ClassificationData):
        raise ConfigError("逻辑回归模型需要分类数据")
    return BayesianLogisticRegression(dataset, prior_scale=config.prior_scale)


def check_compatibility(config: ExperimentConfig, model: ITargetModel) -> None:
    """
    检查算法与模型是否兼容（RMHMC 需要 Hessian）

    Raises:
        ConfigError: 模型缺少所需的 Hessian
    """
    registry = get_sampler_registry()
    for algorithm in config.algorithms:
        base, _ = registry.resolve(algorithm)
        metadata = registry.get_metadata(base) or {}
        if metadata.get("requires_hessian") and not model.has_hessian():
            raise ConfigError(f"算法 {algorithm} 需要 Hessian，但模型 {model.name} 未提供")


def _run_cell(config: ExperimentConfig, model: ITargetModel, algorithm: str, repeat: int) -> CellResult:
    """
    运行一个 (算法, 重复) 单元

    定义在模块顶层以便进程池序列化。所有异常都在此捕获并写入单元结果。
    """
    cell = CellResult(algorithm=algorithm, repeat=repeat)
    truncation_before = getattr(model, "truncation_warnings", 0)
    try:
        streams = streams_for_cell(config.master_seed, config.algorithm_index(algorithm), repeat)
        sampler_config = config.sampler_config_for(algorithm)
        output = adapt_then_sample(algorithm, model, sampler_config, streams)

        if isinstance(output, CoupledOutput):
            chain = output.chain_x
            if not np.isfinite(output.rho):
                raise DiagnosticsError("所有维度均为常数，无法计算跨链相关系数")
            cell.m_ess_original = multivariate_ess(chain.samples).m_ess
            cell.rho = float(output.rho)
            cell.degenerate_rho = is_degenerate_rho(output.rho)
            cell.m_ess = antithetic_mess(cell.m_ess_original, output.rho)
            cell.seconds = output.seconds
            cell.n_divergent = output.chain_x.n_divergent + output.chain_y.n_divergent
            cell.fixed_point_failures = output.chain_x.fixed_point_failures + output.chain_y.fixed_point_failures
        else:
            chain = output
            cell.m_ess = multivariate_ess(chain.samples).m_ess
            cell.seconds = output.seconds
            cell.n_divergent = output.n_divergent
            cell.fixed_point_failures = output.fixed_point_failures

        cell.acceptance = chain.acceptance_rate
        cell.step_size = chain.step_size
        cell.m_ess_per_s = normalized_ess(cell.m_ess, cell.seconds)
    except Exception as e:
        logger.error(f"单元 {algorithm}#{repeat} 运行失败: {e}")
        cell.error = f"{type(e).__name__}: {e}"
    cell.truncation_warnings = getattr(model, "truncation_warnings", 0) - truncation_before
    return cell


def _cell_order(cell: CellResult) -> Tuple[int, int]:
    return ALGORITHMS.index(cell.algorithm), cell.repeat


class ExperimentService(BaseService):
    """
    实验服务类

    负责完整的实验流程：加载数据、构建模型、调度全部单元、组装报告。

    Attributes:
        show_progress: 是否显示进度条
    """

    def __init__(self, show_progress: bool = True):
        super().__init__("experiment_service")
        self.show_progress = show_progress

    def initialize(self) -> bool:
        self.is_initialized = True
        logger.info("实验服务初始化成功")
        return True

    def prepare(self, config: ExperimentConfig) -> Tuple[Dataset, ITargetModel]:
        """
        加载数据并构建模型

        Raises:
            DataError: 数据读取失败
            ConfigError: 模型与数据或算法不兼容
        """
        dataset = load_dataset(config.dataset, config.model, config.drift_convention)
        model = build_model(config, dataset)
        n_observations = len(dataset) if isinstance(dataset, ReturnSeries) else dataset.n_observations
        check_against_catalog(config.dataset.name, n_observations, model.dimension)
        check_compatibility(config, model)
        logger.info(f"数据集 {config.dataset.name}: N={n_observations}, 模型 {model.name}, D={model.dimension}")
        return dataset, model

    def run_experiment(self, config: ExperimentConfig) -> RunReport:
        """
        运行实验

        每个单元从 (主种子, 算法下标, 重复编号) 派生独立随机流，
        因此结果与执行顺序和并行度无关。

        Args:
            config: 实验配置

        Returns:
            RunReport
        """
        dataset, model = self.prepare(config)
        cells = [(algorithm, repeat) for algorithm in config.algorithms for repeat in range(config.n_repeats)]
        workers = max(1, min(config.workers, len(cells) or 1))
        logger.info(f"开始实验 {config.name}: {len(config.algorithms)} 个算法 × {config.n_repeats} 次重复, "
                    f"{workers} 个进程")

        results: List[CellResult] = []
        progress = tqdm(total=len(cells), desc=config.name, disable=not self.show_progress)
        if workers == 1:
            for algorithm, repeat in cells:
                results.append(_run_cell(config, model, algorithm, repeat))
                progress.update(1)
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                future_to_cell = {executor.submit(_run_cell, config, model, algorithm, repeat): (algorithm, repeat)
                                  for algorithm, repeat in cells}
                for future in as_completed(future_to_cell):
                    algorithm, repeat = future_to_cell[future]
                    try:
                        results.append(future.result())
                    except Exception as e:
                        logger.error(f"单元 {algorithm}#{repeat} 进程异常: {e}")
                        results.append(CellResult(algorithm=algorithm, repeat=repeat,
                                                  error=f"{type(e).__name__}: {e}"))
                    progress.update(1)
        progress.close()
        results.sort(key=_cell_order)

        n_observations = len(dataset) if isinstance(dataset, ReturnSeries) else dataset.n_observations
        report = RunReport(
            experiment=config.name,
            dataset=config.dataset.name,
            model=config.model,
            dimension=model.dimension,
            n_observations=n_observations,
            master_seed=config.master_seed,
            n_repeats=config.n_repeats,
            workers=config.workers,
            algorithms=list(config.algorithms),
            cells=results,
            settings=self._settings(config),
        )
        if report.n_failed:
            logger.warning(f"{report.n_failed} 个单元运行失败")
        logger.info(f"实验 {config.name} 完成")
        return report

    @staticmethod
    def _settings(config: ExperimentConfig) -> dict:
        base = config.sampler_base
        return {
            "n_samples": base.n_samples,
            "n_burnin": base.n_burnin,
            "initial_step_size": base.step_size,
            "adapt_target": base.adapt_target,
            "trajectory_length": {a: config.sampler_config_for(a).trajectory_length for a in config.algorithms},
            "prior_scale": config.prior_scale if config.prior_scale is not None and math.isfinite(config.prior_scale) else None,
            "drift_convention": config.drift_convention if config.model == "jump_diffusion" else None,
            "tau": config.dataset.tau,
        }
