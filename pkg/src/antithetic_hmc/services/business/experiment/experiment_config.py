"""
实验配置模块

把合并后的配置字典校验为不可变的 ExperimentConfig，
并为每个算法生成对应的 SamplerConfig。
"""

import logging
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ...core.exceptions import ConfigError
from ...core.hamiltonian import MassSpec
from ..integrators.generalized_leapfrog import FixedPointConfig
from ..models.jump_diffusion import DRIFT_CONVENTIONS
from ..samplers.config import SamplerConfig
from ..samplers.sampler_registry import get_sampler_registry

# 设置日志记录器
logger = logging.getLogger(__name__)

# 固定的算法表，下标用于派生子种子，顺序不可更改
ALGORITHMS: Tuple[str, ...] = ("hmc", "qihmc", "rmhmc", "a-hmc", "a-qihmc", "a-rmhmc")
MODEL_KINDS = ("jump_diffusion", "blr")
DATASET_KINDS = ("returns", "classification", "synthetic")
REPORT_FORMATS = ("json", "csv")

_SAMPLER_FIELDS = {f.name for f in fields(SamplerConfig)}


@dataclass(frozen=True)
class DatasetSpec:
    """
    数据集规格

    Attributes:
        kind: returns / classification / synthetic
        name: 数据集名称（用于报告与目录检查）
        path: CSV 路径
        column: 价格列
        date_column: 日期列
        label_column: 标签列
        label_map: 标签映射
        ddof: 标准化自由度修正
        tau: 观测间隔
        synthetic: 合成数据规格字典
    """
    kind: str
    name: str
    path: Optional[str] = None
    column: Any = None
    date_column: Any = None
    label_column: Any = -1
    label_map: Optional[Dict[str, int]] = None
    ddof: int = 0
    tau: float = 1.0
    synthetic: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    经过校验的实验配置

    Attributes:
        name: 实验名称
        dataset: 数据集规格
        model: 模型类型
        algorithms: 算法列表
        n_repeats: 每个算法的重复次数
        master_seed: 主种子
        workers: 并行进程数
        output: 报告输出路径
        format: 报告格式
        canonical: 是否输出不含计时字段的规范报告
        prior_scale: 先验标准差
        drift_convention: 跳跃扩散漂移约定
        n_max: 跳跃扩散截断阶数
        sampler_base: 所有算法共享的采样配置
        qihmc_mass: QIHMC 的对数正态质量规格
        trajectory_lengths: 各内核默认轨迹长度
        overrides: 按算法名覆盖的采样字段
    """
    name: str
    dataset: DatasetSpec
    model: str
    algorithms: Tuple[str, ...]
    n_repeats: int
    master_seed: int
    workers: int
    output: str
    format: str
    canonical: bool
    prior_scale: Optional[float]
    drift_convention: str
    n_max: Optional[int]
    sampler_base: SamplerConfig
    qihmc_mass: MassSpec
    trajectory_lengths: Dict[str, int]
    overrides: Dict[str, Dict[str, Any]]

    def algorithm_index(self, algorithm: str) -> int:
        """算法在固定算法表中的下标"""
        return ALGORITHMS.index(algorithm)

    def sampler_config_for(self, algorithm: str, seed: Optional[int] = None) -> SamplerConfig:
        """
        生成某个算法的采样配置

        Args:
            algorithm: 算法名
            seed: 种子（实际运行使用派生的随机流，此处仅记录）

        Returns:
            SamplerConfig
        """
        base, _ = get_sampler_registry().resolve(algorithm)
        config = self.sampler_base
        if config.trajectory_length is None:
            config = config.with_overrides(trajectory_length=self.trajectory_lengths.get(base))
        changes = dict(self.overrides.get(base, {}))
        changes.update(self.overrides.get(algorithm, {}))
        if base == "qihmc":
            config = config.with_overrides(mass=self.qihmc_mass)
        if changes:
            config = config.with_overrides(**changes)
        return config.with_overrides(seed=seed)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _positive_int(value: Any, key: str, minimum: int = 1) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"配置项 {key} 必须是整数: {value!r}")
    _require(number >= minimum and number == value, f"配置项 {key} 必须是 ≥ {minimum} 的整数: {value!r}")
    return number


def _optional_positive_float(value: Any, key: str) -> Optional[float]:
    if value is None:
        return None
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"配置项 {key} 必须是数值: {value!r}")
    _require(number > 0, f"配置项 {key} 必须为正: {value!r}")
    return number


def _dataset_spec(section: Dict[str, Any], model: str) -> DatasetSpec:
    kind = section.get("kind")
    _require(kind in DATASET_KINDS, f"dataset.kind 必须是 {DATASET_KINDS} 之一: {kind!r}")
    if kind != "synthetic":
        _require(bool(section.get("path")), f"dataset.kind={kind} 需要 dataset.path")
        expected = "returns" if model == "jump_diffusion" else "classification"
        _require(kind == expected, f"模型 {model} 需要 {expected} 类型数据，得到 {kind}")
    synthetic = dict(section.get("synthetic") or {})
    if kind == "synthetic":
        synthetic.setdefault("model", model)
        _require(synthetic["model"] == model, f"合成数据模型 {synthetic['model']} 与 model.kind={model} 不一致")
    tau = float(section.get("tau", 1.0))
    _require(tau > 0, f"dataset.tau 必须为正: {tau}")
    ddof = section.get("ddof", 0)
    _require(ddof in (0, 1), f"dataset.ddof 只能是 0 或 1: {ddof!r}")
    name = section.get("name") or (f"synthetic_{model}" if kind == "synthetic" else None)
    if name is None:
        name = Path(section["path"]).stem
    return DatasetSpec(
        kind=kind,
        name=str(name),
        path=section.get("path"),
        column=section.get("column"),
        date_column=section.get("date_column"),
        label_column=section.get("label_column", -1),
        label_map=section.get("label_map"),
        ddof=int(ddof),
        tau=tau,
        synthetic=synthetic,
    )


def _sampler_base(section: Dict[str, Any], protocol: Dict[str, Any]) -> SamplerConfig:
    averaging = section.get("dual_averaging") or {}
    fixed_point = section.get("fixed_point") or {}
    try:
        return SamplerConfig(
            n_samples=_positive_int(protocol.get("n_samples"), "protocol.n_samples"),
            n_burnin=_positive_int(protocol.get("n_burnin", 0), "protocol.n_burnin", minimum=0),
            step_size=float(section.get("step_size", 0.05)),
            trajectory_length=None,
            adapt_target=float(section.get("adapt_target", 0.8)),
            adapt_during_burnin=bool(section.get("adapt_during_burnin", True)),
            softabs_alpha=float(section.get("softabs_alpha", 1e6)),
            fixed_point=FixedPointConfig(float(fixed_point.get("tolerance", 1e-6)),
                                         int(fixed_point.get("max_iterations", 10))),
            divergence_threshold=float(section.get("divergence_threshold", 1000.0)),
            init_scale=float(section.get("init_scale", 0.1)),
            gamma=float(averaging.get("gamma", 0.05)),
            t0=float(averaging.get("t0", 10.0)),
            kappa=float(averaging.get("kappa", 0.75)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"采样配置无效: {e}") from e


def _qihmc_mass(section: Dict[str, Any]) -> MassSpec:
    try:
        return MassSpec.stochastic_diagonal(float(section.get("location", 0.0)), float(section.get("scale", 1.0)))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"QIHMC 质量配置无效: {e}") from e


def _validate_overrides(overrides: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
    registry = get_sampler_registry()
    result: Dict[str, Dict[str, Any]] = {}
    for name, changes in (overrides or {}).items():
        if name.startswith("_"):
            continue
        _require(registry.has(name), f"sampler.overrides 中的未知算法: {name}")
        _require(isinstance(changes, dict), f"sampler.overrides.{name} 必须是映射")
        unknown = [k for k in changes if k not in _SAMPLER_FIELDS or k in ("mass", "fixed_point", "seed")]
        _require(not unknown, f"sampler.overrides.{name} 含不支持的字段: {unknown}")
        result[name] = dict(changes)
    return result


def build_experiment_config(config: Dict[str, Any]) -> ExperimentConfig:
    """
    校验配置字典并构造 ExperimentConfig

    Args:
        config: ConfigService 合并后的配置

    Returns:
        ExperimentConfig

    Raises:
        ConfigError: 任一配置项无效，或算法与模型不兼容
    """
    experiment = config.get("experiment") or {}
    model_section = config.get("model") or {}
    sampler_section = dict(config.get("sampler") or {})

    model = model_section.get("kind")
    _require(model in MODEL_KINDS, f"model.kind 必须是 {MODEL_KINDS} 之一: {model!r}")
    algorithms = tuple(experiment.get("algorithms") or ())
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    _require(not unknown, f"未知算法 {unknown}，可选 {ALGORITHMS}")
    _require(len(set(algorithms)) == len(algorithms), f"算法列表有重复: {list(algorithms)}")

    drift = model_section.get("drift_convention", "ito")
    _require(drift in DRIFT_CONVENTIONS, f"model.drift_convention 必须是 {DRIFT_CONVENTIONS} 之一: {drift!r}")
    prior_scale = model_section.get("prior_scale", 1.0)
    if prior_scale is not None and not (isinstance(prior_scale, (int, float)) and math.isinf(prior_scale)):
        prior_scale = _optional_positive_float(prior_scale, "model.prior_scale")
    n_max = model_section.get("n_max")
    if n_max is not None:
        n_max = _positive_int(n_max, "model.n_max", minimum=0)

    fmt = experiment.get("format", "json")
    _require(fmt in REPORT_FORMATS, f"experiment.format 必须是 {REPORT_FORMATS} 之一: {fmt!r}")
    protocol = (config.get("protocol") or {}).get(model) or {}
    sampler_section.setdefault("softabs_alpha", model_section.get("softabs_alpha", 1e6))
    lengths = {k: _positive_int(v, f"sampler.trajectory_length.{k}")
               for k, v in (sampler_section.get("trajectory_length") or {}).items() if not k.startswith("_")}

    result = ExperimentConfig(
        name=str(experiment.get("name", "experiment")),
        dataset=_dataset_spec(config.get("dataset") or {}, model),
        model=model,
        algorithms=algorithms,
        n_repeats=_positive_int(experiment.get("n_repeats", 10), "experiment.n_repeats"),
        master_seed=_positive_int(experiment.get("master_seed", 0), "experiment.master_seed", minimum=0),
        workers=_positive_int(experiment.get("workers", 1), "experiment.workers"),
        output=str(experiment.get("output", "results/report.json")),
        format=fmt,
        canonical=bool(experiment.get("canonical", False)),
        prior_scale=prior_scale,
        drift_convention=drift,
        n_max=n_max,
        sampler_base=_sampler_base(sampler_section, protocol),
        qihmc_mass=_qihmc_mass(sampler_section.get("qihmc") or {}),
        trajectory_lengths=lengths,
        overrides=_validate_overrides(sampler_section.get("overrides") or {}),
    )
    for algorithm in result.algorithms:
        try:
            result.sampler_config_for(algorithm)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"算法 {algorithm} 的采样配置无效: {e}") from e
    return result
