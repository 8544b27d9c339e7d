"""
实验报告结构

每个 (算法, 重复) 单元记录一次运行的诊断量；算法层面的均值总是由
保存的单元值重新计算，不单独累计。
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

# 规范输出中省略的计时相关字段
TIMING_FIELDS = ("seconds", "m_ess_per_s")


@dataclass
class CellResult:
    """
    单次运行结果

    Attributes:
        algorithm: 算法名
        repeat: 重复编号
        m_ess: 有效样本量（反向耦合为修正后的 mESS，可能为 +inf）
        m_ess_original: 原链 mESS（反向耦合时）
        seconds: 采样阶段耗时
        m_ess_per_s: mESS/t
        acceptance: 原链接受率
        n_divergent: 发散次数
        rho: 最大跨链相关系数（仅反向耦合）
        degenerate_rho: ρ 是否触发 +inf 哨兵
        step_size: 冻结后的步长
        fixed_point_failures: 不动点未收敛次数
        truncation_warnings: 泊松截断未达尾部界次数
        error: 运行失败时的错误信息
    """
    algorithm: str
    repeat: int
    m_ess: Optional[float] = None
    m_ess_original: Optional[float] = None
    seconds: Optional[float] = None
    m_ess_per_s: Optional[float] = None
    acceptance: Optional[float] = None
    n_divergent: int = 0
    rho: Optional[float] = None
    degenerate_rho: bool = False
    step_size: Optional[float] = None
    fixed_point_failures: int = 0
    truncation_warnings: int = 0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self, canonical: bool = False) -> Dict[str, Any]:
        data = {k: _json_number(v) for k, v in asdict(self).items()}
        if canonical:
            for key in TIMING_FIELDS:
                data.pop(key, None)
        return data


def _json_number(value: Any) -> Any:
    """非有限浮点数在 JSON 中记为 null"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _mean(values: List[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None and not (isinstance(v, float) and math.isnan(v))]
    if not present:
        return None
    return float(np.mean(present))


@dataclass
class AlgorithmSummary:
    """
    单个算法在所有重复上的均值

    Attributes:
        algorithm: 算法名
        n_runs: 成功运行次数
        n_failed: 失败次数
        m_ess: 平均 mESS
        seconds: 平均耗时
        m_ess_per_s: 平均 mESS/t
        acceptance: 平均接受率
        rho: 平均 ρ
        step_size: 平均步长
    """
    algorithm: str
    n_runs: int
    n_failed: int
    m_ess: Optional[float]
    seconds: Optional[float]
    m_ess_per_s: Optional[float]
    acceptance: Optional[float]
    rho: Optional[float]
    step_size: Optional[float]

    @classmethod
    def from_cells(cls, algorithm: str, cells: List[CellResult]) -> "AlgorithmSummary":
        ok = [c for c in cells if c.ok]
        return cls(
            algorithm=algorithm,
            n_runs=len(ok),
            n_failed=len(cells) - len(ok),
            m_ess=_mean([c.m_ess for c in ok]),
            seconds=_mean([c.seconds for c in ok]),
            m_ess_per_s=_mean([c.m_ess_per_s for c in ok]),
            acceptance=_mean([c.acceptance for c in ok]),
            rho=_mean([c.rho for c in ok]),
            step_size=_mean([c.step_size for c in ok]),
        )

    def to_dict(self, canonical: bool = False) -> Dict[str, Any]:
        data = {k: _json_number(v) for k, v in asdict(self).items()}
        if canonical:
            for key in TIMING_FIELDS:
                data.pop(key, None)
        return data


def best_algorithms(summaries: List[AlgorithmSummary]) -> Dict[str, Optional[str]]:
    """
    每项指标表现最好的算法（mESS 最大、耗时最短、mESS/t 最大）

    Returns:
        指标名到算法名的映射，无可比较数据时为 None
    """
    def pick(key: str, largest: bool) -> Optional[str]:
        candidates = [(getattr(s, key), s.algorithm) for s in summaries if getattr(s, key) is not None]
        if not candidates:
            return None
        chosen = max(candidates, key=lambda t: t[0]) if largest else min(candidates, key=lambda t: t[0])
        return chosen[1]

    return {
        "m_ess": pick("m_ess", True),
        "seconds": pick("seconds", False),
        "m_ess_per_s": pick("m_ess_per_s", True),
    }


@dataclass
class RunReport:
    """
    实验报告

    Attributes:
        experiment: 实验名称
        dataset: 数据集名称
        model: 模型类型
        dimension: 参数维度
        n_observations: 观测数
        master_seed: 主种子
        n_repeats: 重复次数
        workers: 并行进程数
        algorithms: 算法列表（报告顺序）
        cells: 全部单元结果
        settings: 采样设置摘要
    """
    experiment: str
    dataset: str
    model: str
    dimension: int
    n_observations: int
    master_seed: int
    n_repeats: int
    workers: int
    algorithms: List[str]
    cells: List[CellResult] = field(default_factory=list)
    settings: Dict[str, Any] = field(default_factory=dict)

    def cells_for(self, algorithm: str) -> List[CellResult]:
        return sorted((c for c in self.cells if c.algorithm == algorithm), key=lambda c: c.repeat)

    def summaries(self) -> List[AlgorithmSummary]:
        return [AlgorithmSummary.from_cells(a, self.cells_for(a)) for a in self.algorithms]

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.cells if not c.ok)

    def to_dict(self, canonical: bool = False) -> Dict[str, Any]:
        """
        完整嵌套结构

        Args:
            canonical: 省略计时字段与进程数，使不同并行度的报告可逐字节比较
        """
        summaries = self.summaries()
        best = best_algorithms(summaries)
        if canonical:
            for key in TIMING_FIELDS:
                best.pop(key, None)
        data: Dict[str, Any] = {
            "experiment": self.experiment,
            "dataset": self.dataset,
            "model": self.model,
            "dimension": self.dimension,
            "n_observations": self.n_observations,
            "master_seed": self.master_seed,
            "n_repeats": self.n_repeats,
            "workers": self.workers,
            "settings": self.settings,
            "algorithms": [
                {
                    "summary": s.to_dict(canonical),
                    "runs": [c.to_dict(canonical) for c in self.cells_for(s.algorithm)],
                }
                for s in summaries
            ],
            "best": best,
            "n_failed": self.n_failed,
        }
        if canonical:
            data.pop("workers")
        return data
