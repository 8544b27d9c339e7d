"""
报告输出服务模块

把 RunReport 写为 JSON（完整嵌套结构）或 CSV（每个算法一行的汇总表），
同时写出每次重复一行的长表 <out>.runs.csv，供外部工具绘制分布图。
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..core.base_service import BaseService
from ..core.exceptions import ReportError
from ..business.diagnostics.ess import round_mess, round_normalized
from ..business.experiment.report import RunReport

# 设置日志记录器
logger = logging.getLogger(__name__)

REPORT_FORMATS = ("json", "csv")
SUMMARY_COLUMNS = ["dataset", "algorithm", "mESS", "t_seconds", "mESS_per_s", "acceptance", "rho"]
RUNS_COLUMNS = ["dataset", "algorithm", "repeat", "mESS", "t_seconds", "mESS_per_s"]
TIMING_COLUMNS = ("t_seconds", "mESS_per_s")


def _round(value: Optional[float], digits: int) -> Optional[float]:
    return None if value is None else round(value, digits)


def summary_frame(report: RunReport, canonical: bool = False) -> pd.DataFrame:
    """
    汇总表：每个算法一行，数值按报告规则取整

    Args:
        report: 实验报告
        canonical: 省略计时列

    Returns:
        DataFrame
    """
    rows: List[Dict[str, Any]] = []
    for summary in report.summaries():
        rows.append({
            "dataset": report.dataset,
            "algorithm": summary.algorithm,
            "mESS": round_mess(summary.m_ess),
            "t_seconds": _round(summary.seconds, 3),
            "mESS_per_s": round_normalized(summary.m_ess_per_s),
            "acceptance": _round(summary.acceptance, 4),
            "rho": _round(summary.rho, 4),
        })
    frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    if canonical:
        frame = frame.drop(columns=list(TIMING_COLUMNS))
    return frame


def runs_frame(report: RunReport, canonical: bool = False) -> pd.DataFrame:
    """长表：每个 (算法, 重复) 一行"""
    rows = [
        {
            "dataset": report.dataset,
            "algorithm": cell.algorithm,
            "repeat": cell.repeat,
            "mESS": cell.m_ess,
            "t_seconds": cell.seconds,
            "mESS_per_s": cell.m_ess_per_s,
        }
        for algorithm in report.algorithms
        for cell in report.cells_for(algorithm)
    ]
    frame = pd.DataFrame(rows, columns=RUNS_COLUMNS)
    if canonical:
        frame = frame.drop(columns=list(TIMING_COLUMNS))
    return frame


def runs_path(path: Union[str, Path]) -> Path:
    """长表路径：report.json → report.runs.csv"""
    path = Path(path)
    return path.with_suffix(".runs.csv")


class ReportService(BaseService):
    """
    报告输出服务

    负责报告文件的序列化与写出。
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        super().__init__("report_service", config)

    def initialize(self) -> bool:
        self.is_initialized = True
        return True

    def render_json(self, report: RunReport, canonical: bool = False) -> str:
        """
        序列化为 JSON 文本

        浮点数按完整精度写出，非有限值已在报告结构中记为 null。
        """
        try:
            return json.dumps(report.to_dict(canonical), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
        except ValueError as e:
            raise ReportError(f"报告包含无法序列化的数值: {e}") from e

    def emit_report(self, report: RunReport, path: Union[str, Path], fmt: str = "json",
                    canonical: bool = False) -> Path:
        """
        写出报告

        Args:
            report: 实验报告
            path: 输出路径
            fmt: "json" 或 "csv"
            canonical: 省略计时字段与进程数

        Returns:
            写出的报告路径

        Raises:
            ReportError: 格式未知或路径不可写
        """
        if fmt not in REPORT_FORMATS:
            raise ReportError(f"未知报告格式: {fmt}，可选 {REPORT_FORMATS}")
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            if fmt == "json":
                with open(path, "w", encoding="utf-8", newline="\n") as f:
                    f.write(self.render_json(report, canonical))
            else:
                summary_frame(report, canonical).to_csv(path, index=False, lineterminator="\n")
            runs_frame(report, canonical).to_csv(runs_path(path), index=False, lineterminator="\n")
        except OSError as e:
            logger.error(f"写出报告失败: {path}: {e}")
            raise ReportError(f"无法写出报告: {path}: {e}") from e
        logger.info(f"报告已写入: {path}")
        return path
