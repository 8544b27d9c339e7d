"""
数据集目录

记录基准数据集的预期形状，加载结果与目录不符时给出警告。
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

# 设置日志记录器
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetInfo:
    """
    数据集信息

    Attributes:
        name: 数据集键名
        title: 显示名称
        kind: "returns" 或 "classification"
        n_observations: 观测数 N（收益率序列为收益率个数）
        n_features: 特征数
        model: "jump_diffusion" 或 "blr"
        dimension: 模型参数维度 D
    """
    name: str
    title: str
    kind: str
    n_observations: int
    n_features: int
    model: str
    dimension: int


DATASET_CATALOG: Dict[str, DatasetInfo] = {
    info.name: info for info in (
        DatasetInfo("sp500", "S&P 500 Index", "returns", 1007, 1, "jump_diffusion", 5),
        DatasetInfo("usdzar", "USDZAR", "returns", 1425, 1, "jump_diffusion", 5),
        DatasetInfo("australian", "Australian credit", "classification", 690, 14, "blr", 15),
        DatasetInfo("fraud", "South African fraud", "classification", 1560, 14, "blr", 15),
        DatasetInfo("german", "German credit", "classification", 1000, 24, "blr", 25),
    )
}


def get_dataset_info(name: str) -> Optional[DatasetInfo]:
    """按名称（不区分大小写）查找目录项"""
    return DATASET_CATALOG.get(name.lower())


def check_against_catalog(name: str, n_observations: int, dimension: Optional[int] = None) -> bool:
    """
    检查加载结果是否与目录一致

    Args:
        name: 数据集名称
        n_observations: 实际观测数
        dimension: 实际模型维度

    Returns:
        一致或不在目录中时为 True
    """
    info = get_dataset_info(name)
    if info is None:
        return True
    consistent = info.n_observations == n_observations and (dimension is None or info.dimension == dimension)
    if not consistent:
        logger.warning(f"数据集 {info.title} 的形状与目录不符: "
                       f"N={n_observations}（预期 {info.n_observations}）, D={dimension}（预期 {info.dimension}）")
    return consistent
