"""
数据加载模块

从 CSV 文件读取价格序列与分类数据，并完成收益率转换与特征标准化。
CSV 约定：逗号分隔、UTF-8 编码；首行所有单元格均非数值时视为表头。
错误信息中的行号为文件中的行号（从 1 开始，含表头）。
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ...core.exceptions import DataError
from .types import ClassificationData, PriceSeries, ReturnSeries

# 设置日志记录器
logger = logging.getLogger(__name__)

ColumnSpec = Optional[Union[str, int]]

PRICE_COLUMN_NAMES = ("close", "adj close", "adj_close", "price", "value")


def _is_number(cell) -> bool:
    if cell is None or (isinstance(cell, float) and math.isnan(cell)):
        return False
    try:
        float(str(cell).strip())
        return str(cell).strip() != ""
    except ValueError:
        return False


def _read_raw(path: Union[str, Path]) -> Tuple[pd.DataFrame, Optional[List[str]]]:
    """
    读取原始字符串表格并识别表头

    Returns:
        (数据表, 表头名称或 None)；数据表的索引为文件行号
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"数据文件不存在: {path}")
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False,
                            skip_blank_lines=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise DataError(f"数据文件为空: {path}") from e
    except pd.errors.ParserError as e:
        raise DataError(f"CSV 行字段数不一致: {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise DataError(f"数据文件不是 UTF-8 编码: {path}") from e

    frame.index = np.arange(1, len(frame) + 1)
    header = None
    if len(frame) and not any(_is_number(c) for c in frame.iloc[0].tolist()):
        header = [str(c).strip() for c in frame.iloc[0].tolist()]
        frame = frame.iloc[1:]
    return frame, header


def _resolve_column(column: ColumnSpec, header: Optional[List[str]], n_columns: int,
                    preferred: Tuple[str, ...] = ()) -> int:
    """把列名或下标解析为从 0 开始的列下标"""
    if column is None:
        if header is not None:
            lowered = [h.lower() for h in header]
            for name in preferred:
                if name in lowered:
                    return lowered.index(name)
        return n_columns - 1
    if isinstance(column, int) or (isinstance(column, str) and column.lstrip("-").isdigit()):
        index = int(column)
        if index < 0:
            index += n_columns
        if not 0 <= index < n_columns:
            raise DataError(f"列下标越界: {column}（共 {n_columns} 列）")
        return index
    if header is None:
        raise DataError(f"文件没有表头，无法按名称选择列: {column}")
    if column not in header:
        raise DataError(f"找不到列 '{column}'，可用列: {header}")
    return header.index(column)


def load_price_csv(path: Union[str, Path], column: ColumnSpec = None,
                   date_column: ColumnSpec = None, name: Optional[str] = None) -> PriceSeries:
    """
    读取价格序列

    Args:
        path: CSV 文件路径
        column: 价格列（名称或从 0 开始的下标），默认优先 close/price 列，否则最后一列
        date_column: 可选日期列
        name: 数据集名称，默认取文件名

    Returns:
        PriceSeries（保持文件中的顺序）

    Raises:
        DataError: 缺失、非数值或非正价格（含行号），有效行少于 2
    """
    frame, header = _read_raw(path)
    n_columns = frame.shape[1]
    price_index = _resolve_column(column, header, n_columns, PRICE_COLUMN_NAMES)
    date_index = _resolve_column(date_column, header, n_columns) if date_column is not None else None

    prices = []
    for row_number, cell in frame.iloc[:, price_index].items():
        text = "" if cell is None or (isinstance(cell, float) and math.isnan(cell)) else str(cell).strip()
        if text == "":
            raise DataError(f"第 {row_number} 行价格缺失")
        try:
            value = float(text)
        except ValueError:
            raise DataError(f"第 {row_number} 行价格不是数值: '{text}'")
        if not math.isfinite(value) or value <= 0:
            raise DataError(f"第 {row_number} 行价格必须为有限正数: {text}")
        prices.append(value)

    if len(prices) < 2:
        raise DataError(f"有效价格行少于 2 行: {path}")
    dates = None
    if date_index is not None:
        dates = [str(d).strip() for d in frame.iloc[:, date_index].tolist()]
    series_name = name or Path(path).stem
    logger.info(f"读取价格序列 {series_name}: {len(prices)} 行")
    return PriceSeries(np.array(prices), dates, series_name)


def to_log_returns(series: PriceSeries, tau: float = 1.0) -> ReturnSeries:
    """
    价格转对数收益率 rₜ = ln(Sₜ₊₁/Sₜ)

    Args:
        series: 价格序列
        tau: 观测间隔

    Returns:
        长度 N−1 的收益率序列
    """
    prices = np.asarray(series.prices, dtype=float)
    if prices.size < 2 or np.any(prices <= 0):
        raise DataError("价格序列至少 2 个且必须为正")
    return ReturnSeries(np.diff(np.log(prices)), tau=tau, name=series.name)


def _parse_label(text: str, row_number: int, label_map: Optional[Dict[str, int]]) -> float:
    if label_map is not None:
        if text not in label_map:
            raise DataError(f"第 {row_number} 行标签 '{text}' 不在映射 {sorted(label_map)} 中")
        return float(label_map[text])
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"第 {row_number} 行标签 '{text}' 不是数值，请提供标签映射")
    if value in (0.0, 1.0):
        return value
    if value == -1.0:
        return 0.0
    raise DataError(f"第 {row_number} 行标签 {text} 不属于 {{0,1}} 或 {{−1,+1}}")


def load_classification_csv(path: Union[str, Path], label_column: ColumnSpec = -1,
                            label_map: Optional[Dict[str, int]] = None,
                            name: Optional[str] = None) -> ClassificationData:
    """
    读取分类数据（未标准化）

    Args:
        path: CSV 文件路径
        label_column: 标签列（名称或下标），默认最后一列
        label_map: 标签字符串到 {0,1} 的映射；缺省时接受 {0,1} 与 {−1,+1}
        name: 数据集名称

    Returns:
        ClassificationData（X 为原始特征，无偏置列）

    Raises:
        DataError: 字段数不一致、特征非数值或标签无法映射（含行号）
    """
    frame, header = _read_raw(path)
    n_columns = frame.shape[1]
    if n_columns < 2:
        raise DataError(f"分类数据至少需要一列特征和一列标签: {path}")
    label_index = _resolve_column(label_column, header, n_columns)
    feature_indices = [i for i in range(n_columns) if i != label_index]

    X = np.empty((len(frame), len(feature_indices)))
    y = np.empty(len(frame))
    for row, (row_number, values) in enumerate(frame.iterrows()):
        cells = values.tolist()
        if any(c is None or (isinstance(c, float) and math.isnan(c)) for c in cells):
            raise DataError(f"第 {row_number} 行字段数不足（应为 {n_columns} 列）")
        y[row] = _parse_label(str(cells[label_index]).strip(), row_number, label_map)
        for j, col in enumerate(feature_indices):
            text = str(cells[col]).strip()
            try:
                X[row, j] = float(text)
            except ValueError:
                raise DataError(f"第 {row_number} 行第 {col} 列特征不是数值: '{text}'")

    if len(y) == 0:
        raise DataError(f"没有数据行: {path}")
    feature_names = [header[i] for i in feature_indices] if header else [f"x{i}" for i in feature_indices]
    data_name = name or Path(path).stem
    logger.info(f"读取分类数据 {data_name}: N={len(y)}, 特征数={len(feature_indices)}")
    return ClassificationData(X, y, feature_names=feature_names, name=data_name)


def standardize_features(X: np.ndarray, ddof: int = 0,
                         feature_names: Optional[List[str]] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    列标准化

    Args:
        X: N×F 原始特征
        ddof: 标准差自由度修正（0 为总体标准差）
        feature_names: 报错时使用的列名

    Returns:
        (标准化特征, 列均值, 列标准差)

    Raises:
        DataError: 存在常数列
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    means = X.mean(axis=0)
    scales = X.std(axis=0, ddof=ddof)
    constant = np.nonzero(~(scales > 0))[0]
    if constant.size:
        names = [feature_names[i] if feature_names else str(i) for i in constant]
        raise DataError(f"特征列为常数，无法标准化: {names}")
    return (X - means) / scales, means, scales


def standardize_and_bias(data: ClassificationData, ddof: int = 0) -> ClassificationData:
    """
    标准化特征并在最前面加入全 1 偏置列

    Args:
        data: 原始分类数据
        ddof: 0 使用除数 N，1 使用除数 N−1

    Returns:
        新的 ClassificationData（has_bias=True，保存均值与尺度以便还原）
    """
    if data.has_bias:
        raise DataError(f"数据 {data.name} 已包含偏置列")
    Z, means, scales = standardize_features(data.X, ddof, data.feature_names)
    X = np.hstack([np.ones((Z.shape[0], 1)), Z])
    return ClassificationData(X, data.y.copy(), feature_names=list(data.feature_names),
                              means=means, scales=scales, has_bias=True, name=data.name)


def load_sample_matrix(path: Union[str, Path]) -> np.ndarray:
    """
    读取已保存的样本矩阵（.npy 或 CSV，每行一个样本）

    Returns:
        N×D 浮点矩阵

    Raises:
        DataError: 文件无法读取或含非数值单元格（含行号）
    """
    path = Path(path)
    if path.suffix.lower() == ".npy":
        if not path.is_file():
            raise DataError(f"数据文件不存在: {path}")
        try:
            samples = np.load(path, allow_pickle=False)
        except ValueError as e:
            raise DataError(f"无法读取样本文件: {path}: {e}") from e
        samples = np.asarray(samples, dtype=float)
    else:
        frame, _ = _read_raw(path)
        samples = np.empty(frame.shape)
        for row, (row_number, values) in enumerate(frame.iterrows()):
            for j, cell in enumerate(values.tolist()):
                text = "" if cell is None or (isinstance(cell, float) and math.isnan(cell)) else str(cell).strip()
                try:
                    samples[row, j] = float(text)
                except ValueError:
                    raise DataError(f"第 {row_number} 行第 {j} 列不是数值: '{text}'")
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise DataError(f"样本文件必须是非空的二维矩阵: {path}，形状 {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise DataError(f"样本文件含非有限值: {path}")
    return samples
