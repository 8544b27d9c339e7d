"""
数据包：价格与分类数据的加载、预处理和合成
"""

from .types import PriceSeries, ReturnSeries, ClassificationData
from .loaders import (
    load_price_csv,
    to_log_returns,
    load_classification_csv,
    standardize_features,
    standardize_and_bias,
    load_sample_matrix,
)
from .catalog import DatasetInfo, DATASET_CATALOG, get_dataset_info, check_against_catalog
from .synthetic import (
    SyntheticSpec,
    generate_synthetic,
    write_synthetic,
    returns_to_prices,
    simulate_jump_diffusion_returns,
    simulate_logistic_data,
)

__all__ = [
    'PriceSeries',
    'ReturnSeries',
    'ClassificationData',
    'load_price_csv',
    'to_log_returns',
    'load_classification_csv',
    'standardize_features',
    'standardize_and_bias',
    'load_sample_matrix',
    'DatasetInfo',
    'DATASET_CATALOG',
    'get_dataset_info',
    'check_against_catalog',
    'SyntheticSpec',
    'generate_synthetic',
    'write_synthetic',
    'returns_to_prices',
    'simulate_jump_diffusion_returns',
    'simulate_logistic_data',
]
