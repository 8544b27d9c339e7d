"""
工具包：随机流与环境变量加载
"""

from .rng import RandomStreams, child_seed_sequence, streams_for_cell, initial_positions
from .env_loader import EnvLoader

__all__ = [
    'RandomStreams',
    'child_seed_sequence',
    'streams_for_cell',
    'initial_positions',
    'EnvLoader',
]
