"""
配置服务模块

此模块提供了实验配置的管理功能，负责加载和合并实验配置项。
配置文件支持 JSON 与 YAML 两种格式，用户配置深度合并到内置默认配置之上，
字符串值 "${VAR}" 会被替换为环境变量。
每个配置段的 "_comment" 字段说明其默认值的来源，不参与计算。
"""

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..core.base_service import BaseService
from ..core.exceptions import ConfigError
from ...utils.env_loader import EnvLoader

# 设置日志记录器
logger = logging.getLogger(__name__)

YAML_SUFFIXES = (".yaml", ".yml")


def deep_update(source: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    """把 updates 递归合并进 source（原地修改并返回 source）"""
    for key, value in updates.items():
        if key in source and isinstance(source[key], dict) and isinstance(value, dict):
            deep_update(source[key], value)
        else:
            source[key] = value
    return source


class ConfigService(BaseService):
    """
    配置服务类

    负责加载、合并和查询实验配置。与界面程序不同，实验配置文件只读，
    命令行参数通过 set() 覆盖到内存中的有效配置。

    Attributes:
        config_file: 配置文件路径（可为 None，仅使用默认配置）
        default_config: 默认配置
        user_config: 用户配置
        config: 合并后的有效配置
    """

    def __init__(self, config_file: Optional[str] = None, default_config: Optional[Dict[str, Any]] = None):
        """
        初始化配置服务

        Args:
            config_file: 配置文件路径，None 时只使用默认配置
            default_config: 默认配置，None 时使用内置默认配置
        """
        super().__init__("config_service")
        self.config_file = Path(config_file) if config_file else None
        self.default_config = default_config or self._get_default_config()
        self.user_config: Dict[str, Any] = {}
        self.config = copy.deepcopy(self.default_config)

    def initialize(self) -> bool:
        """
        初始化配置服务

        加载可选的 .env 文件与用户配置文件并合并。

        Returns:
            初始化是否成功
        """
        try:
            EnvLoader.load_dotenv()
            if self.config_file is not None:
                self.user_config = self.load_file(self.config_file)
            self._merge_config()
            logger.info(f"配置服务初始化成功，配置文件: {self.config_file or '（内置默认）'}")
            self.is_initialized = True
            return True
        except ConfigError as e:
            logger.error(f"配置服务初始化失败: {e}")
            return False

    @staticmethod
    def load_file(path: Path) -> Dict[str, Any]:
        """
        读取 JSON 或 YAML 配置文件

        Args:
            path: 配置文件路径

        Returns:
            解析并替换环境变量后的配置字典

        Raises:
            ConfigError: 文件不存在或格式错误
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"配置文件不存在: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                if path.suffix.lower() in YAML_SUFFIXES:
                    data = yaml.safe_load(f) or {}
                else:
                    data = json.load(f)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"配置文件格式错误: {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"配置文件顶层必须是映射: {path}")
        logger.debug(f"成功加载配置文件: {path}")
        return EnvLoader.parse_env_vars(data)

    def _get_default_config(self) -> Dict[str, Any]:
        """
        获取默认配置

        Returns:
            默认配置项
        """
        return {
            "experiment": {
                "_comment": "每个算法重复 10 次，每次使用不同的随机初始位置",
                "name": "experiment",
                "algorithms": ["hmc", "a-hmc", "qihmc", "a-qihmc", "rmhmc", "a-rmhmc"],
                "n_repeats": 10,
                "master_seed": 0,
                "workers": 1,
                "output": "results/report.json",
                "format": "json",
                "canonical": False,
            },
            "dataset": {
                "_comment": "kind 为 returns（价格 CSV）、classification（分类 CSV）或 synthetic（内存生成）",
                "kind": "synthetic",
                "name": None,
                "path": None,
                "column": None,
                "date_column": None,
                "label_column": -1,
                "label_map": None,
                "ddof": 0,
                "tau": 1.0,
                "synthetic": {
                    "model": "jump_diffusion",
                    "n": 1000,
                    "seed": 0,
                    "params": {},
                },
            },
            "model": {
                "_comment": "先验 N(0, 1) 作用在无约束参数上；漂移默认 ito 约定 (μ − σ²/2)τ",
                "kind": "jump_diffusion",
                "prior_scale": 1.0,
                "drift_convention": "ito",
                "n_max": None,
                "softabs_alpha": 1e6,
            },
            "sampler": {
                "_comment": "对偶平均目标接受率 0.8，γ=0.05, t0=10, κ=0.75；RMHMC 不动点容差 1e-6、最多 10 次迭代",
                "step_size": 0.05,
                "adapt_target": 0.8,
                "adapt_during_burnin": True,
                "init_scale": 0.1,
                "divergence_threshold": 1000.0,
                "dual_averaging": {"gamma": 0.05, "t0": 10.0, "kappa": 0.75},
                "fixed_point": {"tolerance": 1e-6, "max_iterations": 10},
                "qihmc": {"location": 0.0, "scale": 1.0},
                "trajectory_length": {
                    "_comment": "HMC/QIHMC 轨迹 200 步，RMHMC 6 步",
                    "hmc": 200,
                    "qihmc": 200,
                    "rmhmc": 6,
                },
                "overrides": {},
            },
            "protocol": {
                "_comment": "跳跃扩散 100 次预烧后采 500 个样本；逻辑回归 500 次预烧后采 2000 个样本",
                "jump_diffusion": {"n_samples": 500, "n_burnin": 100},
                "blr": {"n_samples": 2000, "n_burnin": 500},
            },
        }

    def _merge_config(self) -> None:
        """
        合并默认配置和用户配置

        用户配置会覆盖默认配置中的相应项
        """
        self.config = deep_update(copy.deepcopy(self.default_config), copy.deepcopy(self.user_config))

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置项的值

        支持使用点号分隔的路径访问嵌套配置，如 "sampler.step_size"

        Args:
            key: 配置项键名
            default: 配置项不存在时的默认值

        Returns:
            配置项的值
        """
        if not key:
            return default
        current: Any = self.config
        for part in key.split("."):
            if isinstance(current, dict) and part in current:
                current = current[part]
            else:
                return default
        return current

    def set(self, key: str, value: Any) -> bool:
        """
        设置配置项的值（只修改内存中的配置）

        Args:
            key: 点号分隔的配置项路径
            value: 新值

        Returns:
            操作是否成功
        """
        if not key:
            return False
        parts = key.split(".")
        user_current = self.user_config
        config_current = self.config
        for part in parts[:-1]:
            user_current = user_current.setdefault(part, {})
            config_current = config_current.setdefault(part, {})
            if not isinstance(config_current, dict):
                logger.error(f"设置配置失败: {key} 的上级不是映射")
                return False
        user_current[parts[-1]] = value
        config_current[parts[-1]] = value
        logger.debug(f"配置项已覆盖: {key} = {value!r}")
        return True

    def get_all(self) -> Dict[str, Any]:
        """获取完整的有效配置副本"""
        return copy.deepcopy(self.config)
