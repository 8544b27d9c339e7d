"""
环境变量工具

从可选的 .env 文件加载环境变量，并替换配置值中的 ${VAR} / ${VAR:-默认值} 引用，
例如 "${DATA_DIR}/sp500.csv"。
"""

import logging
import os
import re
from pathlib import Path
from typing import Any, Optional

from dotenv import find_dotenv, load_dotenv

# 设置日志记录器
logger = logging.getLogger(__name__)

# ${NAME} 或 ${NAME:-default}
ENV_REFERENCE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


class EnvLoader:
    """环境变量加载器"""

    @staticmethod
    def load_dotenv(env_file: Optional[str] = None) -> bool:
        """
        加载 .env 文件（已存在的环境变量不被覆盖）

        Args:
            env_file: 文件路径；None 时从当前目录向上查找，再尝试 ~/.antithetic_hmc.env

        Returns:
            是否加载了文件
        """
        if env_file is None:
            env_file = find_dotenv(usecwd=True)
            if not env_file:
                home_env = Path.home() / ".antithetic_hmc.env"
                env_file = str(home_env) if home_env.is_file() else None

        if not env_file or not os.path.isfile(env_file):
            logger.debug("未找到.env文件")
            return False

        try:
            load_dotenv(env_file, override=False)
            logger.info(f"从 {env_file} 加载了环境变量")
            return True
        except Exception as e:
            logger.error(f"加载环境变量文件 {env_file} 失败: {e}")
            return False

    @staticmethod
    def get_env(key: str, default: str = "") -> str:
        return os.environ.get(key, default)

    @staticmethod
    def substitute(text: str) -> str:
        """
        替换字符串中的全部环境变量引用

        未设置且没有默认值的变量替换为空字符串并记录警告。
        """
        def replace(match: "re.Match[str]") -> str:
            name, default = match.group(1), match.group(2)
            value = os.environ.get(name)
            if value:
                return value
            if default is not None:
                return default
            logger.warning(f"环境变量 {name} 未设置或为空")
            return ""

        return ENV_REFERENCE.sub(replace, text)

    @staticmethod
    def parse_env_vars(config: Any) -> Any:
        """
        递归替换配置中的环境变量引用

        Args:
            config: 配置值（字典、列表、字符串或其他标量）

        Returns:
            替换后的新对象，输入不被修改
        """
        if isinstance(config, dict):
            return {key: EnvLoader.parse_env_vars(value) for key, value in config.items()}
        if isinstance(config, list):
            return [EnvLoader.parse_env_vars(item) for item in config]
        if isinstance(config, str) and "${" in config:
            return EnvLoader.substitute(config)
        return config
