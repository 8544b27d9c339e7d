"""
反向耦合 HMC 实验工具入口

此模块是命令行程序的主入口点，负责初始化日志系统并分派子命令。
"""

import logging
import logging.handlers
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from .cli import main as cli_main
from .utils.env_loader import EnvLoader


def setup_logging(log_dir: Optional[str] = None, console_level: Optional[str] = None) -> Path:
    """
    设置日志系统

    创建日志目录并配置日志记录器，包括控制台和文件输出。
    日志目录与控制台级别可由环境变量 ANTITHETIC_HMC_LOG_DIR、ANTITHETIC_HMC_LOG_LEVEL 覆盖。

    Args:
        log_dir: 日志目录，默认 ./logs
        console_level: 控制台日志级别，默认 INFO

    Returns:
        日志文件路径
    """
    EnvLoader.load_dotenv()
    log_dir = Path(log_dir or EnvLoader.get_env("ANTITHETIC_HMC_LOG_DIR") or "logs")
    os.makedirs(log_dir, exist_ok=True)
    console_level = (console_level or EnvLoader.get_env("ANTITHETIC_HMC_LOG_LEVEL") or "INFO").upper()

    # 创建日志文件名，包含日期
    log_file = log_dir / f"antithetic_hmc_{datetime.now().strftime('%Y%m%d')}.log"

    # 配置根日志记录器
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # 创建控制台处理器
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, console_level, logging.INFO))
    console_handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))

    # 创建文件处理器
    file_handler = logging.handlers.RotatingFileHandler(
        log_file, maxBytes=5*1024*1024, backupCount=3, encoding='utf-8'
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))

    root_logger.addHandler(console_handler)
    root_logger.addHandler(file_handler)

    logging.debug("日志系统初始化完成")
    return log_file


def main(argv: Optional[List[str]] = None) -> int:
    """
    应用程序主入口函数

    Returns:
        退出码
    """
    setup_logging()
    try:
        return cli_main(argv)
    except KeyboardInterrupt:
        logging.warning("用户中断")
        return 130
    except Exception as e:
        logging.critical(f"程序发生未处理异常: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
