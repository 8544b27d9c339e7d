"""
命令行模块

子命令：
- run: 按配置文件运行实验并写出报告
- synth: 生成合成数据集文件
- ess: 对已保存的样本矩阵计算 mESS（可选配对链的反向 mESS）

退出码：0 成功，1 其他错误，2 配置错误，3 数据错误，4 报告中存在失败的单元。
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from .services.core.exceptions import ConfigError, DataError, DiagnosticsError, ReportError
from .services.core.service_factory import ServiceFactory
from .services.business.data.loaders import load_sample_matrix
from .services.business.data.synthetic import (
    DEFAULT_BLR_PARAMS,
    DEFAULT_JUMP_DIFFUSION_PARAMS,
    SYNTHETIC_KINDS,
    SyntheticSpec,
    generate_synthetic,
    write_synthetic,
)
from .services.business.diagnostics.ess import (
    antithetic_mess,
    is_degenerate_rho,
    max_cross_correlation,
    multivariate_ess,
)
from .services.business.experiment.experiment_config import REPORT_FORMATS, build_experiment_config
from .services.business.models.jump_diffusion import DRIFT_CONVENTIONS

# 设置日志记录器
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_PARTIAL = 4


def build_parser() -> argparse.ArgumentParser:
    """创建命令行解析器"""
    parser = argparse.ArgumentParser(prog="antithetic-hmc", description="反向耦合 HMC 实验工具")
    parser.add_argument("--quiet", action="store_true", help="不显示进度条")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="运行实验")
    run.add_argument("config", nargs="?", default=None, help="实验配置文件（JSON 或 YAML），省略时使用内置默认配置")
    run.add_argument("--seed", type=int, help="主种子")
    run.add_argument("--workers", type=int, help="并行进程数")
    run.add_argument("--out", help="报告输出路径")
    run.add_argument("--format", choices=REPORT_FORMATS, help="报告格式")
    run.add_argument("--drift-convention", choices=DRIFT_CONVENTIONS, help="跳跃扩散漂移约定")
    run.add_argument("--repeats", type=int, help="每个算法的重复次数")
    run.add_argument("--canonical", action="store_true", help="省略计时字段，便于逐字节比较")

    synth = subparsers.add_parser("synth", help="生成合成数据")
    synth.add_argument("model", choices=SYNTHETIC_KINDS, help="模型类型")
    synth.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="真实参数，例如 lambda=0.1；weights 用逗号分隔")
    synth.add_argument("--n", type=int, default=1000, help="观测数")
    synth.add_argument("--seed", type=int, default=0, help="随机种子")
    synth.add_argument("--tau", type=float, default=1.0, help="观测间隔")
    synth.add_argument("--drift-convention", choices=DRIFT_CONVENTIONS, default="ito", help="漂移约定")
    synth.add_argument("--out", required=True, help="输出 CSV 路径")

    ess = subparsers.add_parser("ess", help="计算样本矩阵的 mESS")
    ess.add_argument("samples", help="样本文件（.csv 或 .npy，每行一个样本）")
    ess.add_argument("--paired", help="反向链样本文件，给出时同时输出 ρ 与反向 mESS")
    return parser


def parse_params(items: List[str], model: str) -> Dict[str, Any]:
    """
    解析 --param KEY=VALUE 列表

    Raises:
        ConfigError: 格式错误或未知参数
    """
    allowed = DEFAULT_JUMP_DIFFUSION_PARAMS if model == "jump_diffusion" else DEFAULT_BLR_PARAMS
    params: Dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"参数格式应为 KEY=VALUE: {item}")
        if key not in allowed:
            raise ConfigError(f"模型 {model} 没有参数 {key}，可选 {list(allowed)}")
        try:
            if key == "weights":
                params[key] = [float(v) for v in value.split(",") if v.strip()]
            elif key == "n_features":
                params[key] = int(value)
            else:
                params[key] = float(value)
        except ValueError:
            raise ConfigError(f"参数 {key} 的值无效: {value}")
    return params


def cmd_run(args: argparse.Namespace) -> int:
    factory = ServiceFactory(args.config, show_progress=not args.quiet)
    config_service = factory.get_service("config_service")
    if config_service is None:
        return EXIT_CONFIG
    overrides = {
        "experiment.master_seed": args.seed,
        "experiment.workers": args.workers,
        "experiment.output": args.out,
        "experiment.format": args.format,
        "experiment.n_repeats": args.repeats,
        "model.drift_convention": args.drift_convention,
        "experiment.canonical": True if args.canonical else None,
    }
    for key, value in overrides.items():
        if value is not None:
            config_service.set(key, value)

    try:
        config = build_experiment_config(config_service.get_all())
        report = factory.get_service("experiment_service").run_experiment(config)
        factory.get_service("report_service").emit_report(report, config.output, config.format, config.canonical)
    except ConfigError as e:
        logger.error(f"配置错误: {e}")
        return EXIT_CONFIG
    except DataError as e:
        logger.error(f"数据错误: {e}")
        return EXIT_DATA
    except ReportError as e:
        logger.error(str(e))
        return EXIT_FAILURE
    finally:
        factory.shutdown_all_services()

    for summary in report.summaries():
        logger.info(f"{summary.algorithm}: mESS={summary.m_ess}, t={summary.seconds}, "
                    f"mESS/t={summary.m_ess_per_s}, 失败 {summary.n_failed}")
    return EXIT_PARTIAL if report.n_failed else EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        spec = SyntheticSpec(model=args.model, n=args.n, params=parse_params(args.param, args.model),
                             seed=args.seed, tau=args.tau, drift_convention=args.drift_convention)
        path = write_synthetic(generate_synthetic(spec), args.out)
    except ConfigError as e:
        logger.error(f"配置错误: {e}")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"无法写出合成数据: {e}")
        return EXIT_FAILURE
    print(path)
    return EXIT_OK


def cmd_ess(args: argparse.Namespace) -> int:
    try:
        chain_x = load_sample_matrix(args.samples)
        report = multivariate_ess(chain_x)
        result: Dict[str, Any] = {
            "n": report.n,
            "d": report.d,
            "m_ess": report.m_ess,
            "batch_size": report.batch_size,
        }
        if args.paired:
            chain_y = load_sample_matrix(args.paired)
            rho = max_cross_correlation(chain_x, chain_y)
            m_ess = antithetic_mess(report.m_ess, rho)
            result.update({
                "rho": rho,
                "m_ess_antithetic": m_ess if m_ess != float("inf") else None,
                "degenerate_rho": is_degenerate_rho(rho),
            })
    except (DataError, DiagnosticsError) as e:
        logger.error(f"数据错误: {e}")
        return EXIT_DATA
    print(json.dumps(result, indent=2))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "synth": cmd_synth,
    "ess": cmd_ess,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    命令行入口

    Args:
        argv: 参数列表，None 时读取 sys.argv

    Returns:
        退出码
    """
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
