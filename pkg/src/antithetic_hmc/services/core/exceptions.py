"""
异常定义模块

采样库的统一异常层次。数值内核直接抛出这些异常，服务层负责捕获、记录并转化为退出码。
"""


class AntitheticHMCError(Exception):
    """所有库内异常的基类"""


class FactorizationError(AntitheticHMCError):
    """
    矩阵分解失败（非正定或特征分解不收敛）

    Attributes:
        matrix_name: 出错矩阵的名称
    """

    def __init__(self, matrix_name: str, detail: str = ""):
        self.matrix_name = matrix_name
        message = f"矩阵 '{matrix_name}' 无效：Cholesky/特征分解失败"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class ModelEvaluationError(AntitheticHMCError):
    """目标模型求值失败"""


class DataError(AntitheticHMCError):
    """数据文件读取或校验失败"""


class ConfigError(AntitheticHMCError):
    """实验配置无效"""


class DiagnosticsError(AntitheticHMCError):
    """有效样本量等诊断量无法计算"""


class ReportError(AntitheticHMCError):
    """报告无法写出"""
