"""
反向耦合哈密顿蒙特卡洛采样库

提供 HMC、QIHMC、RMHMC 三种采样内核及其反向耦合变体，
Merton 跳跃扩散与贝叶斯逻辑回归两种目标模型，多元有效样本量诊断，
以及复现实验流程的命令行工具。
"""

__version__ = "1.0.0"
