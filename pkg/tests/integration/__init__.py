"""
集成测试包

验证实验服务、报告输出与命令行的端到端流程。
"""
