"""
单元测试包

按模块验证哈密顿量原语、目标模型、积分器、采样器、诊断、数据与配置。
"""
