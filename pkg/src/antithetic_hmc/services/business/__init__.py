"""
业务层：数值模块与实验流程
"""
