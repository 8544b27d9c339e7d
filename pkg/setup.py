#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
from setuptools import setup, find_packages

# 读取requirements.txt文件
def read_requirements():
    with open('requirements.txt') as f:
        return [line.strip() for line in f if line.strip() and not line.startswith('#')]

# 读取README文件
def read_readme():
    with open('README.md', encoding='utf-8') as f:
        return f.read()

setup(
    name="antithetic_hmc",
    version="1.0.0",
    description="反向耦合哈密顿蒙特卡洛采样库与实验命令行工具（HMC、QIHMC、RMHMC 及其反向变体）",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "antithetic-hmc=antithetic_hmc.__main__:main",
        ],
    },
    python_requires=">=3.9",
    install_requires=read_requirements(),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="mcmc, hamiltonian monte carlo, antithetic, riemannian manifold, jump diffusion",
)
