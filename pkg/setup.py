#!/usr/bin/env python3
"""
Setup script for the Heavy-Tail Framework
"""

from setuptools import setup
import os

# Read the contents of README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="heavy-tail-framework",
    version="1.0.0",
    author="Wes Jackson",
    author_email="wjackson@redhat.com",
    description="Heavy-tailed distributions from monotone quantile transforms",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/redhat-ai-americas/heavy-tail-framework",
    packages=[
        "heavy_tail_framework",
        "heavy_tail_framework.core",
        "heavy_tail_framework.families",
        "heavy_tail_framework.utils",
    ],
    package_dir={"heavy_tail_framework": "src"},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.9",
        "pandas>=2.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "black>=21.0",
            "flake8>=3.8",
            "mypy>=0.800",
        ],
    },
    entry_points={
        "console_scripts": [
            "heavy-tail=heavy_tail_framework.cli:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
