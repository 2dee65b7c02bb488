"""
Setup file for mamppi package.
"""
from setuptools import setup, find_packages

setup(
    name="mamppi",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "pydantic>=2.5.2",
        "pydantic-settings>=2.1.0",
        "PyYAML>=6.0.1",
        "python-dotenv>=1.0.0",
        "prometheus-client>=0.19.0",
        "opentelemetry-api>=1.21.0",
        "opentelemetry-sdk>=1.21.0",
    ],
    extras_require={
        "dev": [
            "black>=23.10.0",
            "isort>=5.12.0",
            "mypy>=1.6.1",
            "pylint>=3.0.2",
            "pytest>=7.4.3",
            "pytest-cov>=4.1.0",
            "pytest-mock>=3.12.0",
            "pytest-xdist>=3.6.1",
        ]
    },
    entry_points={
        "console_scripts": [
            "mamppi-bench=src.bench.cli:main",
        ],
    },
    python_requires=">=3.10",
)
