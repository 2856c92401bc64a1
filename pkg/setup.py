"""
nls_kato — radial NLS with Kato potentials

Ground states, threshold classification, time evolution and Morawetz
diagnostics for the 3D intercritical NLS with a radial potential.
"""

from setuptools import setup, find_packages
from pathlib import Path

long_description = (Path(__file__).parent / "README.md").read_text(encoding="utf-8")

setup(
    name="nls-kato",
    version="1.0.0",
    description=(
        "Numerical lab for the radial 3D intercritical NLS "
        "with Kato-class potentials."
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests*", "examples*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.21",
        "scipy>=1.7",
    ],
    extras_require={
        "msgpack": ["msgpack>=1.0"],
        "dev": [
            "pytest>=7.0",
            "pytest-timeout",
            "pytest-cov>=4.0",
            "msgpack>=1.0",
        ],
    },
    entry_points={
        "console_scripts": ["nls-kato = nls_kato.experiments.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
