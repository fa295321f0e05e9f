#!/usr/bin/env python
import re
from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).resolve().parent


def read(name):
    return (HERE / name).read_text(encoding="utf-8")


def find_version(name):
    match = re.search(r"^__version__ = ['\"]([^'\"]+)['\"]", read(name), re.M)
    if not match:
        raise RuntimeError(f"No __version__ found in {name}")
    return match.group(1)


setup(
    name="django-subrings",
    version=find_version("subrings/__init__.py"),
    license="Apache 2.0",
    install_requires=[
        "Django>=3.2",
        "sympy>=1.9",
        "numpy>=1.21",
        "pydantic>=2.0",
    ],
    python_requires=">=3.9",
    description="Exact counts of subrings of Z^n of prime power index, "
    "with closed forms checked against exhaustive search.",
    long_description=read("README.rst"),
    long_description_content_type="text/x-rst",
    packages=find_packages(exclude=("docs*",)),
    test_suite="runtests",
    zip_safe=False,
    entry_points={
        "console_scripts": [
            "subrings = subrings.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Framework :: Django",
        "Framework :: Django :: 3.2",
        "Framework :: Django :: 4.2",
        "Framework :: Django :: 5.0",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
