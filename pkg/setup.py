#!/usr/bin/env python
# -*- coding: utf-8 -*-
from __future__ import print_function
import os

from setuptools import find_packages, setup

from dper_lab import __author__, __email__, __version__


def read(fname):
    with open(os.path.join(os.path.dirname(__file__), fname), "rb") as fid:
        return fid.read().decode("utf-8")


authors = read("AUTHORS.rst")
history = read("HISTORY.rst").replace(".. :changelog:", "")
licence = read("LICENSE.rst")
readme = read("README.rst")

req = read("requirements.txt").splitlines()
dev_req = read("requirements-dev.txt").splitlines()[2:]

requirements = req + ["setuptools"]
test_requirements = req + dev_req

setup(
    name="dper-lab",
    version=__version__,
    author=__author__,
    author_email=__email__,
    description=(
        "TD3 with uniform, prioritized and decoupled prioritized experience replay "
        "on desk-scale continuous control tasks."
    ),
    long_description="\n\n".join([readme, history, authors, licence]),
    license="MIT",
    packages=find_packages(exclude=["tests*"]),
    install_requires=requirements,
    python_requires=">=3.6",
    entry_points={"console_scripts": ["dper-lab = dper_lab.harness.cli:main"]},
    test_suite="tests",
    tests_require=test_requirements,
    keywords=" ".join(
        ["reinforcement-learning", "td3", "prioritized-experience-replay"]
    ),
    classifiers=[
        "Intended Audience :: Science/Research",
        "Natural Language :: English",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.6",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Development Status :: 2 - Pre-Alpha",
    ],
)
