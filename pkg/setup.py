#!/usr/bin/env python

import codecs
import os.path
from pathlib import Path
from setuptools import setup

# read the contents of your README file
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()


def read(rel_path):
    here = os.path.abspath(os.path.dirname(__file__))
    with codecs.open(os.path.join(here, rel_path), 'r') as fp:
        return fp.read()


def get_version(rel_path):
    for line in read(rel_path).splitlines():
        if line.startswith('__version__'):
            delim = '"' if '"' in line else "'"
            return line.split(delim)[1]
    else:
        raise RuntimeError("Unable to find version string.")


# Read the requirements from requirements.txt
with open("requirements.txt", "rt") as handle:
    requirements = [
        line.rstrip("\n")
        for line in handle
        if len(line.strip()) > 0
    ]

setup(
    name="constructive_nn",
    version=get_version("constructive_nn/__init__.py"),
    description="Constructive single-hidden-layer networks grown one hidden unit at a time",
    long_description_content_type='text/markdown',
    long_description=long_description,
    packages=[
        "constructive_nn",
        "constructive_nn.data",
        "constructive_nn.helpers",
        "constructive_nn.runner"
    ],
    package_data={"constructive_nn.data": ["schemas/*.schema"]},
    license="MIT",
    entry_points={
        "console_scripts": [
            "constructive-nn=constructive_nn.runner.cli:main"
        ]
    },
    install_requires=requirements,
    extras_require={"test": ["pytest"]},
    include_package_data=True
)
