#!/usr/bin/env python3

from setuptools import find_packages, setup

setup(
    name='qvista',
    version='1.0.0',
    python_requires='>=3.12',
    packages=['qvista', *map(lambda it: f'qvista.{it}', find_packages('qvista'))],
    install_requires=[
        'numpy>=1.26',
        'scipy>=1.12',
        'pydantic>=2.6',
        'PySide6_Essentials>=6.6',
    ],
    entry_points={
        'console_scripts': ['qvista=qvista.cli:main'],
    },
)
