#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from setuptools import setup

SCRIPT_DIR = dirname(realpath(__file__))
README_PATH = SCRIPT_DIR + '/README.md'

with open(README_PATH) as fd:
    long_description = fd.read()

setup(name = 'misbelief',
    version = '1.0.0',
    description = 'Misspecified Bayesian learning with Bayes-factor model switching: Berk-Nash equilibria, robustness verdicts and Monte Carlo simulation',
    author = '',
    author_email = '',
    long_description = long_description,
    long_description_content_type = 'text/markdown',
    entry_points = {
        'console_scripts': [
            'misbelief = misbelief.main:main'
        ]
    },
    python_requires = '>=3.8',
    requires = ['numpy(>=1.22)', 'scipy(>=1.8)'],
    install_requires = ['numpy>=1.22', 'scipy>=1.8'],
    include_package_data = True,
    packages = [
        'misbelief',
        'misbelief.engine',
        'misbelief.inputs',
        'misbelief.modules',
        'misbelief.scenarios',
        'misbelief.schema'
    ],
    package_dir = {
        'misbelief': 'src'
    }
)
