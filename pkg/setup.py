#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

with open('README.rst') as fp:
    readme = fp.read()

with open('HISTORY.rst') as fp:
    history = fp.read()

setup(
    name='pyBSQ',
    version='0.1.0',
    description='k-Means and bounding sphere quantization by accumulated '
    'gradient descent.',
    long_description=readme + '\n\n' + history,
    license='MIT',
    packages=find_packages(exclude=['tests']),
    entry_points={
        'console_scripts': [
            'pybsq = pybsq.runner:main',
        ],
    },
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.17',
        'numba',
        'pyexcel',
        'pyexcel-io',
        'setuptools',
        'scipy',
    ],
    extras_require={
        'xls': ['pyexcel-xls'],
        'xlsx': ['pyexcel-xlsx'],
        'all': ['pyexcel-xls', 'pyexcel-xlsx'],
    },
    zip_safe=False,
    test_suite='tests',
    classifiers=[
        'License :: OSI Approved :: MIT License',
        'Environment :: Console',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
        'Intended Audience :: Science/Research',
    ], )
