#!/usr/bin/python
# -*- coding: utf-8 -*-

"""pyBSQ module."""

from importlib import metadata

from . import (accumulate, baselines, bench, data, distance, meb, selection,
               tools, trainer)

__all__ = [
    'accumulate',
    'baselines',
    'bench',
    'data',
    'distance',
    'meb',
    'selection',
    'tools',
    'trainer',
]

__license__ = 'MIT'
__title__ = 'pyBSQ'
try:
    __version__ = metadata.version('pyBSQ')
except metadata.PackageNotFoundError:
    __version__ = '0.1.0'
