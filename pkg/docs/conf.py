#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# pyBSQ documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import pkg_resources
import sys

# Mock http://docs.readthedocs.io/en/latest/faq.html
from unittest.mock import MagicMock


class Mock(MagicMock):
    @classmethod
    def __getattr__(cls, name):
        return MagicMock()


MOCK_MODULES = ['numba']
sys.modules.update((mod_name, Mock()) for mod_name in MOCK_MODULES)

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinxcontrib.bibtex',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'pyBSQ'
copyright = '2026, pyBSQ developers'

try:
    version = pkg_resources.get_distribution('pyBSQ').version
except pkg_resources.DistributionNotFound:
    version = '0.1.0'
release = version

# References for bibtex entries
bibtex_bibfiles = ['refs.bib']

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'pybsqdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}
latex_documents = [
    ('index', 'pybsq.tex', 'pyBSQ Documentation', 'pyBSQ developers',
     'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [('index', 'pybsq', 'pyBSQ Documentation',
              ['pyBSQ developers'], 1)]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    ('index', 'pybsq', 'pyBSQ Documentation', 'pyBSQ developers', 'pyBSQ',
     'Bounding sphere and k-Means quantization by gradient descent.',
     'Miscellaneous'),
]

numpydoc_show_class_members = False
