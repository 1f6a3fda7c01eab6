# -*- coding: utf-8 -*-
#
# gaugecool documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir. All configuration values have a default; only the ones that differ
# are set here.

import datetime
import os
import sys
import typing

# HACK: these imports are a workaround for
# https://github.com/sphinx-doc/sphinx/issues/9243
import sphinx.builders.html
import sphinx.builders.latex
import sphinx.builders.texinfo
import sphinx.builders.text
import sphinx.ext.autodoc  # noqa

# Lets autodoc pick up the typed stubs of the BoundClass attributes of
# Environment. 'SPHINX' distinguishes documentation builds from real type
# checking so that circular imports are still avoided.
typing.TYPE_CHECKING = 'SPHINX'

sys.path.insert(0, os.path.abspath('..'))

import gaugecool  # noqa

# -- General configuration ----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'contents'

project = 'gaugecool'
authors = ['The gaugecool developers']
copyright = '%s, %s' % (datetime.datetime.now().year, ', '.join(authors))

# The short X.Y version and the full release.
version = '.'.join(gaugecool.__version__.split('.')[0:2])
release = gaugecool.__version__

exclude_patterns = ['_build']
pygments_style = 'friendly'

# -- Options for HTML output --------------------------------------------------

try:
    import sphinx_rtd_theme
    html_theme = 'sphinx_rtd_theme'
    html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
except ImportError:
    html_theme = 'default'

htmlhelp_basename = 'gaugecooldoc'

# -- Options for LaTeX output -------------------------------------------------

latex_documents = [
    ('contents', 'gaugecool.tex', 'gaugecool Documentation',
     ', '.join(authors), 'manual'),
]

# -- Options for manual page output -------------------------------------------

man_pages = [
    ('contents', 'gaugecool', 'gaugecool Documentation', authors, 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}

autodoc_member_order = 'bysource'
