"""
gridramsey documentation build configuration file.

This file is execfile()d with the current directory set to its containing dir.
"""

import os
import sys

import packaging.version

sys.path.insert(0, os.path.abspath('..'))

import gridramsey  # noqa: E402

if sys.version_info < (3, 9):
    raise RuntimeError("Python version >= 3.9 required to build docs.")

# Add any Sphinx extension module names here, as strings. They can be extensions
# coming with Sphinx (named 'sphinx.ext.*') or your custom ones.
extensions = ['sphinx.ext.autodoc', 'sphinx.ext.doctest',
              'sphinx.ext.intersphinx', 'sphinx_rtd_theme']

# The name of a reST role (builtin or Sphinx extension) to use as the
# default role, that is, for text marked up `like this`.
default_role = 'py:obj'

# This value selects if automatically documented members are sorted
# alphabetical (value 'alphabetical'), by member type (value 'groupwise')
# or by source order (value 'bysource').
autodoc_member_order = 'bysource'

# The default options for autodoc directives. They are applied to all
# autodoc directives automatically.
autodoc_default_options = {'members': True}

# Contains mapping the locations and names of other projects that
# should be linked to in this documentation.
intersphinx_mapping = {'python': ('https://docs.python.org/3/', None),
                       'gmpy2': ('https://gmpy2.readthedocs.io/en/latest/',
                                 None)}

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# General information about the project.
project = gridramsey.__package__
copyright = '2024, the gridramsey developers'

gridramsey_version = packaging.version.parse(gridramsey.__version__)

# The short X.Y version.
version = f"{gridramsey_version.major}.{gridramsey_version.minor}"
# The full version, including alpha/beta/rc tags.
release = gridramsey.__version__

# The theme to use for HTML and HTML Help pages.
html_theme = 'sphinx_rtd_theme'

# One entry per manual page. List of tuples
# (source start file, name, description, authors, manual section).
man_pages = [('cli', 'gridramsey', 'gridramsey command line',
              ['the gridramsey developers'], 1)]

# Python code that is treated like it were put in a testcleanup directive
# for *every* file that is tested, and for every group.
doctest_global_cleanup = """
import gridramsey

gridramsey.set_context(gridramsey.context())
"""
