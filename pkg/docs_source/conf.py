# Configuration file for the Sphinx documentation builder.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
from datetime import datetime

# -- Path setup --------------------------------------------------------------
sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------
project = 'dynloss'
copyright = f'{datetime.now().year}, Cristian Tacoronte Rivero'
author = 'Cristian Tacoronte Rivero'
release = '1.0.0'
version = '1.0.0'

# -- General configuration ---------------------------------------------------
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',          # fórmulas de la pérdida y del NTK
    'myst_parser',
]

# Los docstrings usan campos reST (:param:, :return:), no Google ni NumPy
napoleon_google_docstring = False
napoleon_numpy_docstring = False
napoleon_use_param = True
napoleon_use_rtype = True

autodoc_default_options = {
    'members': True,
    'member-order': 'bysource',
    'special-members': '__init__',
    'undoc-members': False,
    'exclude-members': '__weakref__, __dict__, __module__',
    'show-inheritance': True,
}
autodoc_typehints = 'description'
autodoc_typehints_description_target = 'documented'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
}

myst_enable_extensions = [
    'colon_fence',
    'deflist',
]
myst_heading_anchors = 3

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store', 'tests']
source_encoding = 'utf-8'
language = 'es'

# -- Options for HTML output -------------------------------------------------
html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'prev_next_buttons_location': 'bottom',
    'collapse_navigation': False,
    'sticky_navigation': True,
    'navigation_depth': 4,
}
html_title = f'{project} v{release}'
html_short_title = project
htmlhelp_basename = 'dynlossdoc'
html_show_sourcelink = True

# -- Options for other output formats ----------------------------------------
latex_elements = {
    'papersize': 'a4paper',
    'pointsize': '10pt',
}
latex_documents = [
    ('index', 'dynloss.tex', 'dynloss Documentation',
     'Cristian Tacoronte Rivero', 'manual'),
]
man_pages = [
    ('index', 'dynloss', 'dynloss Documentation', [author], 1)
]
