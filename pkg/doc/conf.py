# -*- coding: utf-8 -*-
#
# measure-only documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.
import sphinx_bootstrap_theme

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'numpydoc',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'measure-only'
copyright = u'2026, measure-only contributors'
author = u'measure-only contributors'

from measure_only import __version__ as version  # noqa
release = version

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

# generate autosummary even if no references
autosummary_generate = True

# remove warnings: "toctree contains reference to nonexisting document"
numpydoc_show_class_members = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'bootstrap'
html_theme_options = {
    'navbar_sidebarrel': False,
    'navbar_pagenav': False,
    'source_link_position': "",
    'navbar_links': [
        ("API", "api"),
    ],
    'bootswatch_theme': "flatly",
    'bootstrap_version': "3",
}
html_theme_path = sphinx_bootstrap_theme.get_html_theme_path()
html_static_path = ['_static']
htmlhelp_basename = 'measure_only_doc'

# -- Options for LaTeX and manual page output -----------------------------

latex_documents = [
    (master_doc, 'measure-only.tex', u'measure-only Documentation',
     u'measure-only contributors', 'manual'),
]
man_pages = [
    (master_doc, 'measure-only', u'measure-only Documentation',
     [author], 1)
]

intersphinx_mapping = {
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
}
