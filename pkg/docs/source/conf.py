# Sphinx configuration for the wsindex documentation.
#
# Build from the repository root with:
#   sphinx-build docs/source docs/build

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

# -- Project information -----------------------------------------------------

project = 'wsindex'
release = '0.1.0'

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",     # Google docstrings
    "sphinx.ext.autosummary",
]

add_module_names = False     # Turn off prepended module names
autosummary_generate = True  # Turn on sphinx.ext.autosummary
autodoc_member_order = "bysource"

# Docstring sections the package uses beyond the napoleon defaults
napoleon_custom_sections = [("Subcommands", "params_style")]

templates_path = ['_templates']
exclude_patterns = ['_autosummary/wsindex.experiments*']

# Type aliases
autodoc_type_aliases = {
    "ArrayLike": "ArrayLike",
    "Pattern": "wsindex.index.weightedindex.Pattern",
}

# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'

html_theme_options = {
    "logo_name": True,
    "logo_text_align": "center",
    "description": "Pattern matching on weighted sequences",
}
