# -*- coding: utf-8 -*-
#
# Flask-GridTree documentation build configuration file.

import os
import sys
sys.path.insert(0, os.path.abspath('../../'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'Flask-GridTree'
copyright = '2024, GridTree developers'
author = 'GridTree developers'
version = '1.0'
release = 'v1.0'

exclude_patterns = []
pygments_style = 'sphinx'

html_theme = 'alabaster'
html_sidebars = {
    '**': [
        'about.html',
        'globaltoc.html',
        'searchbox.html',
    ]
}
htmlhelp_basename = 'Flask-GridTreedoc'

add_module_names = False    # Remove module paths from docs
autodoc_default_options = {'members': True, 'undoc-members': True}
autodoc_member_order = 'bysource'
