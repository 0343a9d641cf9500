# -*- coding: utf-8 -*-
#
# schottkylab documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

extensions = ['sphinx.ext.autodoc']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'schottkylab'
copyright = u'2026, The schottkylab developers'

# The short X.Y version.
version = '0.1'
# The full version, including alpha/beta/rc tags.
release = '0.1.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'schottkylabdoc'

latex_documents = [
  ('index', 'schottkylab.tex', u'schottkylab Documentation',
   u'The schottkylab developers', 'manual'),
]
