# -*- coding: utf-8 -*-
#
# DPER Lab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.
import os
import sys

import django
import sphinx_rtd_theme


os.environ["DJANGO_SETTINGS_MODULE"] = "dper_lab.settings"
sys.path.insert(0, os.path.dirname(os.path.abspath(".")))
django.setup()

import dper_lab  # noqa: E402


extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode", "sphinx.ext.napoleon"]
napoleon_numpy_docstring = True

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "DPER Lab"
copyright = "2020, DPER Lab Developers"
author = dper_lab.__author__
version = ".".join(dper_lab.__version__.split(".")[:2])
release = dper_lab.__version__

language = None
exclude_patterns = ["_build"]
pygments_style = "sphinx"
todo_include_todos = False

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = []
htmlhelp_basename = "DperLabdoc"

latex_documents = [
    (master_doc, "DperLab.tex", "DPER Lab Documentation", author, "manual")
]
man_pages = [(master_doc, "dperlab", "DPER Lab Documentation", [author], 1)]
texinfo_documents = [
    (
        master_doc,
        "DperLab",
        "DPER Lab Documentation",
        author,
        "DperLab",
        "Decoupled prioritized experience replay for TD3.",
        "Miscellaneous",
    )
]
