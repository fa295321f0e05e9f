#
# django-subrings documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

import django

# The djangodummy settings live in _ext, the package itself one level up.
sys.path.insert(0, os.path.abspath("_ext"))
sys.path.insert(0, os.path.abspath(".."))
os.environ["DJANGO_SETTINGS_MODULE"] = "djangodummy.settings"
django.setup()

from subrings import __version__  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinxcontrib_django",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "django-subrings"
copyright = "2024, the django-subrings contributors"

version = __version__
release = __version__

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# Keep the documented order of the report fields and settings.
autodoc_member_order = "bysource"


# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = []
htmlhelp_basename = "django-subringsdoc"


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    (
        "index",
        "django-subrings.tex",
        "django-subrings Documentation",
        "the django-subrings contributors",
        "manual",
    ),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (
        "index",
        "django-subrings",
        "django-subrings Documentation",
        ["the django-subrings contributors"],
        1,
    )
]


intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "django": (
        "https://docs.djangoproject.com/en/stable/",
        "https://docs.djangoproject.com/en/stable/_objects/",
    ),
    "sympy": ("https://docs.sympy.org/latest/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pydantic": ("https://docs.pydantic.dev/latest/", None),
}
