# Settings file to allow parsing API documentation of the subrings modules,
# and provide defaults to use in the documentation.
#
# This file is placed in a subdirectory,
# so the docs root won't be detected by find_packages()

# Required by Django
SECRET_KEY = "docs"

INSTALLED_APPS = [
    "subrings",
]

# Documented defaults, spelled out so autodoc shows them.
SUBRINGS_BUDGET = 10**9
SUBRINGS_THREADS = None
