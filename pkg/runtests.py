#!/usr/bin/env python
"""
Run the subrings tests without a project::

    ./runtests.py                       # all tests
    ./runtests.py subrings.tests.test_census
    ./runtests.py --slow --verbosity=2  # include the larger grids
"""
import os
import sys

import django
from django.conf import settings
from django.core.management import execute_from_command_line

TEST_SETTINGS = {
    # Nothing here has models, but the test runner wants a database alias.
    "DATABASES": {"default": {"ENGINE": "django.db.backends.sqlite3", "NAME": ":memory:"}},
    "INSTALLED_APPS": ["subrings"],
    "TEST_RUNNER": "django.test.runner.DiscoverRunner",
    "SECRET_KEY": "subrings-tests",
    # Keep the tests small, the verify command runs the full grids.
    "SUBRINGS_BUDGET": 10**7,
    "SUBRINGS_THREADS": 1,
}

DEFAULT_TEST_LABELS = ["subrings"]


def configure():
    print(f"Python {sys.version.split()[0]} from {sys.executable}", file=sys.stderr)
    django_dir = os.path.dirname(django.__file__)
    print(f"Django {django.get_version()} from {django_dir}", file=sys.stderr)
    if not settings.configured:
        settings.configure(DEBUG=False, **TEST_SETTINGS)


def runtests(args):
    if "--slow" in args:
        args = [arg for arg in args if arg != "--slow"]
        os.environ["SUBRINGS_SLOW_TESTS"] = "1"

    options = [arg for arg in args if arg.startswith("-")]
    labels = [arg for arg in args if not arg.startswith("-")] or DEFAULT_TEST_LABELS
    configure()
    execute_from_command_line([sys.argv[0], "test", "--traceback", *options, *labels])


if __name__ == "__main__":
    runtests(sys.argv[1:])
