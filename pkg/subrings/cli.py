"""
The ``subrings`` console script.

This runs the ``subrings`` management command without a Django project. When no settings
are configured, a minimal configuration is used; ``DJANGO_SETTINGS_MODULE`` is honored.
"""
import os
import sys

import django
from django.conf import settings

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "subrings": {"handlers": ["console"], "level": "WARNING", "propagate": False},
    },
}


def setup():
    """
    Configure Django once, for use outside a project.
    """
    if settings.configured:
        return
    if not os.environ.get("DJANGO_SETTINGS_MODULE"):
        settings.configure(INSTALLED_APPS=["subrings"], LOGGING=LOGGING)
    django.setup()


def run(argv=None, stdout=None, stderr=None):
    """
    Run the command with ``argv`` and return the exit code.
    """
    if argv is None:
        argv = sys.argv[1:]
    setup()

    from subrings.management.commands.subrings import Command

    command = Command(stdout=stdout, stderr=stderr)
    try:
        command.run_from_argv(["subrings", "subrings", *argv])
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    except KeyboardInterrupt:
        # Nothing partial was written, reports only appear once a count completes.
        return 130
    return 0


def main():
    sys.exit(run())
