import os
import unittest

from django.test.utils import override_settings

from subrings import appsettings
from subrings.utils.conf import validate_settings


class override_subrings_settings(override_settings):
    """
    Like ``override_settings()``, but also patches :mod:`subrings.appsettings`,
    which only reads the settings once. The new values are validated first.
    """

    def enable(self):
        validate_settings(**self.options)
        super().enable()
        self.replaced = {name: getattr(appsettings, name) for name in self.options}
        for name, value in self.options.items():
            setattr(appsettings, name, value)

    def disable(self):
        for name, value in self.replaced.items():
            setattr(appsettings, name, value)
        super().disable()


def slow_test(func):
    """
    Decorator for tests that need minutes, enabled with ``SUBRINGS_SLOW_TESTS=1``.
    """
    return unittest.skipUnless(
        os.environ.get("SUBRINGS_SLOW_TESTS"), "set SUBRINGS_SLOW_TESTS=1 to run"
    )(func)
