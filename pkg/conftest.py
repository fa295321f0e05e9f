"""Configure Django for pytest with the same settings runtests.py uses."""
import django
from django.conf import settings

from runtests import TEST_SETTINGS

if not settings.configured:
    settings.configure(DEBUG=False, **TEST_SETTINGS)
    django.setup()
