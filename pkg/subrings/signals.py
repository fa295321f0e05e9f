"""
The signals exist to follow long-running censuses and verification runs.

The management command connects to these at higher verbosity levels to report progress.
Other code can connect to them too, e.g. to collect timings.
"""
from django.dispatch import Signal

census_started = Signal()
census_finished = Signal()

check_finished = Signal()
