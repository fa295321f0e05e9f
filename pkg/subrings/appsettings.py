"""
Overview of all settings which can be customized.
"""
from django.conf import settings

from subrings.utils.conf import validate_settings

# Largest number of assignments a single census may enumerate.
SUBRINGS_BUDGET = getattr(settings, "SUBRINGS_BUDGET", 10**9)

# Largest grid (p^k points) a variety count may evaluate.
SUBRINGS_VARIETY_BUDGET = getattr(settings, "SUBRINGS_VARIETY_BUDGET", 31**8)

# The fit command samples the first K primes by default.
SUBRINGS_DEFAULT_PRIME_COUNT = getattr(settings, "SUBRINGS_DEFAULT_PRIME_COUNT", 10)

SUBRINGS_MAX_DEGREE = getattr(settings, "SUBRINGS_MAX_DEGREE", 8)
SUBRINGS_MAX_MODULUS = getattr(settings, "SUBRINGS_MAX_MODULUS", 6)

# Worker processes, None uses all CPUs.
SUBRINGS_THREADS = getattr(settings, "SUBRINGS_THREADS", None)

validate_settings(
    SUBRINGS_BUDGET=SUBRINGS_BUDGET,
    SUBRINGS_VARIETY_BUDGET=SUBRINGS_VARIETY_BUDGET,
    SUBRINGS_DEFAULT_PRIME_COUNT=SUBRINGS_DEFAULT_PRIME_COUNT,
    SUBRINGS_MAX_DEGREE=SUBRINGS_MAX_DEGREE,
    SUBRINGS_MAX_MODULUS=SUBRINGS_MAX_MODULUS,
    SUBRINGS_THREADS=SUBRINGS_THREADS,
)
