"""
Utility functions to parse command arguments and run counts in parallel.
"""

from .conf import parse_alpha, parse_pairs, parse_pins, parse_primes
from .parallel import default_threads, partitioned_sum

__all__ = (
    "parse_alpha",
    "parse_pairs",
    "parse_pins",
    "parse_primes",
    "default_threads",
    "partitioned_sum",
)
