"""
Validation of the ``SUBRINGS_*`` settings, and parsers for the values
that are passed on the command line.
"""
from django.core.exceptions import ImproperlyConfigured
from sympy import prime

from subrings.core import Composition, check_prime

_MINIMUMS = {"SUBRINGS_MAX_DEGREE": 0, "SUBRINGS_MAX_MODULUS": 2}


def validate_settings(**values):
    """
    Check the values of the ``SUBRINGS_*`` settings, raising
    :class:`~django.core.exceptions.ImproperlyConfigured` for the first invalid one.
    """
    for name, value in values.items():
        if name == "SUBRINGS_THREADS" and value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, int):
            raise ImproperlyConfigured(f"{name} should be an integer, not {value!r}")
        lowest = _MINIMUMS.get(name, 1)
        if value < lowest:
            raise ImproperlyConfigured(f"{name} should be at least {lowest}, not {value}")


def parse_primes(text):
    """
    Parse ``"first:K"`` into the first K primes, or ``"2,3,5"`` into a list of primes.
    """
    text = text.strip()
    if text.startswith("first:"):
        try:
            count = int(text[len("first:") :])
        except ValueError:
            raise ValueError(f"Invalid prime list {text!r}, expected first:K") from None
        if count < 1:
            raise ValueError("first:K needs K >= 1")
        return [int(prime(i)) for i in range(1, count + 1)]

    try:
        primes = [int(item) for item in text.split(",")]
    except ValueError:
        raise ValueError(f"Invalid prime list {text!r}, expected e.g. 2,3,5") from None
    for p in primes:
        check_prime(p)
    if len(set(primes)) != len(primes):
        raise ValueError(f"Prime list {text!r} repeats a prime")
    return primes


def parse_alpha(text):
    """
    Parse a diagonal like ``"2,3,2,2"``.
    """
    return Composition.parse(text)


def parse_pairs(text):
    """
    Parse a pair list like ``"3:3,4:4"`` into a :class:`~subrings.census.PairSubset`.
    """
    # Imported here, census uses this package too.
    from subrings.census import PairSubset

    return PairSubset.parse(text)


def parse_pins(text):
    """
    Parse ``"1:2=0,2:3=1"`` into ``{(1, 2): 0, (2, 3): 1}``.
    """
    pins = {}
    for item in text.split(","):
        try:
            slot, value = item.split("=")
            i, j = slot.split(":")
            pins[int(i), int(j)] = int(value)
        except ValueError:
            raise ValueError(f"Invalid pin {item!r}, expected i:j=value") from None
    return pins
