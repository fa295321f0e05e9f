"""
The basic values shared by every counting module.

Counts are plain Python integers, which never overflow. All types here are immutable,
so they can be shipped to worker processes as-is.
"""
from dataclasses import dataclass, field
from itertools import combinations

from sympy import isprime, multiplicity

__all__ = (
    "Composition",
    "CountRecord",
    "NotPrime",
    "Target",
    "ValuationUndefined",
    "check_prime",
    "compositions",
    "p_valuation",
    "weak_compositions",
)


class ValuationUndefined(ValueError):
    """
    The p-adic valuation of zero is infinite.
    """


class NotPrime(ValueError):
    """
    A value that should be a prime is not.
    """


def check_prime(p):
    """
    Return ``p`` when it is a prime, raise :class:`NotPrime` otherwise.
    """
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise NotPrime(f"{p!r} is not a prime")
    return p


@dataclass(frozen=True)
class Composition:
    """
    The diagonal exponent vector ``(e_1, ..., e_{n-1})`` of an irreducible subring matrix.
    """

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("A composition needs at least one part")
        for part in parts:
            if isinstance(part, bool) or not isinstance(part, int) or part < 1:
                raise ValueError(f"Composition parts must be positive integers, got {parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text):
        """
        Parse ``"2,3,2,2"`` into a composition.
        """
        try:
            parts = tuple(int(item) for item in text.split(","))
        except ValueError:
            raise ValueError(f"Invalid composition {text!r}, expected e.g. 2,3,2,2") from None
        return cls(parts)

    @property
    def n(self):
        """The matrix dimension, one more than the number of parts."""
        return len(self.parts) + 1

    @property
    def e(self):
        """The exponent of the index ``p^e``."""
        return sum(self.parts)

    def strip_leading_ones(self):
        """
        Return the parts without the leading ``1`` entries, as a tuple.
        """
        parts = self.parts
        start = 0
        while start < len(parts) and parts[start] == 1:
            start += 1
        return parts[start:]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, index):
        return self.parts[index]

    def __str__(self):
        return ",".join(str(part) for part in self.parts)


def compositions(e, parts):
    """
    All ordered tuples of ``parts`` positive integers that sum to ``e``, in lexicographic order.

    :rtype: list[Composition]
    """
    if parts < 1:
        raise ValueError("The number of parts must be positive")
    if e < parts:
        return []

    # Each choice of cut points in 1..e-1 gives one composition,
    # and lexicographic cut tuples produce lexicographic compositions.
    result = []
    for cuts in combinations(range(1, e), parts - 1):
        bounds = (0,) + cuts + (e,)
        result.append(Composition(tuple(b - a for a, b in zip(bounds, bounds[1:]))))
    return result


def weak_compositions(e, parts):
    """
    All ordered tuples of ``parts`` non-negative integers that sum to ``e``.
    These are the exponent vectors of HNF diagonals with determinant ``p^e``.
    """
    return [tuple(part - 1 for part in c.parts) for c in compositions(e + parts, parts)]


def p_valuation(x, p):
    """
    The largest ``k`` such that ``p**k`` divides ``x``.
    """
    check_prime(p)
    if x == 0:
        raise ValuationUndefined("The valuation of 0 is infinite")
    return int(multiplicity(p, abs(x)))


@dataclass(frozen=True)
class Target:
    """
    Describes what is counted, e.g. ``Target("g_alpha", {"alpha": (3, 2)})``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def describe(self):
        args = " ".join(f"{key}={_format_param(value)}" for key, value in self.params.items())
        return f"{self.kind} {args}".strip()

    def as_json(self):
        return {key: _jsonable(value) for key, value in self.params.items()}


@dataclass(frozen=True)
class CountRecord:
    """
    One exact count of a target at a prime.
    """

    target: Target
    prime: int
    count: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.count < 0:
            raise ValueError(f"Counts can't be negative, got {self.count}")


def _format_param(value):
    if isinstance(value, Composition):
        return str(value)
    if isinstance(value, (list, tuple)):
        return ",".join(str(item) for item in value)
    return str(value)


def _jsonable(value):
    if isinstance(value, Composition):
        return list(value.parts)
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)
