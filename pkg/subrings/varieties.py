"""
Counting the F_p points of polynomial systems.

A system is read from a polynomial document::

    {
        "vars": ["x", "y"],
        "polys": [
            [[1, [1, 1]], [-1, [0, 0]]]
        ]
    }

Every polynomial is a list of ``[coefficient, [exponents...]]`` terms, with one exponent
per variable. The document above is ``x*y - 1``. Named systems are available as
``builtin:NAME``, see :data:`BUILTIN_SYSTEMS`.
"""
import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import List, Tuple

import numpy
from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError
from pydantic import model_validator

from subrings.core import check_prime

logger = logging.getLogger(__name__)

__all__ = (
    "BUILTIN_SYSTEMS",
    "PolyDocument",
    "PolySystem",
    "SchemaError",
    "count_points",
    "load_system",
)

# Points evaluated per numpy batch are bounded by this.
_BATCH_POINTS = 1 << 20

# Residues up to this square without overflowing int64.
_INT64_LIMIT = math.isqrt(numpy.iinfo(numpy.int64).max)


class SchemaError(ValueError):
    """
    A polynomial document that doesn't follow the schema.
    ``errors`` lists ``(location, message)`` pairs.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        details = "; ".join(f"{location}: {message}" for location, message in self.errors)
        super().__init__(f"Invalid polynomial document: {details}")


class PolyDocument(BaseModel):
    """
    The published schema of a polynomial document.
    """

    model_config = ConfigDict(extra="forbid")

    vars: List[StrictStr] = Field(min_length=1, description="Variable names, in order")
    polys: List[List[Tuple[StrictInt, List[StrictInt]]]] = Field(
        min_length=1,
        description="Polynomials as lists of [coefficient, [exponent per variable]] terms",
    )

    @model_validator(mode="after")
    def check_exponents(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be unique")
        k = len(self.vars)
        for i, poly in enumerate(self.polys):
            for j, (_, exponents) in enumerate(poly):
                if len(exponents) != k:
                    raise ValueError(
                        f"polys.{i}.{j} has {len(exponents)} exponents, expected {k}"
                    )
                if any(exponent < 0 for exponent in exponents):
                    raise ValueError(f"polys.{i}.{j} has a negative exponent")
        return self


@dataclass(frozen=True)
class PolySystem:
    """
    Polynomials over the integers in ``var_count`` variables, reduced mod ``p`` when counting.
    Each polynomial is a tuple of ``(coefficient, exponents)`` terms.
    """

    var_count: int
    polys: tuple
    names: tuple = ()

    def __post_init__(self):
        polys = tuple(
            tuple((int(coefficient), tuple(exponents)) for coefficient, exponents in poly)
            for poly in self.polys
        )
        errors = []
        if self.var_count < 1:
            errors.append(("var_count", "at least one variable is required"))
        if not polys:
            errors.append(("polys", "at least one polynomial is required"))
        for i, poly in enumerate(polys):
            for j, (_, exponents) in enumerate(poly):
                if len(exponents) != self.var_count or any(x < 0 for x in exponents):
                    errors.append(
                        (f"polys.{i}.{j}", f"expected {self.var_count} non-negative exponents")
                    )
        if errors:
            raise SchemaError(errors)

        names = tuple(self.names) or tuple(f"x{i + 1}" for i in range(self.var_count))
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_document(cls, document):
        return cls(len(document.vars), document.polys, tuple(document.vars))


def _system(names, *polys):
    return PolySystem(len(names), polys, names)


#: Named systems, addressed as ``builtin:NAME``.
BUILTIN_SYSTEMS = {
    # -a1 a4^2 + a2^2, -a1 a5^2 + a3^2
    "qp-pair": _system(
        ("a1", "a2", "a3", "a4", "a5"),
        ((-1, (1, 0, 0, 2, 0)), (1, (0, 2, 0, 0, 0))),
        ((-1, (1, 0, 0, 0, 2)), (1, (0, 0, 2, 0, 0))),
    ),
    # -a2 a6^2, -a4 a6^2 + a5^2
    "first-diag-pair": _system(
        ("a2", "a4", "a5", "a6"),
        ((-1, (1, 0, 0, 2)),),
        ((-1, (0, 1, 0, 2)), (1, (0, 0, 2, 0))),
    ),
}


def load_system(document):
    """
    Read a :class:`PolySystem` from ``builtin:NAME``, JSON text, or a parsed ``dict``.
    """
    if isinstance(document, PolySystem):
        return document
    if isinstance(document, str) and document.startswith("builtin:"):
        name = document[len("builtin:") :]
        try:
            return BUILTIN_SYSTEMS[name]
        except KeyError:
            choices = ", ".join(sorted(BUILTIN_SYSTEMS))
            raise SchemaError([("builtin", f"unknown system {name!r}, choose from {choices}")])

    try:
        if isinstance(document, (str, bytes)):
            parsed = PolyDocument.model_validate_json(document)
        else:
            parsed = PolyDocument.model_validate(document)
    except ValidationError as e:
        raise SchemaError(
            (".".join(str(part) for part in error["loc"]) or "document", error["msg"])
            for error in e.errors()
        ) from None
    return PolySystem.from_document(parsed)


def count_points(system, p, budget=None):
    """
    Count the points of ``(Z/pZ)^k`` where every polynomial of the system vanishes.

    The trailing variables are evaluated as numpy grids of at most ``_BATCH_POINTS``
    points, the leading ones are looped over. A variable whose range alone is larger
    than a batch is split into slices. Above ``_INT64_LIMIT`` the grids hold Python
    integers, so products of residues can't overflow.
    """
    from subrings.census import BudgetExceeded

    check_prime(p)
    k = system.var_count
    space = p**k
    if budget is None:
        from subrings import appsettings

        budget = appsettings.SUBRINGS_VARIETY_BUDGET
    if space > budget:
        raise BudgetExceeded(space, budget)

    width = 0
    while width < k and p ** (width + 1) <= _BATCH_POINTS:
        width += 1
    if width:
        looped, step = k - width, p
    else:
        # Not even one variable fits, so its range is sliced.
        looped, step = k - 1, _BATCH_POINTS
    inner = k - looped - 1
    dtype = numpy.int64 if p <= _INT64_LIMIT else object
    logger.debug("Counting %d points mod %d, %d looped variables", space, p, looped)

    total = 0
    for start in range(0, p, step):
        grid = numpy.indices((min(step, p - start),) + (p,) * inner)
        grid = grid.reshape(inner + 1, -1).astype(dtype)
        grid[0] += start
        powers = _GridPowers(grid, p, dtype)
        for prefix in product(range(p), repeat=looped):
            total += _count_batch(system.polys, prefix, powers, p, dtype)
    return total


class _GridPowers:
    def __init__(self, grid, p, dtype):
        self.grid = grid
        self.p = p
        self.dtype = dtype
        self.size = grid.shape[1]
        self.cache = {}

    def __call__(self, var, exponent):
        key = (var, exponent)
        if key not in self.cache:
            values = numpy.ones(self.size, dtype=self.dtype)
            for _ in range(exponent):
                values = values * self.grid[var] % self.p
            self.cache[key] = values
        return self.cache[key]


def _count_batch(polys, prefix, powers, p, dtype):
    lead = len(prefix)
    mask = numpy.ones(powers.size, dtype=bool)
    for poly in polys:
        acc = numpy.zeros(powers.size, dtype=dtype)
        for coefficient, exponents in poly:
            scalar = coefficient % p
            for value, exponent in zip(prefix, exponents[:lead]):
                scalar = scalar * pow(value, exponent, p) % p
            if not scalar:
                continue
            term = numpy.full(powers.size, scalar, dtype=dtype)
            for var, exponent in enumerate(exponents[lead:]):
                if exponent:
                    term = term * powers(var, exponent) % p
            acc = (acc + term) % p
        mask &= numpy.asarray(acc == 0, dtype=bool)
        if not mask.any():
            break
    return int(mask.sum())
