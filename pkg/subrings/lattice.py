"""
Subring matrices and the integer column-span test.

A full-rank sublattice of ``Z^n`` is a subring exactly when the all-ones vector and every
componentwise product ``v_i * v_j`` of its basis columns lie in its integer column span.
With the basis in Hermite normal form, span membership is decided by back-substitution
with a divisibility check on every row.
"""
from dataclasses import dataclass, field
from itertools import product

from subrings.core import Composition, check_prime

__all__ = (
    "AssignmentRangeError",
    "EntryAssignment",
    "HnfMatrix",
    "IrreducibleTemplate",
    "ShapeError",
    "build_irreducible",
    "closure_violations",
    "col_span_contains",
    "hadamard",
    "is_subring_matrix",
    "pair_in_span",
)


class ShapeError(ValueError):
    """
    Vectors or matrices with incompatible dimensions, or a matrix that is not in HNF.
    """


class AssignmentRangeError(ValueError):
    """
    A slot value outside ``[0, p^(e_i - 1))``, or a slot that doesn't exist.
    """


@dataclass(frozen=True)
class HnfMatrix:
    """
    An upper triangular integer matrix with ``0 <= a_ij < a_ii`` above the diagonal.

    ``irreducible`` marks matrices made by :func:`build_irreducible`; their last column is
    all ones, so the pairs involving it are never checked.
    """

    entries: tuple
    irreducible: bool = False

    def __post_init__(self):
        rows = tuple(tuple(int(value) for value in row) for row in self.entries)
        n = len(rows)
        if n == 0:
            raise ShapeError("An HNF matrix needs at least one row")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ShapeError(f"Row {i + 1} has {len(row)} entries, expected {n}")
            if row[i] < 1:
                raise ShapeError(f"Diagonal entry ({i + 1},{i + 1}) must be positive")
            for j, value in enumerate(row):
                if j < i and value != 0:
                    raise ShapeError(f"Entry ({i + 1},{j + 1}) below the diagonal is not zero")
                if j > i and not 0 <= value < row[i]:
                    raise ShapeError(
                        f"Entry ({i + 1},{j + 1}) = {value} is not reduced modulo {row[i]}"
                    )
        object.__setattr__(self, "entries", rows)

    @property
    def n(self):
        return len(self.entries)

    def column(self, j):
        """
        Return column ``j`` (1-based), the basis vector ``v_j``.
        """
        return tuple(row[j - 1] for row in self.entries)

    def determinant(self):
        result = 1
        for i, row in enumerate(self.entries):
            result *= row[i]
        return result

    def __matmul__(self, x):
        if len(x) != self.n:
            raise ShapeError(f"Can't multiply an {self.n}x{self.n} matrix by {len(x)} values")
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.entries)


@dataclass(frozen=True)
class EntryAssignment:
    """
    Values ``a_ij`` for the free slots of an :class:`IrreducibleTemplate`.
    Slots that are not mentioned are zero.
    """

    values: dict = field(default_factory=dict)

    def get(self, slot):
        return self.values.get(slot, 0)


class IrreducibleTemplate:
    """
    The shape of the irreducible subring matrices with diagonal ``p^e_1, ..., p^e_(n-1), 1``.

    Entry ``(i, j)`` for ``i < j <= n-1`` is ``p * a_ij``; the HNF condition
    ``p * a_ij < p^e_i`` leaves ``a_ij`` in ``[0, p^(e_i - 1))``.
    """

    def __init__(self, alpha):
        if not isinstance(alpha, Composition):
            alpha = Composition(tuple(alpha))
        self.alpha = alpha
        self.n = alpha.n
        # Row-major, so the last slot varies fastest.
        self.slots = tuple((i, j) for i in range(1, self.n - 1) for j in range(i + 1, self.n))

    def __repr__(self):
        return f"<IrreducibleTemplate alpha=({self.alpha})>"

    def slot_exponent(self, slot):
        i, j = self._check_slot(slot)
        return self.alpha[i - 1] - 1

    def slot_range(self, slot, p):
        """
        Number of values slot ``(i, j)`` can take at ``p``.
        """
        return p ** self.slot_exponent(slot)

    def slot_values(self, p, pinned=None):
        """
        The value ranges of all slots, in slot order, with ``pinned`` slots fixed.
        """
        pinned = pinned or {}
        for slot in pinned:
            self._check_slot(slot)

        ranges = []
        for slot in self.slots:
            limit = self.slot_range(slot, p)
            if slot in pinned:
                value = pinned[slot]
                if not 0 <= value < limit:
                    raise AssignmentRangeError(
                        f"Slot {slot[0]}:{slot[1]} can't be pinned to {value}, "
                        f"values must lie in [0, {limit})"
                    )
                ranges.append((value,))
            else:
                ranges.append(range(limit))
        return ranges

    def search_space(self, p, pinned=None):
        """
        The exact number of assignments at ``p``.
        """
        total = 1
        for values in self.slot_values(p, pinned):
            total *= len(values)
        return total

    def assignments(self, p, pinned=None):
        """
        Iterate all :class:`EntryAssignment` objects in row-major order.
        """
        for values in product(*self.slot_values(p, pinned)):
            yield EntryAssignment(dict(zip(self.slots, values)))

    def validate(self, assignment, p):
        for slot, value in assignment.values.items():
            limit = self.slot_range(slot, p)
            if not 0 <= value < limit:
                raise AssignmentRangeError(
                    f"a_{slot[0]}{slot[1]} = {value} is outside [0, {limit}) for p = {p}"
                )

    def _check_slot(self, slot):
        try:
            i, j = slot
        except (TypeError, ValueError):
            raise AssignmentRangeError(f"Invalid slot {slot!r}") from None
        if not 1 <= i < j <= self.n - 1:
            raise AssignmentRangeError(
                f"Slot {i}:{j} does not exist for n = {self.n}, "
                f"slots satisfy 1 <= i < j <= {self.n - 1}"
            )
        return i, j


def build_irreducible(template, assignment, p):
    """
    Construct the irreducible subring matrix candidate for an assignment.

    :rtype: HnfMatrix
    """
    check_prime(p)
    template.validate(assignment, p)
    n = template.n
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i] = p ** template.alpha[i]
        rows[i][n - 1] = 1
    rows[n - 1][n - 1] = 1
    for i, j in template.slots:
        rows[i - 1][j - 1] = p * assignment.get((i, j))
    return HnfMatrix(tuple(map(tuple, rows)), irreducible=True)


def hadamard(u, v):
    """
    The componentwise product of two vectors.
    """
    if len(u) != len(v):
        raise ShapeError(f"Can't multiply vectors of length {len(u)} and {len(v)}")
    return tuple(a * b for a, b in zip(u, v))


def col_span_contains(A, w):
    """
    Tell whether ``A x = w`` has an integer solution ``x``.

    Solves from the bottom row upwards and fails at the first row where the
    diagonal entry doesn't divide the remainder.
    """
    rows = A.entries if isinstance(A, HnfMatrix) else A
    n = len(rows)
    if len(w) != n:
        raise ShapeError(f"Vector of length {len(w)} can't lie in the span of an {n}x{n} matrix")

    # Rows below the last nonzero entry of w force x to zero there.
    top = n - 1
    while top >= 0 and w[top] == 0:
        top -= 1
    return _solve(rows, w, top)


def pair_in_span(rows, i, j):
    """
    Tell whether ``v_i * v_j`` lies in the column span of ``rows`` (0-based ``i <= j``).

    Both columns vanish below row ``i``, so only rows ``0..i`` and columns ``0..i``
    of the matrix are read, together with columns ``i`` and ``j``.
    """
    w = [row[i] * row[j] for row in rows[: i + 1]]
    return _solve(rows, w, i)


def _solve(rows, w, top):
    x = [0] * (top + 1)
    for r in range(top, -1, -1):
        row = rows[r]
        rest = w[r]
        for c in range(r + 1, top + 1):
            rest -= row[c] * x[c]
        quotient, remainder = divmod(rest, row[r])
        if remainder:
            return False
        x[r] = quotient
    return True


def _checked_pairs(A):
    n = A.n
    last = n - 1 if A.irreducible else n
    return [(i, j) for j in range(1, last + 1) for i in range(1, j + 1)]


def closure_violations(A):
    """
    The pairs ``(i, j)``, ``i <= j``, whose product ``v_i * v_j`` is not in the span of ``A``.

    :rtype: frozenset
    """
    return frozenset(
        (i, j) for i, j in _checked_pairs(A) if not pair_in_span(A.entries, i - 1, j - 1)
    )


def is_subring_matrix(A):
    """
    Tell whether the columns of ``A`` span a subring of ``Z^n``.
    """
    if not col_span_contains(A, (1,) * A.n):
        return False
    return all(pair_in_span(A.entries, i - 1, j - 1) for i, j in _checked_pairs(A))
