"""
Exhaustive counts of subring matrices.

The irreducible counts ``g_alpha(p)`` enumerate every choice of the free entries of an
:class:`~subrings.lattice.IrreducibleTemplate`. The search runs column by column: once
column ``j`` is filled in, every enforced product ``v_i * v_j`` with ``i <= j`` only depends
on the columns filled so far, so a failing pair prunes the remaining columns.
Setting ``exhaustive=True`` builds every matrix instead and checks its
:func:`~subrings.lattice.closure_violations`, which is the reference the search must match.

All counts are exact Python integers. Every function checks its search space against
``SUBRINGS_BUDGET`` before enumerating anything.
"""
import logging
import time
from dataclasses import dataclass
from itertools import product
from math import comb

from subrings import signals
from subrings.core import Composition, Target, check_prime, compositions, weak_compositions
from subrings.lattice import (
    IrreducibleTemplate,
    build_irreducible,
    closure_violations,
    col_span_contains,
    pair_in_span,
)
from subrings.utils.parallel import partitioned_sum

logger = logging.getLogger(__name__)

# Searches smaller than this run in the calling process.
INLINE_SPACE = 20000

__all__ = (
    "ALL",
    "BudgetExceeded",
    "PairRangeError",
    "PairSubset",
    "count_f_n_direct",
    "count_f_n_recurrence",
    "count_g_alpha",
    "count_g_n",
    "count_subgroups_direct",
    "subset_census",
)


class BudgetExceeded(RuntimeError):
    """
    The search space of a census is larger than the configured budget.

    ``records`` holds the :class:`~subrings.core.CountRecord` objects that were
    completed before the budget was hit, when the caller collected any.
    """

    def __init__(self, space, budget, target=None, records=()):
        self.space = space
        self.budget = budget
        self.target = target
        self.records = tuple(records)
        what = f"{target.describe()}: " if target is not None else ""
        super().__init__(f"{what}search space of {space} exceeds the budget of {budget}")


class PairRangeError(ValueError):
    """
    A pair ``(i, j)`` outside ``1 <= i <= j <= n``.
    """


class PairSubset:
    """
    The products ``v_i * v_j`` that a census enforces. :data:`ALL` enforces every pair.
    """

    def __init__(self, pairs=None):
        if pairs is None:
            self.pairs = None
        else:
            self.pairs = frozenset((int(i), int(j)) for i, j in pairs)

    @classmethod
    def parse(cls, text):
        """
        Parse ``"3:3,4:4"``, or ``"all"``.
        """
        text = text.strip()
        if text.lower() == "all":
            return ALL
        pairs = []
        for item in text.split(","):
            try:
                i, j = item.split(":")
                pairs.append((int(i), int(j)))
            except ValueError:
                raise PairRangeError(f"Invalid pair {item!r}, expected i:j") from None
        return cls(pairs)

    @property
    def is_all(self):
        return self.pairs is None

    def validate(self, n):
        if self.pairs is None:
            return
        for i, j in sorted(self.pairs):
            if not 1 <= i <= j <= n:
                raise PairRangeError(f"Pair {i}:{j} is outside 1 <= i <= j <= {n}")

    def enforced(self, n, irreducible=True):
        """
        The enforced pairs as 0-based ``(i, j)`` tuples, ordered by ``(j, i)``.
        Pairs with the all-ones column are left out for irreducible matrices.
        """
        last = n - 1 if irreducible else n
        pairs = [(i, j) for j in range(1, last + 1) for i in range(1, j + 1)]
        if self.pairs is not None:
            pairs = [pair for pair in pairs if pair in self.pairs]
        return [(i - 1, j - 1) for i, j in pairs]

    def __contains__(self, pair):
        return self.pairs is None or tuple(pair) in self.pairs

    def __eq__(self, other):
        return isinstance(other, PairSubset) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __str__(self):
        if self.pairs is None:
            return "all"
        return ",".join(f"{i}:{j}" for i, j in sorted(self.pairs))

    def __repr__(self):
        return f"<PairSubset {self}>"


ALL = PairSubset()


@dataclass(frozen=True)
class _Column:
    # (row, column, scale) per slot, 0-based.
    positions: tuple
    values: tuple
    checks: tuple


@dataclass(frozen=True)
class _Frame:
    base: tuple
    initial_checks: tuple
    columns: tuple
    check_ones: bool


def _irreducible_frame(template, p, subset, pinned):
    n = template.n
    slot_values = dict(zip(template.slots, template.slot_values(p, pinned)))
    enforced = subset.enforced(n, irreducible=True)

    base = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        base[i][i] = p ** template.alpha[i]
        base[i][n - 1] = 1
    base[n - 1][n - 1] = 1

    columns = []
    for c in range(2, n):
        slots = [(r, c) for r in range(1, c)]
        columns.append(
            _Column(
                positions=tuple((r - 1, c - 1, p) for r, _ in slots),
                values=tuple(slot_values[slot] for slot in slots),
                checks=tuple(pair for pair in enforced if pair[1] == c - 1),
            )
        )
    return _Frame(
        base=tuple(map(tuple, base)),
        initial_checks=tuple(pair for pair in enforced if pair[1] == 0),
        columns=tuple(columns),
        check_ones=False,
    )


def _hnf_frame(exponents, p):
    n = len(exponents)
    diagonal = [p**d for d in exponents]
    base = [[0] * n for _ in range(n)]
    for i, value in enumerate(diagonal):
        base[i][i] = value

    enforced = ALL.enforced(n, irreducible=False)
    columns = []
    for c in range(1, n):
        columns.append(
            _Column(
                positions=tuple((r, c, 1) for r in range(c)),
                values=tuple(range(diagonal[r]) for r in range(c)),
                checks=tuple(pair for pair in enforced if pair[1] == c),
            )
        )
    return _Frame(
        base=tuple(map(tuple, base)),
        initial_checks=tuple(pair for pair in enforced if pair[1] == 0),
        columns=tuple(columns),
        check_ones=True,
    )


def _count_frame(frame, part=0, parts=1):
    """
    Count the completions of a frame. Partition ``part`` of ``parts`` only takes the
    values of the leading slot ``(1, 2)`` that are congruent to ``part``.
    """
    rows = [list(row) for row in frame.base]
    for i, j in frame.initial_checks:
        if not pair_in_span(rows, i, j):
            return 0
    if not frame.columns:
        if part != 0:
            return 0
        return int(not frame.check_ones or _ones_in_span(rows))
    return _descend(rows, frame, 0, part, parts)


def _descend(rows, frame, depth, part, parts):
    column = frame.columns[depth]
    positions = column.positions
    checks = column.checks
    last = depth + 1 == len(frame.columns)
    split = depth == 0 and parts > 1

    total = 0
    for values in product(*column.values):
        if split and values[0] % parts != part:
            continue
        for (r, c, scale), value in zip(positions, values):
            rows[r][c] = scale * value
        if not all(pair_in_span(rows, i, j) for i, j in checks):
            continue
        if not last:
            total += _descend(rows, frame, depth + 1, part, parts)
        elif not frame.check_ones or _ones_in_span(rows):
            total += 1
    return total


def _ones_in_span(rows):
    return col_span_contains(rows, (1,) * len(rows))


def _count_exhaustive(template, p, subset, pinned):
    enforced = {(i + 1, j + 1) for i, j in subset.enforced(template.n)}
    count = 0
    for assignment in template.assignments(p, pinned):
        matrix = build_irreducible(template, assignment, p)
        if not closure_violations(matrix) & enforced:
            count += 1
    return count


def _resolve_budget(budget):
    if budget is None:
        from subrings import appsettings

        budget = appsettings.SUBRINGS_BUDGET
    return budget


def _check_budget(space, budget, target):
    budget = _resolve_budget(budget)
    if space > budget:
        raise BudgetExceeded(space, budget, target)
    return budget


def g_alpha_space(alpha, p, pinned=None):
    """
    The number of assignments :func:`count_g_alpha` enumerates.
    """
    return IrreducibleTemplate(alpha).search_space(p, pinned)


def g_n_space(n, e, p):
    if n < 2:
        return 1
    return sum(g_alpha_space(alpha, p) for alpha in _g_n_compositions(n, e))


def count_g_alpha(
    alpha,
    p,
    subset=ALL,
    pinned=None,
    budget=None,
    threads=1,
    partitions=None,
    exhaustive=False,
):
    """
    Count the irreducible subring matrices with diagonal ``p^alpha``.

    :param alpha: The :class:`~subrings.core.Composition` (or a tuple of parts).
    :param subset: Only enforce these products; the default enforces all of them.
    :param pinned: Optional ``{(i, j): value}`` mapping that fixes slots.
    :param threads: Number of worker processes.
    :param partitions: Number of partitions of the leading slot, defaults to ``threads``.
    :param exhaustive: Check every matrix with :func:`~subrings.lattice.closure_violations`
        instead of the pruned search.
    :rtype: int
    """
    if not isinstance(alpha, Composition):
        alpha = Composition(tuple(alpha))
    check_prime(p)
    if not isinstance(subset, PairSubset):
        subset = PairSubset(subset)
    subset.validate(alpha.n)

    template = IrreducibleTemplate(alpha)
    target = _g_alpha_target(alpha, subset, pinned)
    space = template.search_space(p, pinned)
    _check_budget(space, budget, target)

    logger.debug("Counting %s at p=%d over %d assignments", target.describe(), p, space)
    signals.census_started.send(sender=target.kind, target=target, prime=p, space=space)
    start = time.monotonic()
    if exhaustive:
        count = _count_exhaustive(template, p, subset, pinned)
    else:
        frame = _irreducible_frame(template, p, subset, pinned)
        if space < INLINE_SPACE:
            threads = 1
        count = partitioned_sum(_count_frame, (frame,), partitions or threads, threads)

    signals.census_finished.send(
        sender=target.kind,
        target=target,
        prime=p,
        count=count,
        elapsed=time.monotonic() - start,
    )
    return count


def subset_census(alpha, p, pairs, pinned=None, **kwargs):
    """
    Count the assignments of ``alpha`` where only the products in ``pairs`` are enforced.
    """
    subset = pairs if isinstance(pairs, PairSubset) else PairSubset(pairs)
    return count_g_alpha(alpha, p, subset=subset, pinned=pinned, **kwargs)


def _g_alpha_target(alpha, subset, pinned):
    params = {"alpha": alpha}
    if not subset.is_all:
        params["pairs"] = str(subset)
    if pinned:
        params["pin"] = ",".join(f"{i}:{j}={v}" for (i, j), v in sorted(pinned.items()))
    return Target("subset" if not subset.is_all else "g_alpha", params)


def _g_n_compositions(n, e):
    if e < 1:
        return []
    return compositions(e, n - 1)


def count_g_n(n, e, p, budget=None, threads=1):
    """
    Count the irreducible subring matrices of index ``p^e`` in dimension ``n``,
    summing :func:`count_g_alpha` over all compositions of ``e`` into ``n - 1`` parts.
    """
    check_prime(p)
    if n < 1 or e < 0:
        raise ValueError(f"Need n >= 1 and e >= 0, got n={n}, e={e}")
    if n == 1:
        return int(e == 0)

    target = Target("g_n", {"n": n, "e": e})
    budget = _check_budget(g_n_space(n, e, p), budget, target)
    return sum(
        count_g_alpha(alpha, p, budget=budget, threads=threads)
        for alpha in _g_n_compositions(n, e)
    )


def count_f_n_recurrence(n, e, p, budget=None, threads=1):
    """
    Count all subrings of index ``p^e`` in ``Z^n`` from the irreducible counts, using

    .. math::

        f_n(p^e) = \\sum_{i=0}^{e} \\sum_{j=1}^{n} \\binom{n-1}{j-1} f_{n-j}(p^{e-i}) g_j(p^i)

    with ``f_0(p^0) = 1`` and ``f_0(p^e) = 0`` otherwise.
    Intermediate results are cached for the duration of the call only.
    """
    check_prime(p)
    if n < 0 or e < 0:
        raise ValueError(f"Need n >= 0 and e >= 0, got n={n}, e={e}")

    target = Target("f_n", {"n": n, "e": e, "method": "recurrence"})
    space = sum(g_n_space(j, i, p) for j in range(2, n + 1) for i in range(e + 1))
    budget = _check_budget(space, budget, target)

    g_cache = {}
    f_cache = {}

    def g(j, i):
        if (j, i) not in g_cache:
            g_cache[j, i] = count_g_n(j, i, p, budget=budget, threads=threads)
        return g_cache[j, i]

    def f(m, k):
        if m == 0:
            return int(k == 0)
        if (m, k) not in f_cache:
            f_cache[m, k] = sum(
                comb(m - 1, j - 1) * f(m - j, k - i) * g(j, i)
                for i in range(k + 1)
                for j in range(1, m + 1)
            )
        return f_cache[m, k]

    return f(n, e)


def count_subgroups_direct(n, e, p):
    """
    The number of HNF matrices with determinant ``p^e``, i.e. the number of
    subgroups of index ``p^e`` in ``Z^n``.
    """
    check_prime(p)
    if n < 1 or e < 0:
        raise ValueError(f"Need n >= 1 and e >= 0, got n={n}, e={e}")
    total = 0
    for exponents in weak_compositions(e, n):
        term = 1
        for i, d in enumerate(exponents):
            # Row i has n - 1 - i free entries, each with p^d values.
            term *= p ** (d * (n - 1 - i))
        total += term
    return total


def count_f_n_direct(n, e, p, budget=None, threads=1):
    """
    Count the subrings of index ``p^e`` in ``Z^n`` by testing every HNF matrix
    with determinant ``p^e``.
    """
    check_prime(p)
    if n < 0 or e < 0:
        raise ValueError(f"Need n >= 0 and e >= 0, got n={n}, e={e}")
    if n == 0:
        return int(e == 0)

    target = Target("f_n", {"n": n, "e": e, "method": "direct"})
    space = count_subgroups_direct(n, e, p)
    _check_budget(space, budget, target)

    signals.census_started.send(sender=target.kind, target=target, prime=p, space=space)
    start = time.monotonic()
    count = 0
    for exponents in weak_compositions(e, n):
        frame = _hnf_frame(exponents, p)
        workers = threads if space >= INLINE_SPACE else 1
        count += partitioned_sum(_count_frame, (frame,), workers, workers)
    signals.census_finished.send(
        sender=target.kind, target=target, prime=p, count=count, elapsed=time.monotonic() - start
    )
    return count
