"""
Machine checks of the closed forms against the exhaustive counts.

Every check compares an expected value with an actual one at a prime. The suites are:

``basic``
    the worked example, the small-index formulas, subgroup counts and the two ways of
    counting all subrings.
``lemmas``
    every lemma placement, the corollary sums and the index ``p^(n+2)`` counts.
``zeta``
    the local zeta factors against the recurrence.
``examples``
    a pinned case count, the quasipolynomial variety and the classifications of the
    ``(3,2,2,2)`` censuses. Those sample the primes up to 19 and take hours, they are
    searched under ``classification_budget`` instead of the budget of the run.

Checks that exceed the search budget, or start after ``budget_seconds`` have passed,
are reported as ``skipped``. Informational checks report ``noted`` instead of ``fail``.
"""
import logging
import time
from dataclasses import dataclass, field

from subrings import signals
from subrings.census import (
    BudgetExceeded,
    count_f_n_direct,
    count_f_n_recurrence,
    count_g_alpha,
    count_g_n,
    count_subgroups_direct,
    g_alpha_space,
)
from subrings.core import Composition, Target, compositions
from subrings.fitfind import POLYNOMIAL, QUASIPOLYNOMIAL, format_polynomial, probe_polynomiality
from subrings.formulas import (
    FormulaId,
    corollary_terms,
    eval_formula,
    lemma_placements,
    p_binomial,
    placement_alpha,
    zeta_local_coefficients,
)
from subrings.varieties import count_points, load_system

logger = logging.getLogger(__name__)

__all__ = (
    "SUITES",
    "Check",
    "CheckResult",
    "VerifyContext",
    "run_check",
    "run_suite",
)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
NOTED = "noted"

# The primes the classification examples are sampled at. A degree 5 class of the
# odd primes needs 7 of them, 6 fitted and 1 held out.
CLASSIFICATION_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)

# The (3,2,2,2) censuses at p = 19 search 19^9 assignments.
CLASSIFICATION_BUDGET = 10**12

_LEMMAS = ("lemma_beta4", "lemma_2beta", "lemma_3beta", "lemma_222")
_COROLLARIES = ("cor_2beta", "cor_32", "cor_222")


@dataclass
class VerifyContext:
    """
    The grid a verification run covers, and its limits.
    """

    primes: tuple = (2, 3)
    max_n: int = 5
    max_e: int = 6
    budget: int = None
    threads: int = 1
    budget_seconds: float = None
    classification_budget: int = CLASSIFICATION_BUDGET
    started: float = field(default_factory=time.monotonic)

    def out_of_time(self):
        if self.budget_seconds is None:
            return False
        return time.monotonic() - self.started >= self.budget_seconds


@dataclass(frozen=True)
class Check:
    """
    A lazy comparison. ``expected`` and ``actual`` are called without arguments.
    ``space`` is the largest search space involved, when it's known up front.
    It is compared with ``budget``, or with the budget of the run when that's not set.
    """

    name: str
    params: dict
    prime: int
    expected: object
    actual: object
    informational: bool = False
    space: int = None
    budget: int = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    params: dict
    prime: int
    expected: object
    actual: object
    verdict: str
    reason: str = ""
    elapsed_ms: int = 0

    @property
    def failed(self):
        return self.verdict == FAIL


def run_check(check, context):
    """
    Evaluate one :class:`Check`.

    :rtype: CheckResult
    """
    start = time.monotonic()

    def result(verdict, expected=None, actual=None, reason=""):
        elapsed_ms = int((time.monotonic() - start) * 1000)
        outcome = CheckResult(
            check.name, check.params, check.prime, expected, actual, verdict, reason, elapsed_ms
        )
        signals.check_finished.send(sender=check.name, check=outcome, verdict=verdict)
        return outcome

    if context.out_of_time():
        return result(SKIPPED, reason=f"time budget of {context.budget_seconds}s used up")
    budget = check.budget if check.budget is not None else _budget(context)
    if check.space is not None and check.space > budget:
        return result(SKIPPED, reason=f"search space of {check.space} exceeds {budget}")

    try:
        expected = check.expected()
        actual = check.actual()
    except BudgetExceeded as e:
        return result(SKIPPED, reason=str(e))

    if expected == actual:
        return result(PASS, expected, actual)
    if check.informational:
        return result(NOTED, expected, actual, reason="informational, not a failure")
    logger.warning(
        "Check %s at p=%s failed: expected %s, got %s", check.name, check.prime, expected, actual
    )
    return result(FAIL, expected, actual)


def _budget(context):
    if context.budget is not None:
        return context.budget
    from subrings import appsettings

    return appsettings.SUBRINGS_BUDGET


def _formula(name, p, **params):
    return lambda: eval_formula(FormulaId(name, params), p)


def basic_checks(context):
    c = context
    for p in c.primes:
        yield Check(
            "worked_example",
            {"alpha": "3,2"},
            p,
            expected=lambda p=p: p,
            actual=lambda p=p: count_g_alpha((3, 2), p, budget=c.budget, threads=c.threads),
        )

    for n in range(3, c.max_n + 1):
        for e in range(n + 1):
            if e < n - 1:
                name, params = "g_basic_e_lt", {"n": n, "e": e}
            elif e == n - 1:
                name, params = "g_basic_n_minus_1", {"n": n}
            else:
                name, params = "g_basic_n", {"n": n}
            for p in c.primes:
                yield Check(
                    name,
                    {"n": n, "e": e},
                    p,
                    expected=_formula(name, p, **params),
                    actual=lambda n=n, e=e, p=p: count_g_n(
                        n, e, p, budget=c.budget, threads=c.threads
                    ),
                )

    for n in range(3, c.max_n + 1):
        for p in c.primes:
            yield Check(
                "g_n_plus_1",
                {"n": n},
                p,
                expected=_formula("g_n_plus_1", p, n=n),
                actual=lambda n=n, p=p: count_g_n(
                    n, n + 1, p, budget=c.budget, threads=c.threads
                ),
            )

    for n in range(1, c.max_n + 1):
        for e in range(min(c.max_e, 5) + 1):
            for p in c.primes:
                yield Check(
                    "subgroups",
                    {"n": n, "e": e},
                    p,
                    expected=lambda n=n, e=e, p=p: p_binomial(n - 1 + e, e, p),
                    actual=lambda n=n, e=e, p=p: count_subgroups_direct(n, e, p),
                )

    for e in range(min(c.max_e, 3) + 1):
        for p in c.primes:
            yield Check(
                "recurrence_vs_direct",
                {"n": 3, "e": e},
                p,
                expected=lambda e=e, p=p: count_f_n_recurrence(
                    3, e, p, budget=c.budget, threads=c.threads
                ),
                actual=lambda e=e, p=p: count_f_n_direct(
                    3, e, p, budget=c.budget, threads=c.threads
                ),
            )


def _summed_census(formula_ids, p, context):
    return sum(
        count_g_alpha(placement_alpha(t), p, budget=context.budget, threads=context.threads)
        for t in formula_ids
    )


def lemma_checks(context):
    c = context
    lowest = {"lemma_beta4": 2, "lemma_2beta": 3, "lemma_3beta": 3, "lemma_222": 4}
    for name in _LEMMAS:
        for n in range(lowest[name], c.max_n + 1):
            for formula_id, alpha in lemma_placements(name, n):
                for p in c.primes:
                    yield Check(
                        name,
                        {"alpha": str(Composition(alpha)), **formula_id.params},
                        p,
                        expected=lambda formula_id=formula_id, p=p: eval_formula(formula_id, p),
                        actual=lambda alpha=alpha, p=p: count_g_alpha(
                            alpha, p, budget=c.budget, threads=c.threads
                        ),
                        space=g_alpha_space(alpha, p),
                    )

    for name in _COROLLARIES:
        for n in range(4, c.max_n + 1):
            terms = corollary_terms(name, n)
            for p in c.primes:
                yield Check(
                    f"{name}_sum",
                    {"n": n},
                    p,
                    expected=_formula(name, p, n=n),
                    actual=lambda terms=terms, p=p: sum(eval_formula(t, p) for t in terms),
                )
                yield Check(
                    f"{name}_census",
                    {"n": n},
                    p,
                    expected=_formula(name, p, n=n),
                    actual=lambda terms=terms, p=p: _summed_census(terms, p, c),
                    space=max(g_alpha_space(placement_alpha(t), p) for t in terms),
                )

    for n in range(3, c.max_n + 1):
        for p in c.primes:
            yield Check(
                "g_n_plus_2",
                {"n": n},
                p,
                expected=_formula("g_n_plus_2", p, n=n),
                actual=lambda n=n, p=p: count_g_n(
                    n, n + 2, p, budget=c.budget, threads=c.threads
                ),
            )
            yield Check(
                "g_n_plus_2_closed_form",
                {"n": n},
                p,
                expected=_formula("g_n_plus_2", p, n=n),
                actual=_formula("g_n_plus_2_closed_form", p, n=n),
                informational=True,
            )

    for e in range(1, 6):
        for parts in range(2, e + 1):
            for alpha in compositions(e, parts):
                stripped = alpha.strip_leading_ones()
                if stripped == alpha.parts:
                    continue
                for p in c.primes:
                    if stripped:
                        expected = lambda stripped=stripped, p=p: count_g_alpha(
                            stripped, p, budget=c.budget, threads=c.threads
                        )
                    else:
                        expected = lambda: 1
                    yield Check(
                        "leading_ones",
                        {"alpha": str(alpha)},
                        p,
                        expected=expected,
                        actual=lambda alpha=alpha, p=p: count_g_alpha(
                            alpha, p, budget=c.budget, threads=c.threads
                        ),
                    )


def zeta_checks(context):
    c = context
    for n in (2, 3, 4):
        for p in c.primes:
            coefficients = zeta_local_coefficients(n, p, c.max_e)
            for e in range(c.max_e + 1):
                yield Check(
                    "zeta",
                    {"n": n, "e": e},
                    p,
                    expected=lambda value=coefficients[e]: value,
                    actual=lambda n=n, e=e, p=p: count_f_n_recurrence(
                        n, e, p, budget=c.budget, threads=c.threads
                    ),
                )


def _describe_fit(report):
    if report.verdict != QUASIPOLYNOMIAL:
        return report.verdict
    classes = [
        f"{fit.label}: {format_polynomial(fit.coefficients)}"
        for fit in report.classes
        if not fit.sporadic
    ]
    return f"{report.verdict} mod {report.modulus}; " + "; ".join(classes)


def _classify_target(target, context, budget=None):
    if budget is None:
        budget = context.budget
    return probe_polynomiality(
        target, CLASSIFICATION_PRIMES, budget=budget, threads=context.threads
    )


def example_checks(context):
    c = context
    pinned = {(1, 2): 0}
    for p in c.primes:
        yield Check(
            "pinned_case",
            {"alpha": "2,3,2,2", "pin": "1:2=0"},
            p,
            expected=lambda p=p: p**3 * (2 * p - 1),
            actual=lambda p=p: count_g_alpha(
                (2, 3, 2, 2), p, pinned=pinned, budget=c.budget, threads=c.threads
            ),
        )

    qp_pair = load_system("builtin:qp-pair")
    first_diag_pair = load_system("builtin:first-diag-pair")
    for p in c.primes:
        yield Check(
            "qp_pair",
            {"system": "builtin:qp-pair"},
            p,
            expected=lambda p=p: 8 if p == 2 else 2 * p**3 - 3 * p**2 + 3 * p - 1,
            actual=lambda p=p: count_points(qp_pair, p),
        )
        yield Check(
            "first_diag_pair",
            {"system": "builtin:first-diag-pair"},
            p,
            expected=lambda p=p: 2 * p**2 - p,
            actual=lambda p=p: count_points(first_diag_pair, p),
        )

    odd = format_polynomial((-1, 3, -3, 2))
    qp_target = Target("variety", {"system": "builtin:qp-pair"})
    yield Check(
        "qp_pair_classification",
        {"system": "builtin:qp-pair", "primes": list(CLASSIFICATION_PRIMES)},
        None,
        expected=lambda: f"{QUASIPOLYNOMIAL} mod 2; p = 1 mod 2: {odd}",
        actual=lambda: _describe_fit(_classify_target(qp_target, c)),
    )

    # These run against classification_budget, not the budget of the run.
    alpha = Composition((3, 2, 2, 2))
    space = g_alpha_space(alpha, CLASSIFICATION_PRIMES[-1])
    subset = Target("subset", {"alpha": alpha, "pairs": "3:3,4:4"})
    full = Target("g_alpha", {"alpha": alpha})
    yield Check(
        "diagonal_pairs_classification",
        {"alpha": str(alpha), "pairs": "3:3,4:4", "primes": list(CLASSIFICATION_PRIMES)},
        None,
        expected=lambda: QUASIPOLYNOMIAL,
        actual=lambda: _classify_target(subset, c, budget=c.classification_budget).verdict,
        space=space,
        budget=c.classification_budget,
    )
    yield Check(
        "full_census_classification",
        {"alpha": str(alpha), "primes": list(CLASSIFICATION_PRIMES)},
        None,
        expected=lambda: POLYNOMIAL,
        actual=lambda: _classify_target(full, c, budget=c.classification_budget).verdict,
        space=space,
        budget=c.classification_budget,
    )


SUITES = {
    "basic": basic_checks,
    "lemmas": lemma_checks,
    "zeta": zeta_checks,
    "examples": example_checks,
}


def run_suite(suite, context):
    """
    Run the checks of ``suite`` (or of every suite for ``"all"``) and yield the results.
    """
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"Unknown suite {suite!r}, choose from {', '.join(SUITES)} or all")

    for name in names:
        logger.info("Running the %s checks", name)
        for check in SUITES[name](context):
            yield run_check(check, context)
