"""
Closed-form counts of irreducible subring matrices, Gaussian binomials and the
local zeta factors for ``n <= 4``.

Every closed form is a row in :data:`FORMULAS`: a numerator and denominator written
as sympy expressions in ``p`` and the integer parameters. Evaluation substitutes the
parameters and ``p``, divides exactly, and fails loudly when the quotient is not a
non-negative integer.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import Eq, Piecewise, Poly, Rational, binomial, symbols, sympify

from subrings.core import Composition, check_prime

logger = logging.getLogger(__name__)

__all__ = (
    "FORMULAS",
    "FormulaId",
    "FormulaIntegrityError",
    "FormulaRangeError",
    "LOCAL_FACTORS",
    "NO_FORMULA",
    "UnsupportedFactor",
    "corollary_terms",
    "eval_formula",
    "g_alpha_formula",
    "lemma_placements",
    "placement_alpha",
    "local_factor",
    "match_g_alpha",
    "p_binomial",
    "zeta_local_coefficients",
)

P, T = symbols("p t")
_PARAMS = {name: symbols(name, integer=True) for name in ("n", "e", "k", "l", "beta")}
_NAMESPACE = dict(_PARAMS, p=P, t=T, binomial=binomial, Piecewise=Piecewise, Eq=Eq)


class FormulaRangeError(ValueError):
    """
    Unknown formula name, or parameters outside the range where the formula holds.
    """


class FormulaIntegrityError(ArithmeticError):
    """
    A formula did not evaluate to a non-negative integer, which means a coefficient is wrong.
    """


class UnsupportedFactor(ValueError):
    """
    No local zeta factor is known for this dimension.
    """


class NoFormula:
    # Evaluates as False, like a missing value.

    def __bool__(self):
        return False

    def __repr__(self):
        return "<NoFormula>"


NO_FORMULA = NoFormula()  # sentinel value


@dataclass(frozen=True)
class FormulaId:
    """
    A named formula together with its integer parameters, e.g.
    ``FormulaId("lemma_222", {"n": 5, "k": 1, "l": 2})``.
    """

    name: str
    params: dict = field(default_factory=dict)

    def __str__(self):
        args = ", ".join(f"{key}={value}" for key, value in sorted(self.params.items()))
        return f"{self.name}({args})"


@dataclass(frozen=True)
class Formula:
    counts: str
    params: tuple
    valid: object
    ranges: str
    numerator: str = None
    denominator: str = "1"
    defaults: dict = field(default_factory=dict)
    compute: object = None

    def bind(self, name, given):
        values = dict(self.defaults)
        values.update(given)
        unknown = set(values) - set(self.params)
        if unknown:
            raise FormulaRangeError(f"{name} takes no parameter {', '.join(sorted(unknown))}")
        missing = [param for param in self.params if param not in values]
        if missing:
            raise FormulaRangeError(f"{name} requires {', '.join(missing)}")
        values = {key: int(value) for key, value in values.items()}
        if not self.valid(**values):
            raise FormulaRangeError(f"{name} holds for {self.ranges}, got {_show(values)}")
        return values


def _show(values):
    return ", ".join(f"{key}={value}" for key, value in sorted(values.items()))


def _g_n_plus_2(n, p):
    # Split the compositions by their leading part: 1 leaves g_(n-1)(p^(n+1)), 4 leaves the
    # single-4 shape, 2 is followed by one part >= 3 or by two more 2s, and 3 by one 2.
    total = 1
    for m in range(3, n + 1):
        for name, params in (
            ("lemma_beta4", {"n": m, "beta": 4}),
            ("cor_2beta", {"n": m}),
            ("cor_32", {"n": m}),
            ("cor_222", {"n": m}),
        ):
            total += eval_formula(FormulaId(name, params), p)
    return total


#: One row per closed form.
FORMULAS = {
    "g_basic_e_lt": Formula(
        counts="g_n(p^e) for e < n-1",
        params=("n", "e"),
        valid=lambda n, e: n >= 2 and 0 <= e < n - 1,
        ranges="n >= 2, 0 <= e < n-1",
        numerator="0",
    ),
    "g_basic_n_minus_1": Formula(
        counts="g_n(p^(n-1))",
        params=("n",),
        valid=lambda n: n >= 1,
        ranges="n >= 1",
        numerator="1",
    ),
    "g_basic_n": Formula(
        counts="g_n(p^n)",
        params=("n",),
        valid=lambda n: n >= 1,
        ranges="n >= 1",
        numerator="p**(n-1) - 1",
        denominator="p - 1",
    ),
    "g_n_plus_1": Formula(
        counts="g_n(p^(n+1))",
        params=("n",),
        valid=lambda n: n >= 1,
        ranges="n >= 1",
        numerator=(
            "2*p**(2*n-3) + (n**2-n)*p**(n+1) - (n**2-n)*p**n - (n**2-n+2)*p**(n-1)"
            " + (n**2-n-2)*p**(n-2) + 2"
        ),
        denominator="2*(p-1)**2*(p+1)",
    ),
    "g_n_plus_2": Formula(
        counts="g_n(p^(n+2)), summed over the leading part",
        params=("n",),
        valid=lambda n: n >= 3,
        ranges="n >= 3",
        compute=lambda params, p: _g_n_plus_2(params["n"], p),
    ),
    "g_n_plus_2_closed_form": Formula(
        counts="g_n(p^(n+2)) as a single fraction; agrees with g_n_plus_2 at n = 3 only",
        params=("n",),
        valid=lambda n: n >= 3,
        ranges="n >= 3",
        numerator=(
            "p**(n-5)*(24*p**(2*n-5) - 24*p**(2*n-6) + 24*p**(2*n-7)"
            " + 12*n*(n-1)*p**(n+1) - 12*n*(n-1)*p**n - 24*p**(n-2)"
            " - 12*(n-2)*(n-3)*p**(n-3) + 12*(n-1)*(n-4)*p**(n-4)"
            " + n*(n-1)*(n-2)*(n-3)*p**6 - 4*n*(n-1)**2*(n-5)*p**5"
            " + (7*n**4 - 50*n**3 + 41*n**2 + 98*n - 120)*p**4"
            " - 4*(n-2)*(n+7)*(n**2 - 7*n + 9)*p**3"
            " + (-5*n**4 + 102*n**3 - 619*n**2 + 1482*n - 1200)*p**2"
            " + 4*(n-2)*(n-3)*(n-4)*(2*n-15)*p"
            " - (n-4)*(n-5)*(n-6)*(3*n-5))"
        ),
        denominator="24*(p-1)**2",
    ),
    "lemma_beta4": Formula(
        counts="g_alpha(p) for alpha = (beta, 1, ..., 1), beta >= 3",
        params=("n", "beta"),
        valid=lambda n, beta: n >= 2 and beta >= 3,
        ranges="n >= 2, beta >= 3",
        numerator="(n-1)*p**(n-2)",
        defaults={"beta": 4},
    ),
    "lemma_2beta": Formula(
        counts="g_alpha(p) for alpha = (2, 1, ..., beta, ..., 1) with beta at position k",
        params=("n", "k", "beta"),
        valid=lambda n, k, beta: n >= 3 and 2 <= k <= n - 1 and beta >= 2,
        ranges="n >= 3, 2 <= k <= n-1, beta >= 2",
        numerator=(
            "Piecewise("
            "(p**(2*n-k-4) + (n-k)*p**(n-3)*(p-1), Eq(beta, 2)),"
            "((n-k)*(p**(2*n-k-4) + p**(n-3)*(p-1)), True))"
        ),
    ),
    "lemma_3beta": Formula(
        counts="g_alpha(p) for alpha = (3, 1, ..., beta, ..., 1) with beta at position k+1",
        params=("n", "k", "beta"),
        valid=lambda n, k, beta: n >= 3 and 1 <= k <= n - 2 and beta >= 2,
        ranges="n >= 3, 1 <= k <= n-2, beta >= 2",
        numerator=(
            "Piecewise(("
            "(n-1)*p**(2*n-k-5) + (n-k-1)*(n-2)*p**(n-3)*(p-1) - (n-k-1)*p**(n-3)"
            " + ((n-k-2) + binomial(n-k-2, 2))*p**(n-3)*(p-2)*(p-3),"
            " Eq(beta, 2)),"
            "((n-k-1)*(n-2)*p**(2*n-k-5)"
            " + ((n-k-1)*(k-1) + 1 + (n-k-2)*(n-k-3))*p**(n-3)*(p-1)"
            " + (n-k-2)*p**(n-3)*(p-1)**2 + (n-k-2)*p**(n-2)*(p-1)"
            " + (n-k-2)*(n-k-3)*p**(n-3)*(p-1)*(p-2),"
            " True))"
        ),
    ),
    "lemma_222": Formula(
        counts="g_alpha(p) for alpha with 2 at positions 1, k+1 and l+1, 1 elsewhere",
        params=("n", "k", "l"),
        valid=lambda n, k, l: n >= 4 and 1 <= k < l <= n - 2,
        ranges="n >= 4, 1 <= k < l <= n-2",
        numerator=(
            "p**(3*n-k-l-9) + (n-l-1)*(p-1)*(p+1)*p**(2*n-k-7)"
            " + (n-k-1)*(p-1)*p**(2*n-l-6) - (n-l-1)*p**(n-4)*(p-1)"
            " + (n-k-2)*(n-l-1)*(p-1)**2*p**(n-4)"
            " + ((n-l-2) + binomial(n-l-2, 2))*(p-1)*(p-2)*(p-3)*p**(n-4)"
        ),
    ),
    "cor_2beta": Formula(
        counts="sum of lemma_2beta over 2 <= k <= n-1 for one beta > 2",
        params=("n", "beta"),
        valid=lambda n, beta: n >= 3 and beta >= 3,
        ranges="n >= 3, beta >= 3",
        numerator=(
            "p**(n-3)*((n-2)*p**(n-1) - (n-1)*p**(n-2) + 1)"
            " + (p-1)**3*p**(n-3)*binomial(n-1, 2)"
        ),
        denominator="(p-1)**2",
        defaults={"beta": 3},
    ),
    "cor_32": Formula(
        counts="sum of lemma_3beta with beta = 2 over 1 <= k <= n-2",
        params=("n",),
        valid=lambda n: n >= 3,
        ranges="n >= 3",
        numerator=(
            "6*(n-1)*p**(2*n-5) + (n-1)*(n-2)*(n-3)*p**n - 3*(n-1)*(n-2)*(n-4)*p**(n-1)"
            " + (n-1)*(n-2)*(5*n-24)*p**(n-2) - 3*(n-1)*(n-3)*(n-4)*p**(n-3)"
        ),
        denominator="6*(p-1)",
    ),
    "cor_222": Formula(
        counts="sum of lemma_222 over 1 <= k < l <= n-2",
        params=("n",),
        valid=lambda n: n >= 3,
        ranges="n >= 3",
        numerator=(
            "p**(n-4)*(12*(n-2)*(n-3)*p**(n+1) + 24*p**n - 24*(n-1)*(n-3)*p**(n-1)"
            " - 24*p**(n-2) + 12*n*(n-3)*p**(n-3) + 24*p**(2*n-5)"
            " + (n-1)*(n-2)*(n-3)*(n-4)*p**6 - 4*(n-1)*(n-2)*(n-3)*(n-5)*p**5"
            " + (n-1)*(n-2)*(n-3)*(7*n-44)*p**4 - 4*(n-1)*(n-2)*(n**2-11*n+27)*p**3"
            " - (n-3)*(5*n**3-43*n**2+82*n-56)*p**2 + 4*(n-3)*(2*n**3-19*n**2+46*n-26)*p"
            " - (n-3)*(n-4)*(n-5)*(3*n-2))"
        ),
        denominator="24*(p-1)**2*(p+1)",
    ),
    "g_alpha_ones": Formula(
        counts="g_alpha(p) when at most one part remains after dropping leading 1s",
        params=("n",),
        valid=lambda n: n >= 1,
        ranges="n >= 1",
        numerator="1",
    ),
    "g_alpha_two_ones": Formula(
        counts="g_alpha(p) for alpha = (2, 1, ..., 1)",
        params=("n",),
        valid=lambda n: n >= 2,
        ranges="n >= 2",
        numerator="p**(n-2)",
    ),
}


@lru_cache(maxsize=None)
def _parse(text):
    return sympify(text, locals=_NAMESPACE)


def _as_rational(expr, formula_id, part):
    if not expr.is_Rational:
        raise FormulaIntegrityError(f"The {part} of {formula_id} did not evaluate to a number")
    return Rational(expr)


def eval_formula(formula_id, p):
    """
    Evaluate a closed form at the prime ``p``.

    :type formula_id: FormulaId
    :rtype: int
    """
    check_prime(p)
    try:
        formula = FORMULAS[formula_id.name]
    except KeyError:
        raise FormulaRangeError(f"Unknown formula {formula_id.name!r}") from None
    params = formula.bind(formula_id.name, formula_id.params)

    if formula.compute is not None:
        return formula.compute(params, p)

    subs = {_PARAMS[key]: value for key, value in params.items()}
    subs[P] = p
    numerator = _as_rational(_parse(formula.numerator).subs(subs), formula_id, "numerator")
    denominator = _as_rational(_parse(formula.denominator).subs(subs), formula_id, "denominator")
    value = numerator / denominator
    if not value.is_integer or value < 0:
        raise FormulaIntegrityError(
            f"{formula_id} at p={p} evaluates to {value}, not a non-negative integer"
        )
    return int(value)


def corollary_terms(name, n):
    """
    The lemma evaluations that a corollary adds up.

    :rtype: list[FormulaId]
    """
    if name == "cor_2beta":
        return [FormulaId("lemma_2beta", {"n": n, "k": k, "beta": 3}) for k in range(2, n)]
    elif name == "cor_32":
        return [FormulaId("lemma_3beta", {"n": n, "k": k, "beta": 2}) for k in range(1, n - 1)]
    elif name == "cor_222":
        return [
            FormulaId("lemma_222", {"n": n, "k": k, "l": l})
            for l in range(2, n - 1)
            for k in range(1, l)
        ]
    raise FormulaRangeError(f"{name!r} is not a corollary")


def placement_alpha(formula_id):
    """
    The diagonal whose ``g_alpha(p)`` a lemma evaluation counts.

    :rtype: tuple
    """
    name, params = formula_id.name, formula_id.params
    n = params["n"]
    if name == "lemma_beta4":
        return (params.get("beta", 4),) + (1,) * (n - 2)
    parts = [1] * (n - 1)
    if name == "lemma_2beta":
        parts[0] = 2
        parts[params["k"] - 1] = params["beta"]
    elif name == "lemma_3beta":
        parts[0] = 3
        parts[params["k"]] = params["beta"]
    elif name == "lemma_222":
        parts[0] = parts[params["k"]] = parts[params["l"]] = 2
    else:
        raise FormulaRangeError(f"{name!r} is not a lemma")
    return tuple(parts)


def lemma_placements(name, n, beta_max=4):
    """
    Yield ``(FormulaId, alpha)`` for every diagonal of dimension ``n`` a lemma covers.
    """
    if name == "lemma_beta4":
        ids = [FormulaId(name, {"n": n, "beta": beta}) for beta in range(3, beta_max + 1)]
    elif name == "lemma_2beta":
        ids = [
            FormulaId(name, {"n": n, "k": k, "beta": beta})
            for k in range(2, n)
            for beta in range(2, beta_max + 1)
        ]
    elif name == "lemma_3beta":
        ids = [
            FormulaId(name, {"n": n, "k": k, "beta": beta})
            for k in range(1, n - 1)
            for beta in range(2, beta_max + 1)
        ]
    elif name == "lemma_222":
        ids = [
            FormulaId(name, {"n": n, "k": k, "l": l}) for l in range(2, n - 1) for k in range(1, l)
        ]
    else:
        raise FormulaRangeError(f"{name!r} is not a lemma")

    for formula_id in ids:
        yield formula_id, placement_alpha(formula_id)


def match_g_alpha(alpha):
    """
    Find the formula that covers the diagonal ``alpha``, or ``None``.

    Leading 1s don't change the count, so they are dropped first.
    Positions are converted to the ``k`` convention of each lemma.
    """
    if not isinstance(alpha, Composition):
        alpha = Composition(tuple(alpha))
    parts = alpha.strip_leading_ones()
    if len(parts) <= 1:
        return FormulaId("g_alpha_ones", {"n": alpha.n})

    n = len(parts) + 1
    head = parts[0]
    rest = [(position, part) for position, part in enumerate(parts[1:], start=2) if part > 1]
    if not rest:
        if head == 2:
            return FormulaId("g_alpha_two_ones", {"n": n})
        return FormulaId("lemma_beta4", {"n": n, "beta": head})
    if len(rest) == 1:
        position, beta = rest[0]
        if head == 2:
            return FormulaId("lemma_2beta", {"n": n, "k": position, "beta": beta})
        if head == 3:
            return FormulaId("lemma_3beta", {"n": n, "k": position - 1, "beta": beta})
    if head == 2 and len(rest) == 2 and all(part == 2 for _, part in rest):
        return FormulaId("lemma_222", {"n": n, "k": rest[0][0] - 1, "l": rest[1][0] - 1})
    return None


def g_alpha_formula(alpha, p):
    """
    Evaluate ``g_alpha(p)`` from a closed form, or return :data:`NO_FORMULA`.
    """
    formula_id = match_g_alpha(alpha)
    if formula_id is None:
        return NO_FORMULA
    logger.debug("Diagonal (%s) matches %s", alpha, formula_id)
    return eval_formula(formula_id, p)


def p_binomial(a, b, p):
    """
    The Gaussian binomial coefficient ``[a choose b]`` at ``q = p``.
    """
    if b < 0 or b > a:
        raise FormulaRangeError(f"p_binomial needs 0 <= b <= a, got a={a}, b={b}")
    numerator = denominator = 1
    for i in range(1, b + 1):
        numerator *= p ** (a - b + i) - 1
        denominator *= p**i - 1
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise FormulaIntegrityError(f"[{a} choose {b}] at {p} is not an integer")
    return quotient


@dataclass(frozen=True)
class LocalFactor:
    """
    The local factor at ``p`` of the subring zeta function of ``Z^n``, with ``t = p^-s``.

    ``denominator`` lists ``(a, b)`` for each factor ``1 - p^a t^b``.
    """

    n: int
    numerator: str
    denominator: tuple

    def expression(self):
        expr = _parse(self.numerator)
        for a, b in self.denominator:
            expr = expr / (1 - P**a * T**b)
        return expr


LOCAL_FACTORS = {
    2: LocalFactor(2, "1", ((0, 1),)),
    # zeta(3s-1) zeta(s)^3 / zeta(2s)^2
    3: LocalFactor(3, "(1 - t**2)**2", ((0, 1), (0, 1), (0, 1), (1, 3))),
    4: LocalFactor(
        4,
        "1 + 4*t + 2*t**2 + (4*p-3)*t**3 + (5*p-1)*t**4 + (p**2-5*p)*t**5"
        " + (3*p**2-4*p)*t**6 - 2*p**2*t**7 - 4*p**2*t**8 - p**2*t**9",
        ((0, 1), (0, 1), (2, 4), (3, 6)),
    ),
}


def local_factor(n):
    """
    The local factor as a sympy expression in ``p`` and ``t``.
    """
    try:
        return LOCAL_FACTORS[n].expression()
    except KeyError:
        raise UnsupportedFactor(f"No local factor for n={n}, supported are 2, 3 and 4") from None


def zeta_local_coefficients(n, p, max_e):
    """
    Expand the local factor at ``p`` up to ``t^max_e``.
    Coefficient ``e`` is the number of subrings of index ``p^e`` in ``Z^n``.

    :rtype: list[int]
    """
    check_prime(p)
    try:
        factor = LOCAL_FACTORS[n]
    except KeyError:
        raise UnsupportedFactor(f"No local factor for n={n}, supported are 2, 3 and 4") from None
    if max_e < 0:
        raise ValueError("max_e can't be negative")

    numerator = Poly(_parse(factor.numerator).subs(P, p), T)
    coefficients = [0] * (max_e + 1)
    for (degree,), value in numerator.terms():
        if degree <= max_e:
            coefficients[degree] = int(value)

    # Multiply by 1 / (1 - q t^b) = sum (q t^b)^m, lowest degree first.
    for a, b in factor.denominator:
        q = p**a
        for degree in range(b, max_e + 1):
            coefficients[degree] += q * coefficients[degree - b]

    if coefficients[0] != 1:
        raise FormulaIntegrityError(f"The local factor for n={n} doesn't start with 1")
    return coefficients
