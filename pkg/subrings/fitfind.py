"""
Telling whether a count, as a function of the prime ``p``, looks polynomial.

The counts are fitted with exact rational interpolation on the smallest primes and checked
on all remaining ones. When no single polynomial fits, the primes are split by residue
class modulo ``N`` and each class is fitted on its own. Primes that divide ``N`` have a
class to themselves and are recorded as they are.

A verdict only describes the primes that were sampled.
"""
import logging
from dataclasses import dataclass, field, replace
from math import gcd

from sympy import Poly, Rational, interpolate, symbols

from subrings.census import (
    ALL,
    BudgetExceeded,
    PairSubset,
    count_f_n_direct,
    count_f_n_recurrence,
    count_g_alpha,
    count_g_n,
    count_subgroups_direct,
)
from subrings.core import CountRecord, check_prime
from subrings.formulas import FormulaId, eval_formula, p_binomial
from subrings.utils.conf import parse_pins
from subrings.varieties import count_points, load_system

logger = logging.getLogger(__name__)

__all__ = (
    "ClassFit",
    "FitReport",
    "InsufficientPoints",
    "SamplePoint",
    "classify",
    "evaluate_target",
    "interpolate_exact",
    "probe_polynomiality",
)

P = symbols("p")

POLYNOMIAL = "polynomial"
QUASIPOLYNOMIAL = "quasipolynomial"
UNDETERMINED = "undetermined"

EMPIRICAL = "empirical at the sampled primes"


class InsufficientPoints(ValueError):
    """
    Fewer points than the requested degree needs, or repeated primes.
    """


@dataclass(frozen=True)
class SamplePoint:
    p: int
    count: int


@dataclass(frozen=True)
class ClassFit:
    """
    The polynomial of one residue class ``p = residue (mod modulus)``.
    ``sporadic`` classes hold a single prime dividing the modulus, with its count as constant.
    """

    residue: int
    modulus: int
    primes: tuple
    coefficients: tuple
    sporadic: bool = False

    @property
    def label(self):
        if self.sporadic:
            return f"p = {self.primes[0]}"
        return f"p = {self.residue} mod {self.modulus}"

    def as_dict(self):
        return {
            "class": self.label,
            "primes": list(self.primes),
            "polynomial": format_polynomial(self.coefficients),
            "coefficients": [str(c) for c in self.coefficients],
        }


@dataclass(frozen=True)
class FitReport:
    """
    The outcome of :func:`classify`.
    ``coefficients`` run from the constant term upwards.
    """

    verdict: str
    points: tuple
    coefficients: tuple = None
    modulus: int = None
    classes: tuple = ()
    fitted: int = 0
    held_out: int = 0
    max_degree_tried: int = 0
    records: tuple = field(default=(), compare=False)

    @property
    def degree(self):
        if self.coefficients is None:
            return None
        return len(self.coefficients) - 1

    def evaluate(self, p):
        """
        Evaluate the fitted (quasi)polynomial at ``p``.
        """
        if self.verdict == POLYNOMIAL:
            return _evaluate(self.coefficients, p)
        if self.verdict == QUASIPOLYNOMIAL:
            for fit in self.classes:
                if fit.sporadic and fit.primes[0] == p:
                    return fit.coefficients[0]
            for fit in self.classes:
                if not fit.sporadic and p % fit.modulus == fit.residue:
                    return _evaluate(fit.coefficients, p)
        return None

    def as_dict(self):
        data = {
            "verdict": self.verdict,
            "note": EMPIRICAL,
            "primes": [point.p for point in self.points],
            "fitted": self.fitted,
            "held_out": self.held_out,
            "max_degree_tried": self.max_degree_tried,
        }
        if self.verdict == POLYNOMIAL:
            data["polynomial"] = format_polynomial(self.coefficients)
            data["coefficients"] = [str(c) for c in self.coefficients]
        elif self.verdict == QUASIPOLYNOMIAL:
            data["modulus"] = self.modulus
            data["classes"] = [fit.as_dict() for fit in self.classes]
        return data


def format_polynomial(coefficients):
    expr = sum(Rational(c) * P**i for i, c in enumerate(coefficients))
    return str(expr)


def _evaluate(coefficients, p):
    value = sum(Rational(c) * p**i for i, c in enumerate(coefficients))
    return int(value) if value.is_integer else value


def interpolate_exact(points, degree):
    """
    The polynomial of degree at most ``degree`` through the first ``degree + 1`` points.

    :rtype: sympy.Poly
    """
    if degree < 0:
        raise InsufficientPoints("The degree can't be negative")
    chosen = list(points)[: degree + 1]
    if len(chosen) < degree + 1:
        raise InsufficientPoints(f"Degree {degree} needs {degree + 1} points, got {len(chosen)}")
    if len({point.p for point in chosen}) != len(chosen):
        raise InsufficientPoints("The primes of the fitted points must be distinct")
    expr = interpolate([(point.p, point.count) for point in chosen], P)
    return Poly(expr, P, domain="QQ")


def _coefficients(poly):
    return tuple(Rational(c) for c in reversed(poly.all_coeffs()))


def _fit(points, max_degree):
    """
    Find the lowest degree that fits on the first points and matches all others,
    keeping at least one point for validation.
    """
    for degree in range(max_degree + 1):
        if len(points) < degree + 2:
            break
        poly = interpolate_exact(points, degree)
        if all(poly.eval(point.p) == point.count for point in points):
            return degree, _coefficients(poly)
    return None


def classify(points, max_degree=None, max_modulus=None):
    """
    Decide whether the sampled counts are a polynomial or quasipolynomial in ``p``.

    :rtype: FitReport
    """
    from subrings import appsettings

    if max_degree is None:
        max_degree = appsettings.SUBRINGS_MAX_DEGREE
    if max_modulus is None:
        max_modulus = appsettings.SUBRINGS_MAX_MODULUS

    points = tuple(sorted(points, key=lambda point: point.p))
    if len({point.p for point in points}) != len(points):
        raise InsufficientPoints("Every prime may only be sampled once")
    tried = min(max_degree, len(points) - 2)
    if len(points) < 4:
        return FitReport(UNDETERMINED, points, max_degree_tried=max(tried, 0))

    found = _fit(points, max_degree)
    if found is not None:
        degree, coefficients = found
        return FitReport(
            POLYNOMIAL,
            points,
            coefficients=coefficients,
            fitted=degree + 1,
            held_out=len(points) - degree - 1,
            max_degree_tried=degree,
        )

    for modulus in range(2, max_modulus + 1):
        report = _fit_classes(points, modulus, max_degree)
        if report is not None:
            logger.debug("Counts are quasipolynomial modulo %d", modulus)
            return report

    return FitReport(UNDETERMINED, points, max_degree_tried=tried)


def _fit_classes(points, modulus, max_degree):
    classes = []
    fitted = held_out = 0
    top = 0
    for residue in range(modulus):
        members = tuple(point for point in points if point.p % modulus == residue)
        if gcd(residue, modulus) != 1:
            # Only a prime dividing the modulus can be in here.
            for point in members:
                classes.append(ClassFit(residue, modulus, (point.p,), (point.count,), True))
            continue
        if len(members) < 2:
            return None
        found = _fit(members, max_degree)
        if found is None:
            return None
        degree, coefficients = found
        top = max(top, degree)
        fitted += degree + 1
        held_out += len(members) - degree - 1
        classes.append(
            ClassFit(residue, modulus, tuple(point.p for point in members), coefficients)
        )
    return FitReport(
        QUASIPOLYNOMIAL,
        points,
        modulus=modulus,
        classes=tuple(classes),
        fitted=fitted,
        held_out=held_out,
        max_degree_tried=top,
    )


def evaluate_target(target, p, budget=None, threads=1):
    """
    Compute the count described by a :class:`~subrings.core.Target` at ``p``.
    """
    check_prime(p)
    params = target.params
    kind = target.kind
    if kind in ("g_alpha", "subset"):
        pairs = params.get("pairs", ALL)
        if isinstance(pairs, str):
            pairs = PairSubset.parse(pairs)
        pinned = params.get("pin")
        if isinstance(pinned, str):
            pinned = parse_pins(pinned)
        return count_g_alpha(
            params["alpha"], p, subset=pairs, pinned=pinned, budget=budget, threads=threads
        )
    elif kind == "g_n":
        return count_g_n(params["n"], params["e"], p, budget=budget, threads=threads)
    elif kind == "f_n":
        if params.get("method", "recurrence") == "direct":
            return count_f_n_direct(params["n"], params["e"], p, budget=budget, threads=threads)
        return count_f_n_recurrence(params["n"], params["e"], p, budget=budget, threads=threads)
    elif kind == "subgroups":
        n, e = params["n"], params["e"]
        if params.get("method", "formula") == "direct":
            return count_subgroups_direct(n, e, p)
        return p_binomial(n - 1 + e, e, p)
    elif kind == "variety":
        system = params["system"]
        if isinstance(system, str) and not system.startswith("builtin:"):
            with open(system, encoding="utf-8") as document:
                system = document.read()
        return count_points(load_system(system), p, budget=budget)
    elif kind == "formula":
        name = params["name"]
        args = {key: value for key, value in params.items() if key != "name"}
        return eval_formula(FormulaId(name, args), p)
    raise ValueError(f"Unknown target kind {kind!r}")


def probe_polynomiality(target, primes, max_degree=None, max_modulus=None, **kwargs):
    """
    Count ``target`` at every prime and classify the result.

    When a prime exceeds the budget, the :class:`~subrings.census.BudgetExceeded`
    error carries the records of the primes that were already counted.
    """
    records = []
    for p in primes:
        try:
            count = evaluate_target(target, p, **kwargs)
        except BudgetExceeded as e:
            raise BudgetExceeded(e.space, e.budget, target, records) from e
        records.append(CountRecord(target, p, count))

    points = [SamplePoint(record.prime, record.count) for record in records]
    report = classify(points, max_degree=max_degree, max_modulus=max_modulus)
    return replace(report, records=tuple(records))
