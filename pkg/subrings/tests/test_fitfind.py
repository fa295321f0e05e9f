from django.test import SimpleTestCase
from sympy import Rational

from subrings.census import BudgetExceeded
from subrings.core import Composition, Target, compositions
from subrings.fitfind import (
    EMPIRICAL,
    POLYNOMIAL,
    QUASIPOLYNOMIAL,
    UNDETERMINED,
    InsufficientPoints,
    SamplePoint,
    classify,
    evaluate_target,
    format_polynomial,
    interpolate_exact,
    probe_polynomiality,
)
from subrings.tests.utils import override_subrings_settings, slow_test
from subrings.utils import default_threads
from subrings.verification import CLASSIFICATION_PRIMES

PRIMES = (2, 3, 5, 7, 11, 13)

# Counted by the census at 2..13.
FULL_3222 = {2: 48, 3: 405, 5: 5625, 7: 31213, 11: 307461, 13: 714025}
DIAGONAL_PAIRS_3222 = {2: 64, 3: 639, 5: 9725, 7: 56203, 11: 574871, 13: 1348789}


def sample(func, primes=PRIMES):
    return [SamplePoint(p, func(p)) for p in primes]


def qp_pair_count(p):
    return 8 if p == 2 else 2 * p**3 - 3 * p**2 + 3 * p - 1


def full_3222(p):
    return p**4 * (2 * p - 1)


def diagonal_pairs_3222(p):
    return 64 if p == 2 else 4 * p**5 - 5 * p**4 + 3 * p**3 - p**2


class InterpolationTests(SimpleTestCase):
    def test_exact(self):
        poly = interpolate_exact(sample(lambda p: p**2 + 1), 2)
        self.assertEqual(poly.all_coeffs(), [1, 0, 1])

    def test_rational_coefficients(self):
        poly = interpolate_exact(sample(lambda p: p * (p + 1) // 2), 2)
        self.assertEqual(poly.all_coeffs(), [Rational(1, 2), Rational(1, 2), 0])

    def test_errors(self):
        with self.assertRaises(InsufficientPoints):
            interpolate_exact(sample(lambda p: p, (2, 3)), 2)
        with self.assertRaises(InsufficientPoints):
            interpolate_exact([SamplePoint(2, 1), SamplePoint(2, 1)], 1)
        with self.assertRaises(InsufficientPoints):
            interpolate_exact(sample(lambda p: p), -1)


class ClassifyTests(SimpleTestCase):
    def test_polynomial(self):
        report = classify(sample(lambda p: p**3 - p))
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, -1, 0, 1))
        self.assertEqual(report.degree, 3)
        self.assertEqual(report.fitted, 4)
        self.assertEqual(report.held_out, 2)
        self.assertEqual(report.evaluate(17), 17**3 - 17)
        self.assertEqual(report.as_dict()["polynomial"], "p**3 - p")
        self.assertEqual(report.as_dict()["note"], EMPIRICAL)

    def test_constant(self):
        report = classify(sample(lambda p: 3))
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (3,))

    def test_quasipolynomial(self):
        report = classify(sample(qp_pair_count))
        self.assertEqual(report.verdict, QUASIPOLYNOMIAL)
        self.assertEqual(report.modulus, 2)
        sporadic, odd = report.classes
        self.assertTrue(sporadic.sporadic)
        self.assertEqual(sporadic.primes, (2,))
        self.assertEqual(sporadic.coefficients, (8,))
        self.assertEqual(sporadic.label, "p = 2")
        self.assertEqual(odd.label, "p = 1 mod 2")
        self.assertEqual(odd.primes, (3, 5, 7, 11, 13))
        self.assertEqual(odd.coefficients, (-1, 3, -3, 2))
        self.assertEqual(format_polynomial(odd.coefficients), "2*p**3 - 3*p**2 + 3*p - 1")
        self.assertEqual(report.evaluate(2), 8)
        self.assertEqual(report.evaluate(17), qp_pair_count(17))

    def test_residue_classes(self):
        # p^2 for p = 1 mod 4 and p^2 + 1 for p = 3 mod 4
        primes = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
        report = classify(sample(lambda p: p**2 + (p % 4 == 3), primes))
        self.assertEqual(report.verdict, QUASIPOLYNOMIAL)
        self.assertEqual(report.modulus, 4)
        labels = [fit.label for fit in report.classes]
        self.assertEqual(labels, ["p = 1 mod 4", "p = 2", "p = 3 mod 4"])

    def test_degree_five(self):
        report = classify(sample(lambda p: p**5, CLASSIFICATION_PRIMES))
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, 0, 0, 0, 0, 1))
        self.assertEqual((report.fitted, report.held_out), (6, 2))
        # Six primes can't hold a point out at degree 5.
        report = classify(sample(lambda p: p**5))
        self.assertEqual(report.verdict, UNDETERMINED)
        self.assertEqual(report.max_degree_tried, 4)

    def test_full_census_3222(self):
        self.assertEqual({p: full_3222(p) for p in PRIMES}, FULL_3222)
        report = classify(sample(full_3222, CLASSIFICATION_PRIMES))
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, 0, 0, 0, -1, 2))
        self.assertEqual(classify(sample(FULL_3222.get)).verdict, UNDETERMINED)

    def test_diagonal_pairs_3222(self):
        self.assertEqual({p: diagonal_pairs_3222(p) for p in PRIMES}, DIAGONAL_PAIRS_3222)
        report = classify(sample(diagonal_pairs_3222, CLASSIFICATION_PRIMES))
        self.assertEqual(report.verdict, QUASIPOLYNOMIAL)
        self.assertEqual(report.modulus, 2)
        sporadic, odd = report.classes
        self.assertEqual((sporadic.primes, sporadic.coefficients), ((2,), (64,)))
        self.assertEqual(odd.coefficients, (0, 0, -1, 3, -5, 4))
        self.assertEqual((report.fitted, report.held_out), (6, 1))
        self.assertEqual(classify(sample(DIAGONAL_PAIRS_3222.get)).verdict, UNDETERMINED)

    def test_undetermined(self):
        report = classify(sample(lambda p: 2**p))
        self.assertEqual(report.verdict, UNDETERMINED)
        self.assertIsNone(report.coefficients)
        self.assertIsNone(report.evaluate(17))

    def test_degree_limit(self):
        report = classify(sample(lambda p: p**3 - p), max_degree=2)
        self.assertEqual(report.verdict, UNDETERMINED)
        with override_subrings_settings(SUBRINGS_MAX_DEGREE=2):
            self.assertEqual(classify(sample(lambda p: p**3 - p)).verdict, UNDETERMINED)

    def test_too_few_points(self):
        report = classify(sample(lambda p: p, (2, 3, 5)))
        self.assertEqual(report.verdict, UNDETERMINED)

    def test_repeated_prime(self):
        with self.assertRaises(InsufficientPoints):
            classify([SamplePoint(2, 1), SamplePoint(3, 1), SamplePoint(2, 1), SamplePoint(5, 1)])

    def test_unsorted_points(self):
        points = sample(lambda p: p**2)
        self.assertEqual(classify(reversed(points)).coefficients, (0, 0, 1))


class EvaluateTargetTests(SimpleTestCase):
    def test_kinds(self):
        alpha = Composition((3, 2))
        self.assertEqual(evaluate_target(Target("g_alpha", {"alpha": alpha}), 5), 5)
        self.assertEqual(evaluate_target(Target("g_n", {"n": 3, "e": 3}), 3), 4)
        self.assertEqual(evaluate_target(Target("f_n", {"n": 3, "e": 1}), 5), 3)
        self.assertEqual(
            evaluate_target(Target("f_n", {"n": 3, "e": 1, "method": "direct"}), 5), 3
        )
        for method in ("formula", "direct"):
            target = Target("subgroups", {"n": 2, "e": 1, "method": method})
            self.assertEqual(evaluate_target(target, 7), 8)
        self.assertEqual(
            evaluate_target(Target("variety", {"system": "builtin:qp-pair"}), 3), 35
        )
        self.assertEqual(
            evaluate_target(Target("formula", {"name": "g_basic_n", "n": 3}), 3), 4
        )

    def test_pins_and_pairs(self):
        alpha = Composition((2, 3, 2, 2))
        target = Target("g_alpha", {"alpha": alpha, "pin": "1:2=0"})
        self.assertEqual(evaluate_target(target, 2), 24)
        subset = Target("subset", {"alpha": Composition((3, 2)), "pairs": "1:1"})
        self.assertEqual(evaluate_target(subset, 2), 4)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            evaluate_target(Target("nothing"), 2)


class ProbeTests(SimpleTestCase):
    def test_worked_example(self):
        report = probe_polynomiality(Target("g_alpha", {"alpha": Composition((3, 2))}), PRIMES)
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, 1))
        self.assertEqual([record.count for record in report.records], list(PRIMES))

    def test_formula(self):
        report = probe_polynomiality(Target("formula", {"name": "g_basic_n", "n": 4}), PRIMES)
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (1, 1, 1))

    def test_qp_pair(self):
        report = probe_polynomiality(Target("variety", {"system": "builtin:qp-pair"}), PRIMES)
        self.assertEqual(report.verdict, QUASIPOLYNOMIAL)
        self.assertEqual(report.modulus, 2)

    def test_budget_keeps_records(self):
        target = Target("g_alpha", {"alpha": Composition((3, 2))})
        with self.assertRaises(BudgetExceeded) as cm:
            probe_polynomiality(target, PRIMES, budget=30)
        self.assertEqual([record.prime for record in cm.exception.records], [2, 3, 5])
        self.assertEqual(cm.exception.space, 49)
        self.assertEqual(cm.exception.target, target)

    def test_degree_five_subset(self):
        target = Target("subset", {"alpha": Composition((3, 2, 1)), "pairs": "1:1"})
        report = probe_polynomiality(target, CLASSIFICATION_PRIMES)
        counts = [record.count for record in report.records]
        self.assertEqual(counts, [p**5 for p in CLASSIFICATION_PRIMES])
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, 0, 0, 0, 0, 1))

    def single_pair_verdicts(self, largest_sum, primes=PRIMES, budget=None):
        for e in range(2, largest_sum + 1):
            for parts in range(1, e + 1):
                for alpha in compositions(e, parts):
                    n = alpha.n
                    for j in range(1, n):
                        for i in range(1, j + 1):
                            target = Target("subset", {"alpha": alpha, "pairs": f"{i}:{j}"})
                            report = probe_polynomiality(target, primes, budget=budget)
                            yield target, report.verdict

    def test_single_pairs(self):
        for target, verdict in self.single_pair_verdicts(4):
            self.assertEqual(verdict, POLYNOMIAL, msg=target.describe())

    @slow_test
    def test_single_pairs_larger(self):
        verdicts = self.single_pair_verdicts(6, CLASSIFICATION_PRIMES, budget=10**8)
        for target, verdict in verdicts:
            self.assertEqual(verdict, POLYNOMIAL, msg=target.describe())

    @slow_test
    def test_3222_censuses(self):
        alpha = Composition((3, 2, 2, 2))
        options = {"budget": 10**12, "threads": default_threads()}
        target = Target("g_alpha", {"alpha": alpha})
        report = probe_polynomiality(target, CLASSIFICATION_PRIMES, **options)
        self.assertEqual(report.verdict, POLYNOMIAL)
        self.assertEqual(report.coefficients, (0, 0, 0, 0, -1, 2))
        target = Target("subset", {"alpha": alpha, "pairs": "3:3,4:4"})
        report = probe_polynomiality(target, CLASSIFICATION_PRIMES, **options)
        counts = {record.prime: record.count for record in report.records}
        self.assertEqual({p: counts[p] for p in PRIMES}, DIAGONAL_PAIRS_3222)
        self.assertEqual(report.verdict, QUASIPOLYNOMIAL)
        self.assertEqual(report.modulus, 2)
