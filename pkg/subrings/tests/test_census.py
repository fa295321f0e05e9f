from django.test import SimpleTestCase

from subrings import signals
from subrings.census import (
    ALL,
    BudgetExceeded,
    PairRangeError,
    PairSubset,
    count_f_n_direct,
    count_f_n_recurrence,
    count_g_alpha,
    count_g_n,
    count_subgroups_direct,
    g_alpha_space,
    subset_census,
)
from subrings.core import Composition, compositions
from subrings.formulas import FormulaId, eval_formula, p_binomial
from subrings.lattice import AssignmentRangeError
from subrings.tests.utils import override_subrings_settings, slow_test


def small_compositions(largest_sum):
    for e in range(1, largest_sum + 1):
        for parts in range(1, e + 1):
            yield from compositions(e, parts)


class PairSubsetTests(SimpleTestCase):
    def test_parse(self):
        self.assertIs(PairSubset.parse("all"), ALL)
        subset = PairSubset.parse("4:4, 3:3")
        self.assertEqual(subset.pairs, frozenset({(3, 3), (4, 4)}))
        self.assertEqual(str(subset), "3:3,4:4")
        self.assertIn((3, 3), subset)
        self.assertNotIn((1, 1), subset)
        self.assertIn((1, 1), ALL)

    def test_invalid(self):
        for text in ("3", "a:b", "1:2:3"):
            with self.assertRaises(PairRangeError, msg=text):
                PairSubset.parse(text)
        with self.assertRaises(PairRangeError):
            PairSubset([(3, 6)]).validate(5)
        with self.assertRaises(PairRangeError):
            PairSubset([(2, 1)]).validate(5)

    def test_enforced(self):
        self.assertEqual(ALL.enforced(3), [(0, 0), (0, 1), (1, 1)])
        self.assertEqual(len(ALL.enforced(3, irreducible=False)), 6)
        self.assertEqual(PairSubset([(2, 2), (1, 2)]).enforced(4), [(0, 1), (1, 1)])
        # the all-ones column is never checked
        self.assertEqual(PairSubset([(1, 4)]).enforced(4), [])


class CountGAlphaTests(SimpleTestCase):
    def test_worked_example(self):
        for p in (2, 3, 5, 7, 11):
            self.assertEqual(count_g_alpha((3, 2), p), p)

    def test_all_ones(self):
        for n in range(2, 7):
            self.assertEqual(count_g_alpha((1,) * (n - 1), 5), 1)

    def test_known_shapes(self):
        self.assertEqual(count_g_alpha((3, 3), 3), 3)
        self.assertEqual(count_g_alpha((2, 2), 5), 5)
        self.assertEqual(count_g_alpha(Composition((3, 3, 1)), 2), 2 * 8 + 2 * 4)

    def test_pinned_case(self):
        for p in (2, 3):
            count = count_g_alpha((2, 3, 2, 2), p, pinned={(1, 2): 0})
            self.assertEqual(count, p**3 * (2 * p - 1))

    def test_pinned_invalid(self):
        with self.assertRaises(AssignmentRangeError):
            count_g_alpha((2, 3, 2, 2), 3, pinned={(1, 2): 3})
        with self.assertRaises(AssignmentRangeError):
            count_g_alpha((2, 3, 2, 2), 3, pinned={(1, 5): 0})

    def test_exhaustive_agrees(self):
        for alpha in small_compositions(6):
            for p in (2, 3):
                self.assertEqual(
                    count_g_alpha(alpha, p),
                    count_g_alpha(alpha, p, exhaustive=True),
                    msg=f"alpha=({alpha}), p={p}",
                )

    def test_leading_ones(self):
        for alpha in small_compositions(5):
            for p in (2, 3, 5):
                self.assertEqual(
                    count_g_alpha((1,) + alpha.parts, p),
                    count_g_alpha(alpha, p),
                    msg=f"alpha=({alpha}), p={p}",
                )

    def test_partitions(self):
        expected = count_g_alpha((2, 3, 2, 2), 3)
        for parts in (1, 2, 7, 16):
            self.assertEqual(count_g_alpha((2, 3, 2, 2), 3, partitions=parts), expected)

    def test_worker_processes(self):
        pinned = {(1, 2): 0}
        self.assertEqual(
            count_g_alpha((2, 3, 2, 2), 5, pinned=pinned, threads=2, partitions=4),
            5**3 * 9,
        )

    def test_budget(self):
        with self.assertRaises(BudgetExceeded) as cm:
            count_g_alpha((3, 2, 2, 2), 13, budget=1000)
        self.assertEqual(cm.exception.space, 13**9)
        self.assertEqual(cm.exception.space, g_alpha_space((3, 2, 2, 2), 13))
        self.assertEqual(cm.exception.budget, 1000)
        self.assertIn(str(13**9), str(cm.exception))

    def test_budget_setting(self):
        with override_subrings_settings(SUBRINGS_BUDGET=10):
            with self.assertRaises(BudgetExceeded):
                count_g_alpha((3, 2), 5)
            self.assertEqual(count_g_alpha((3, 2), 5, budget=25), 5)

    def test_signals(self):
        received = []

        def receiver(sender, **kwargs):
            received.append((sender, kwargs["prime"]))

        signals.census_finished.connect(receiver)
        try:
            count_g_alpha((3, 2), 3)
        finally:
            signals.census_finished.disconnect(receiver)
        self.assertEqual(received, [("g_alpha", 3)])


class SubsetCensusTests(SimpleTestCase):
    def test_all_pairs_match(self):
        for alpha in small_compositions(6):
            n = alpha.n
            every = PairSubset([(i, j) for j in range(1, n + 1) for i in range(1, j + 1)])
            for p in (2, 3):
                self.assertEqual(
                    count_g_alpha(alpha, p), subset_census(alpha, p, every), msg=str(alpha)
                )

    def test_empty_subset(self):
        alpha = Composition((2, 3, 2))
        self.assertEqual(subset_census(alpha, 3, []), g_alpha_space(alpha, 3))

    def test_monotonic(self):
        alpha = (3, 2, 2)
        smaller = PairSubset([(2, 2)])
        larger = PairSubset([(2, 2), (3, 3)])
        for p in (2, 3):
            counts = [subset_census(alpha, p, s) for s in (smaller, larger, ALL)]
            self.assertGreaterEqual(counts[0], counts[1])
            self.assertGreaterEqual(counts[1], counts[2])

    def test_exhaustive_agrees(self):
        subset = PairSubset([(3, 3), (4, 4)])
        for p in (2, 3):
            self.assertEqual(
                subset_census((3, 2, 2, 2), p, subset),
                subset_census((3, 2, 2, 2), p, subset, exhaustive=True),
            )

    def test_invalid_pairs(self):
        with self.assertRaises(PairRangeError):
            subset_census((3, 2), 2, [(1, 4)])


class CountGnTests(SimpleTestCase):
    def test_small_indices(self):
        for p in (2, 3, 5):
            self.assertEqual(count_g_n(4, 2, p), 0)
            self.assertEqual(count_g_n(4, 3, p), 1)
        self.assertEqual(count_g_n(3, 3, 3), 4)
        self.assertEqual(count_g_n(1, 0, 2), 1)
        self.assertEqual(count_g_n(1, 3, 2), 0)

    def test_sum_of_compositions(self):
        for n, e in ((3, 4), (4, 5)):
            expected = sum(count_g_alpha(alpha, 2) for alpha in compositions(e, n - 1))
            self.assertEqual(count_g_n(n, e, 2), expected)

    def test_index_n_plus_1(self):
        self.assertEqual(
            count_g_n(4, 5, 2), eval_formula(FormulaId("g_n_plus_1", {"n": 4}), 2)
        )

    def test_invalid(self):
        with self.assertRaises(ValueError):
            count_g_n(0, 2, 2)
        with self.assertRaises(ValueError):
            count_g_n(3, -1, 2)


class CountFnTests(SimpleTestCase):
    def test_base_case(self):
        for p in (2, 3):
            self.assertEqual(count_f_n_recurrence(0, 0, p), 1)
            self.assertEqual(count_f_n_recurrence(0, 2, p), 0)
            self.assertEqual(count_f_n_direct(0, 0, p), 1)
            self.assertEqual(count_f_n_direct(0, 2, p), 0)

    def test_rank_two(self):
        for p in (2, 3, 5):
            for e in range(7):
                self.assertEqual(count_f_n_recurrence(2, e, p), 1)
        self.assertEqual(count_f_n_direct(2, 3, 2), 1)

    def test_rank_three(self):
        self.assertEqual(count_f_n_recurrence(3, 1, 5), 3)
        self.assertEqual(count_f_n_direct(3, 1, 5), 3)
        self.assertEqual(count_f_n_direct(3, 0, 5), 1)

    def test_recurrence_matches_direct(self):
        for p in (2, 3):
            for e in range(4):
                self.assertEqual(
                    count_f_n_recurrence(3, e, p), count_f_n_direct(3, e, p), msg=(p, e)
                )

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            count_f_n_direct(4, 6, 5, budget=100)
        with self.assertRaises(BudgetExceeded):
            count_f_n_recurrence(5, 9, 5, budget=100)

    @slow_test
    def test_rank_four(self):
        for e in range(4):
            self.assertEqual(count_f_n_recurrence(4, e, 2), count_f_n_direct(4, e, 2))


class SubgroupTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(count_subgroups_direct(2, 1, 7), 8)
        self.assertEqual(count_subgroups_direct(3, 0, 5), 1)

    def test_gaussian_binomial(self):
        for n in range(1, 6):
            for e in range(6):
                for p in (2, 3, 5, 7):
                    self.assertEqual(
                        count_subgroups_direct(n, e, p), p_binomial(n - 1 + e, e, p)
                    )
