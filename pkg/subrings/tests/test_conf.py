from django.core.exceptions import ImproperlyConfigured
from django.test import SimpleTestCase

from subrings import appsettings
from subrings.census import ALL, PairSubset
from subrings.core import Composition, NotPrime
from subrings.tests.utils import override_subrings_settings
from subrings.utils import (
    default_threads,
    parse_alpha,
    parse_pairs,
    parse_pins,
    parse_primes,
    partitioned_sum,
)
from subrings.utils.conf import validate_settings


def part_size(values, part, parts):
    return sum(1 for value in values if value % parts == part)


class ValidateSettingsTests(SimpleTestCase):
    def test_defaults(self):
        validate_settings(
            SUBRINGS_BUDGET=10**9,
            SUBRINGS_MAX_DEGREE=0,
            SUBRINGS_MAX_MODULUS=2,
            SUBRINGS_THREADS=None,
        )

    def test_invalid(self):
        invalid = [
            {"SUBRINGS_BUDGET": 0},
            {"SUBRINGS_BUDGET": "1000"},
            {"SUBRINGS_BUDGET": True},
            {"SUBRINGS_MAX_DEGREE": -1},
            {"SUBRINGS_MAX_MODULUS": 1},
            {"SUBRINGS_THREADS": 0},
            {"SUBRINGS_DEFAULT_PRIME_COUNT": 2.5},
        ]
        for values in invalid:
            with self.assertRaises(ImproperlyConfigured, msg=values):
                validate_settings(**values)

    def test_override(self):
        with override_subrings_settings(SUBRINGS_THREADS=3):
            self.assertEqual(appsettings.SUBRINGS_THREADS, 3)
            self.assertEqual(default_threads(), 3)
        self.assertNotEqual(appsettings.SUBRINGS_THREADS, 3)


class ParseTests(SimpleTestCase):
    def test_primes(self):
        self.assertEqual(parse_primes("first:6"), [2, 3, 5, 7, 11, 13])
        self.assertEqual(parse_primes("2, 3,7"), [2, 3, 7])
        with self.assertRaises(NotPrime):
            parse_primes("2,4")
        for text in ("first:0", "first:x", "2,,3", "2,3,2"):
            with self.assertRaises(ValueError, msg=text):
                parse_primes(text)

    def test_alpha(self):
        self.assertEqual(parse_alpha("2,3,2,2"), Composition((2, 3, 2, 2)))
        with self.assertRaises(ValueError):
            parse_alpha("2,0")

    def test_pairs(self):
        self.assertEqual(parse_pairs("3:3,4:4"), PairSubset([(3, 3), (4, 4)]))
        self.assertIs(parse_pairs("all"), ALL)

    def test_pins(self):
        self.assertEqual(parse_pins("1:2=0,2:3=1"), {(1, 2): 0, (2, 3): 1})
        for text in ("1:2", "1=0", "a:b=c"):
            with self.assertRaises(ValueError, msg=text):
                parse_pins(text)


class PartitionedSumTests(SimpleTestCase):
    def test_inline(self):
        values = range(100)
        for parts in (1, 2, 7, 16):
            self.assertEqual(partitioned_sum(part_size, (values,), parts), 100)

    def test_workers(self):
        self.assertEqual(partitioned_sum(part_size, (range(50),), 5, threads=2), 50)

    def test_no_parts(self):
        with self.assertRaises(ValueError):
            partitioned_sum(part_size, (range(3),), 0)
