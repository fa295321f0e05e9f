"""
The ``subrings`` command: counts, closed forms, zeta coefficients, variety counts,
polynomiality probes and the verification suites.

Every result is written as one report per line. Exit codes: 0 on success, 1 when a
verification check failed, 2 on usage errors, 3 when a search space exceeds its budget.
"""
import argparse
import json
import logging
import time
from functools import partial

from django.core.management.base import BaseCommand, CommandError

from subrings import signals
from subrings.census import (
    BudgetExceeded,
    PairRangeError,
    count_f_n_direct,
    count_f_n_recurrence,
    count_g_alpha,
    count_g_n,
    count_subgroups_direct,
)
from subrings.core import NotPrime, Target
from subrings.fitfind import InsufficientPoints, probe_polynomiality
from subrings.formulas import (
    FORMULAS,
    FormulaId,
    FormulaRangeError,
    UnsupportedFactor,
    eval_formula,
    p_binomial,
    zeta_local_coefficients,
)
from subrings.lattice import AssignmentRangeError
from subrings.reports import ReportWriter, RunReport
from subrings.utils import (
    default_threads,
    parse_alpha,
    parse_pairs,
    parse_pins,
    parse_primes,
)
from subrings.varieties import PolyDocument, SchemaError, count_points, load_system
from subrings.verification import CLASSIFICATION_BUDGET, SUITES, VerifyContext, run_suite

logger = logging.getLogger(__name__)

LOG_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}

FIT_TARGETS = ("g-alpha", "g-n", "f-n", "subgroups", "subset", "variety")

# Errors in the input that only show once the values are combined.
USAGE_ERRORS = (
    AssignmentRangeError,
    FormulaRangeError,
    InsufficientPoints,
    NotPrime,
    PairRangeError,
    SchemaError,
    UnsupportedFactor,
)


def _argument(parse, text):
    try:
        return parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def argument_type(parse, name):
    convert = partial(_argument, parse)
    convert.__name__ = name
    return convert


def _positive(text):
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {value}")
    return value


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise ValueError(f"expected a non-negative integer, got {value}")
    return value


def _prime(text):
    return parse_primes(text)[0]


alpha_type = argument_type(parse_alpha, "alpha")
pairs_type = argument_type(parse_pairs, "pairs")
pins_type = argument_type(parse_pins, "pins")
primes_type = argument_type(parse_primes, "primes")
prime_type = argument_type(_prime, "prime")
positive_type = argument_type(_positive, "positive")
non_negative_type = argument_type(_non_negative, "non-negative")


class Command(BaseCommand):
    help = "Count subring matrices and check the closed forms against exhaustive counts."
    requires_system_checks = []

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument(
            "--format", choices=("json", "csv"), default="json", help="Report format."
        )
        common.add_argument(
            "--threads",
            type=positive_type,
            help="Worker processes, defaults to SUBRINGS_THREADS or the number of CPUs.",
        )
        common.add_argument(
            "--budget", type=positive_type, help="Override the search space budget."
        )

        subparsers = parser.add_subparsers(dest="subcommand", metavar="subcommand")
        subparsers.required = True
        add = partial(
            subparsers.add_parser,
            parents=[common],
            called_from_command_line=getattr(parser, "called_from_command_line", None),
        )

        sub = add("g-alpha", help="Count irreducible subring matrices with diagonal p^alpha.")
        sub.add_argument("--alpha", type=alpha_type, required=True)
        sub.add_argument("--pin", type=pins_type, help="Fix slot values, e.g. 1:2=0.")
        sub.add_argument(
            "--exhaustive",
            action="store_true",
            help="Check every matrix instead of the pruned search.",
        )
        self._add_primes(sub)

        sub = add("g-n", help="Count irreducible subring matrices of index p^e.")
        self._add_index(sub)
        self._add_primes(sub)

        sub = add("f-n", help="Count all subrings of index p^e in Z^n.")
        self._add_index(sub, lowest_n=0)
        sub.add_argument("--method", choices=("recurrence", "direct"), default="recurrence")
        self._add_primes(sub)

        sub = add("subgroups", help="Count the subgroups of index p^e in Z^n.")
        self._add_index(sub)
        sub.add_argument("--method", choices=("formula", "direct"), default="formula")
        self._add_primes(sub)

        sub = add("formula", help="Evaluate a closed form.")
        sub.add_argument("--name", choices=sorted(FORMULAS), required=True)
        for name in ("n", "e", "k", "l", "beta"):
            sub.add_argument(f"--{name}", type=non_negative_type)
        self._add_primes(sub)

        sub = add("zeta", help="Expand the local zeta factor.")
        sub.add_argument("--n", type=positive_type, required=True)
        sub.add_argument("--max-e", type=non_negative_type, default=6)
        self._add_primes(sub)

        sub = add("variety", help="Count the F_p points of a polynomial system.")
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--system", help="A builtin system, e.g. builtin:qp-pair.")
        source.add_argument("--poly-file", help="Path to a polynomial document.")
        source.add_argument(
            "--schema", action="store_true", help="Print the polynomial document schema."
        )
        self._add_primes(sub, required=False)

        sub = add("fit", help="Count a target at several primes and classify the counts.")
        sub.add_argument("--target", choices=FIT_TARGETS, required=True)
        sub.add_argument("--alpha", type=alpha_type)
        sub.add_argument("--pairs", type=pairs_type)
        sub.add_argument("--pin", type=pins_type)
        sub.add_argument("--n", type=non_negative_type)
        sub.add_argument("--e", type=non_negative_type)
        sub.add_argument("--method", choices=("recurrence", "direct", "formula"))
        sub.add_argument("--system")
        sub.add_argument("--poly-file")
        sub.add_argument("--primes", type=primes_type, help="first:K or a list of primes.")
        sub.add_argument("--max-degree", type=non_negative_type)
        sub.add_argument("--max-modulus", type=positive_type)

        sub = add("subset-census", help="Count assignments that only satisfy some products.")
        sub.add_argument("--alpha", type=alpha_type, required=True)
        sub.add_argument("--pairs", type=pairs_type, required=True)
        sub.add_argument("--pin", type=pins_type)
        self._add_primes(sub)

        sub = add("verify", help="Check the closed forms against exhaustive counts.")
        sub.add_argument("--suite", choices=(*SUITES, "all"), default="all")
        sub.add_argument("--max-n", type=positive_type, default=5)
        sub.add_argument("--max-e", type=non_negative_type, default=6)
        sub.add_argument("--primes", type=primes_type, default=[2, 3])
        sub.add_argument(
            "--budget-seconds",
            type=float,
            help="Checks that start after this many seconds are skipped.",
        )
        sub.add_argument(
            "--classification-budget",
            type=positive_type,
            default=CLASSIFICATION_BUDGET,
            help="Search space budget of the (3,2,2,2) classifications.",
        )

    def _add_primes(self, parser, required=True):
        group = parser.add_mutually_exclusive_group(required=required)
        group.add_argument("--prime", type=prime_type)
        group.add_argument("--primes", type=primes_type, help="first:K or a list of primes.")

    def _add_index(self, parser, lowest_n=1):
        n_type = positive_type if lowest_n else non_negative_type
        parser.add_argument("--n", type=n_type, required=True)
        parser.add_argument("--e", type=non_negative_type, required=True)

    def handle(self, *args, **options):
        self.verbosity = options["verbosity"]
        logging.getLogger("subrings").setLevel(LOG_LEVELS.get(self.verbosity, logging.DEBUG))
        self.writer = ReportWriter(self.stdout, options["format"])
        self.budget = options["budget"]
        self.threads = options["threads"] or default_threads()

        subcommand = options["subcommand"]
        handler = getattr(self, "handle_" + subcommand.replace("-", "_"))

        if self.verbosity >= 2:
            signals.census_started.connect(self.on_census_started)
            signals.census_finished.connect(self.on_census_finished)
            signals.check_finished.connect(self.on_check_finished)
        try:
            handler(options)
        except BudgetExceeded as e:
            self.write_budget_report(e)
            raise CommandError(str(e), returncode=3)
        except USAGE_ERRORS as e:
            raise CommandError(str(e), returncode=2)
        finally:
            signals.census_started.disconnect(self.on_census_started)
            signals.census_finished.disconnect(self.on_census_finished)
            signals.check_finished.disconnect(self.on_check_finished)

    def primes(self, options):
        if options.get("prime") is not None:
            return [options["prime"]]
        return options.get("primes")

    def write(self, **fields):
        self.writer.write(RunReport(**fields))

    def timed(self, func, *args, **kwargs):
        start = time.monotonic()
        value = func(*args, **kwargs)
        return value, int((time.monotonic() - start) * 1000)

    def count_options(self):
        return {"budget": self.budget, "threads": self.threads}

    def write_counts(self, target, func, primes, *args, **kwargs):
        for p in primes:
            count, elapsed_ms = self.timed(func, *args, p, **kwargs)
            self.write(
                kind=target.kind,
                params=target.as_json(),
                prime=p,
                count=count,
                elapsed_ms=elapsed_ms,
            )

    def write_budget_report(self, error):
        target = error.target
        detail = {"space": str(error.space), "budget": str(error.budget)}
        if target is not None:
            detail["target"] = target.describe()
        records = error.records
        self.write(
            kind="budget",
            params=target.as_json() if target is not None else {},
            primes=[record.prime for record in records] or None,
            counts=[record.count for record in records] or None,
            verdict="budget-exceeded",
            detail=detail,
        )

    def handle_g_alpha(self, options):
        alpha, pinned = options["alpha"], options["pin"]
        params = {"alpha": alpha}
        if pinned:
            params["pin"] = _pin_text(pinned)
        target = Target("g_alpha", params)
        self.write_counts(
            target,
            count_g_alpha,
            self.primes(options),
            alpha,
            pinned=pinned,
            exhaustive=options["exhaustive"],
            **self.count_options(),
        )

    def handle_g_n(self, options):
        n, e = options["n"], options["e"]
        self.write_counts(
            Target("g_n", {"n": n, "e": e}),
            partial(count_g_n, n, e),
            self.primes(options),
            **self.count_options(),
        )

    def handle_f_n(self, options):
        n, e, method = options["n"], options["e"], options["method"]
        func = count_f_n_direct if method == "direct" else count_f_n_recurrence
        self.write_counts(
            Target("f_n", {"n": n, "e": e, "method": method}),
            partial(func, n, e),
            self.primes(options),
            **self.count_options(),
        )

    def handle_subgroups(self, options):
        n, e, method = options["n"], options["e"], options["method"]
        if method == "direct":
            func = partial(count_subgroups_direct, n, e)
        else:
            func = partial(_subgroups_formula, n, e)
        self.write_counts(
            Target("subgroups", {"n": n, "e": e, "method": method}), func, self.primes(options)
        )

    def handle_formula(self, options):
        params = {
            name: options[name]
            for name in ("n", "e", "k", "l", "beta")
            if options[name] is not None
        }
        formula_id = FormulaId(options["name"], params)
        target = Target("formula", {"name": options["name"], **params})
        self.write_counts(target, partial(eval_formula, formula_id), self.primes(options))

    def handle_zeta(self, options):
        n, max_e = options["n"], options["max_e"]
        for p in self.primes(options):
            coefficients, elapsed_ms = self.timed(zeta_local_coefficients, n, p, max_e)
            for e, count in enumerate(coefficients):
                self.write(
                    kind="zeta",
                    params={"n": n, "e": e},
                    prime=p,
                    count=count,
                    elapsed_ms=elapsed_ms,
                )

    def handle_variety(self, options):
        if options["schema"]:
            self.stdout.write(json.dumps(PolyDocument.model_json_schema(), indent=2))
            return
        primes = self.primes(options)
        if not primes:
            raise CommandError("variety needs --prime or --primes", returncode=2)

        source = options["system"] or options["poly_file"]
        system = self.load_system(options)
        for p in primes:
            count, elapsed_ms = self.timed(count_points, system, p, budget=self.budget)
            self.write(
                kind="variety",
                params={"system": source},
                prime=p,
                count=count,
                elapsed_ms=elapsed_ms,
            )

    def load_system(self, options):
        if options["system"]:
            return load_system(options["system"])
        path = options["poly_file"]
        try:
            with open(path, encoding="utf-8") as document:
                return load_system(document.read())
        except OSError as e:
            raise CommandError(f"Can't read {path}: {e}", returncode=2)

    def fit_target(self, options):
        kind = options["target"]

        def need(*names):
            missing = [name for name in names if options.get(name) is None]
            if missing:
                flags = ", ".join("--" + name.replace("_", "-") for name in missing)
                raise CommandError(f"fit --target {kind} needs {flags}", returncode=2)

        if kind in ("g-alpha", "subset"):
            need("alpha", *(("pairs",) if kind == "subset" else ()))
            params = {"alpha": options["alpha"]}
            if kind == "subset":
                params["pairs"] = str(options["pairs"])
            if options["pin"]:
                params["pin"] = _pin_text(options["pin"])
            return Target("subset" if kind == "subset" else "g_alpha", params)
        if kind == "variety":
            if not options["system"] and not options["poly_file"]:
                raise CommandError(
                    "fit --target variety needs --system or --poly-file", returncode=2
                )
            return Target("variety", {"system": options["system"] or options["poly_file"]})

        need("n", "e")
        params = {"n": options["n"], "e": options["e"]}
        if kind == "f-n":
            params["method"] = options["method"] or "recurrence"
        elif kind == "subgroups":
            params["method"] = options["method"] or "formula"
        return Target(kind.replace("-", "_"), params)

    def handle_fit(self, options):
        from subrings import appsettings

        target = self.fit_target(options)
        if target.kind == "variety" and not target.params["system"].startswith("builtin:"):
            # Read it once, so a bad document fails before any counting starts.
            self.load_system({"system": None, "poly_file": target.params["system"]})
        primes = options["primes"] or parse_primes(
            f"first:{appsettings.SUBRINGS_DEFAULT_PRIME_COUNT}"
        )

        report, elapsed_ms = self.timed(
            probe_polynomiality,
            target,
            primes,
            max_degree=options["max_degree"],
            max_modulus=options["max_modulus"],
            **self.count_options(),
        )
        self.write(
            kind="fit",
            params={"target": target.kind, **target.as_json()},
            primes=[record.prime for record in report.records],
            counts=[record.count for record in report.records],
            verdict=report.verdict,
            detail=report.as_dict(),
            elapsed_ms=elapsed_ms,
        )

    def handle_subset_census(self, options):
        alpha, pairs, pinned = options["alpha"], options["pairs"], options["pin"]
        params = {"alpha": alpha, "pairs": str(pairs)}
        if pinned:
            params["pin"] = _pin_text(pinned)
        self.write_counts(
            Target("subset", params),
            count_g_alpha,
            self.primes(options),
            alpha,
            subset=pairs,
            pinned=pinned,
            **self.count_options(),
        )

    def handle_verify(self, options):
        context = VerifyContext(
            primes=tuple(options["primes"]),
            max_n=options["max_n"],
            max_e=options["max_e"],
            budget=self.budget,
            threads=self.threads,
            budget_seconds=options["budget_seconds"],
            classification_budget=options["classification_budget"],
        )
        verdicts = {}
        failed = []
        for result in run_suite(options["suite"], context):
            verdicts[result.verdict] = verdicts.get(result.verdict, 0) + 1
            if result.failed:
                failed.append(result)
            self.write(
                kind="check",
                params={"check": result.name, **result.params},
                prime=result.prime,
                expected=result.expected,
                actual=result.actual,
                verdict=result.verdict,
                detail={"reason": result.reason} if result.reason else None,
                elapsed_ms=result.elapsed_ms,
            )

        elapsed_ms = int((time.monotonic() - context.started) * 1000)
        self.write(
            kind="verify",
            params={"suite": options["suite"], "primes": list(context.primes)},
            verdict="fail" if failed else "pass",
            detail=verdicts,
            elapsed_ms=elapsed_ms,
        )
        if failed:
            lines = [
                f"{result.name} {result.params} at p={result.prime}: "
                f"expected {result.expected}, got {result.actual}"
                for result in failed
            ]
            raise CommandError(
                f"{len(failed)} checks failed:\n" + "\n".join(lines), returncode=1
            )

    def on_census_started(self, sender, target, prime, space, **kwargs):
        self.stderr.write(f"Counting {target.describe()} at p={prime}, {space} assignments")

    def on_census_finished(self, sender, target, prime, count, elapsed, **kwargs):
        self.stderr.write(f"Counted {target.describe()} at p={prime}: {count} in {elapsed:.2f}s")

    def on_check_finished(self, sender, check, verdict, **kwargs):
        where = f" at p={check.prime}" if check.prime is not None else ""
        self.stderr.write(f"{verdict:>7} {check.name} {check.params}{where}")


def _pin_text(pinned):
    return ",".join(f"{i}:{j}={value}" for (i, j), value in sorted(pinned.items()))


def _subgroups_formula(n, e, p):
    return p_binomial(n - 1 + e, e, p)
