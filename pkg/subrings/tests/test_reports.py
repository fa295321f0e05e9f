import csv
import json
from io import StringIO

from django.test import SimpleTestCase
from pydantic import ValidationError

from subrings.reports import CSV_FIELDS, ReportWriter, RunReport


class RunReportTests(SimpleTestCase):
    def test_large_counts_are_strings(self):
        report = RunReport(kind="g_alpha", prime=2, count=2**80, counts=[1, 2**70])
        data = json.loads(report.as_json())
        self.assertEqual(data["count"], str(2**80))
        self.assertEqual(data["counts"], ["1", str(2**70)])

    def test_none_left_out(self):
        data = json.loads(RunReport(kind="zeta", params={"n": 3}, count=4).as_json())
        self.assertEqual(data, {"kind": "zeta", "params": {"n": 3}, "count": "4", "elapsed_ms": 0})

    def test_unknown_field(self):
        with self.assertRaises(ValidationError):
            RunReport(kind="g_alpha", total=3)

    def test_row(self):
        report = RunReport(
            kind="fit",
            params={"target": "variety"},
            primes=[2, 3],
            counts=[8, 35],
            verdict="quasipolynomial",
        )
        row = report.as_row()
        self.assertEqual(tuple(row), CSV_FIELDS)
        self.assertEqual(row["primes"], "2;3")
        self.assertEqual(row["counts"], "8;35")
        self.assertEqual(row["prime"], "")
        self.assertEqual(json.loads(row["params"]), {"target": "variety"})


class ReportWriterTests(SimpleTestCase):
    def test_json_lines(self):
        stream = StringIO()
        writer = ReportWriter(stream)
        writer.write(RunReport(kind="g_alpha", count=1))
        writer.write(RunReport(kind="g_alpha", count=2))
        lines = stream.getvalue().splitlines()
        self.assertEqual([json.loads(line)["count"] for line in lines], ["1", "2"])

    def test_csv_single_header(self):
        stream = StringIO()
        writer = ReportWriter(stream, "csv")
        writer.write(RunReport(kind="g_n", prime=2, count=1))
        writer.write(RunReport(kind="g_n", prime=3, count=4))
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], ",".join(CSV_FIELDS))
        self.assertEqual(len(lines), 3)
        rows = list(csv.DictReader(StringIO(stream.getvalue())))
        self.assertEqual([(row["prime"], row["count"]) for row in rows], [("2", "1"), ("3", "4")])

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            ReportWriter(StringIO(), "xml")
