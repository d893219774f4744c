"""
Tests for the characterization tests, the sweep report and the floorplan model.
"""

import json
import math
from dataclasses import replace

from django.test import SimpleTestCase

from compiler_modules.characterize import (
    DEFAULT_SUITE,
    TEST_NAMES,
    characterize_sweep,
    format_report_table,
    report_to_json,
    run_r_tests,
    run_w_tests,
    write_test_session,
)
from compiler_modules.floorplan import estimate_area
from compiler_modules.geometry import validate_geometry
from compiler_modules.technology import DEFAULT_CORNERS, default_profile


class WriteTestsTestCase(SimpleTestCase):
    """Test cases for W1 and W2."""

    def test_matches_closed_form_rc(self):
        """Test the checked V_PN equals the single-pole response at the worst-case word."""
        g = validate_geometry(32, 32, 4)
        t = default_profile()
        results, sim = write_test_session(g, t, 25e6, DEFAULT_CORNERS["TT"])
        self.assertEqual((results[0].x, results[0].y), (6, 31))

        segments = 32 + 6 * 4
        self.assertEqual(segments, 56)
        r_series = t.r_driver + t.r_mux_on + t.r_line_per_cell * segments
        r_cell = t.r_on_access + 1e6
        tau = (r_series * r_cell / (r_series + r_cell)) * t.c_line_per_cell * segments
        magnitude = t.vddw * r_cell / (r_cell + r_series) * (1 - math.exp(-0.4 / 25e6 / tau))

        writes = [rec for rec in sim.records if rec["op"] == "write"]
        self.assertEqual([w["data"] for w in writes], ["1010", "0101"])
        for bit in writes[0]["bits"]:
            expected = -magnitude if bit["bit"] in (1, 3) else magnitude
            self.assertTrue(math.isclose(bit["vpn"], expected, rel_tol=1e-9), bit)

    def test_heavy_line_fails(self):
        t = replace(default_profile(), c_line_per_cell=default_profile().c_line_per_cell * 100)
        results = run_w_tests(validate_geometry(32, 32, 4), t, 25e6, DEFAULT_CORNERS["TT"])
        self.assertEqual([r.passed for r in results], [False, False])
        self.assertLess(results[0].worst_margin, 0)

    def test_write_boundary_at_slow_clock(self):
        """Test 8 kb arrays write at 12.5 MHz on every corner and 16 kb arrays do not."""
        t = default_profile()
        for corner in DEFAULT_CORNERS.values():
            for B in (4, 8, 16):
                passing = run_w_tests(validate_geometry(128, 64, B), t, 12.5e6, corner)
                failing = run_w_tests(validate_geometry(256, 64, B), t, 12.5e6, corner)
                self.assertTrue(all(r.passed for r in passing), f"128x64x{B} {corner.name}")
                self.assertFalse(any(r.passed for r in failing), f"256x64x{B} {corner.name}")

    def test_fast_clock_fails_large_array(self):
        results = run_w_tests(validate_geometry(128, 64, 4), default_profile(), 25e6, DEFAULT_CORNERS["TT"])
        self.assertFalse(all(r.passed for r in results))


class ReadTestsTestCase(SimpleTestCase):
    """Test cases for R1 and R2."""

    def test_small_array_reads_at_every_corner(self):
        g = validate_geometry(32, 32, 4)
        for corner in DEFAULT_CORNERS.values():
            results = run_r_tests(g, default_profile(), 25e6, corner)
            self.assertEqual([r.name for r in results], ["R1", "R2"])
            self.assertEqual([r.data for r in results], ["0101", "1010"], corner.name)
            for r in results:
                self.assertTrue(r.passed, f"{r.name} {corner.name}")
                self.assertGreater(r.worst_margin, 0)
                self.assertEqual((r.x, r.y), (7, 31))

    def test_typical_corner_reads_whole_suite(self):
        for dims in DEFAULT_SUITE:
            results = run_r_tests(validate_geometry(*dims), default_profile(), 12.5e6, DEFAULT_CORNERS["TT"])
            self.assertTrue(all(r.passed for r in results), dims)

    def test_wide_words_fail_at_fast_nmos_corners(self):
        """Test 16-bit words lose the sense race once the sense offset grows."""
        g = validate_geometry(128, 64, 16)
        for name in ("FS", "FF"):
            results = run_r_tests(g, default_profile(), 12.5e6, DEFAULT_CORNERS[name])
            self.assertFalse(any(r.passed for r in results), name)
        for name in ("TT", "SF"):
            results = run_r_tests(g, default_profile(), 12.5e6, DEFAULT_CORNERS[name])
            self.assertTrue(all(r.passed for r in results), name)
        for dims in ((64, 64, 8), (128, 64, 8)):
            results = run_r_tests(validate_geometry(*dims), default_profile(), 12.5e6, DEFAULT_CORNERS["FS"])
            self.assertTrue(all(r.passed for r in results), dims)

    def test_ratio_range(self):
        with self.assertRaises(ValueError):
            run_r_tests(validate_geometry(8, 8, 2), default_profile(), 12.5e6, DEFAULT_CORNERS["TT"], ratio=1.0)


class SweepTestCase(SimpleTestCase):
    """Test cases for characterize_sweep and the report formats."""

    def setUp(self):
        self.configs = [(validate_geometry(32, 32, 4), 25e6), (validate_geometry(8, 8, 2), 12.5e6)]
        self.corners = [DEFAULT_CORNERS["TT"], DEFAULT_CORNERS["FS"]]

    def test_row_order(self):
        report = characterize_sweep(self.configs, default_profile(), self.corners)
        keys = [(r.M, r.corner, r.test) for r in report.rows]
        expected = [(M, c, name) for M in (32, 8) for c in ("TT", "FS") for name in TEST_NAMES]
        self.assertEqual(keys, expected)
        self.assertTrue(report.all_passed)

    def test_report_is_deterministic(self):
        first = report_to_json(characterize_sweep(self.configs, default_profile(), self.corners))
        second = report_to_json(characterize_sweep(self.configs, default_profile(), self.corners))
        self.assertEqual(first, second)
        data = json.loads(first)
        self.assertEqual(data["schema_version"], 1)
        self.assertEqual(data["summary"]["rows"], 16)

    def test_workers_keep_row_order(self):
        serial = characterize_sweep(self.configs, default_profile(), self.corners)
        pooled = characterize_sweep(self.configs, default_profile(), self.corners, workers=2)
        self.assertEqual(serial.rows, pooled.rows)

    def test_cell_error_becomes_rows(self):
        report = characterize_sweep(self.configs[:1], default_profile(), self.corners[:1], ratio=1.5)
        self.assertEqual(len(report.rows), 4)
        for row in report.rows:
            self.assertFalse(row.passed)
            self.assertIn("resistance ratio", row.error)
        self.assertIn("ERROR", format_report_table(report))
        self.assertEqual(report.summary()["errors"], 4)

    def test_empty_sweep(self):
        with self.assertRaises(ValueError):
            characterize_sweep([], default_profile(), self.corners)

    def test_table_lists_every_row(self):
        table = format_report_table(characterize_sweep(self.configs[:1], default_profile(), self.corners[:1]))
        self.assertEqual(table.count("M32_N32_B4"), 4)
        self.assertIn("4 rows: 4 passed, 0 failed, 0 errors", table)


class FloorplanTestCase(SimpleTestCase):

    def test_reference_layout(self):
        area = estimate_area(validate_geometry(64, 64, 8), default_profile())
        self.assertAlmostEqual(area.width * 1e6, 524.3, delta=52.43)
        self.assertAlmostEqual(area.height * 1e6, 353.5, delta=35.35)

    def test_density_anchor(self):
        area = estimate_area(validate_geometry(128, 64, 8), default_profile())
        self.assertAlmostEqual(area.density, 0.024, delta=0.024 * 0.15)

    def test_density_grows_with_capacity(self):
        small = estimate_area(validate_geometry(32, 32, 4), default_profile())
        large = estimate_area(validate_geometry(128, 64, 4), default_profile())
        self.assertGreater(large.density, small.density)
        self.assertEqual(set(small.as_dict()), {"width_um", "height_um", "area_mm2", "density_mb_per_mm2"})
