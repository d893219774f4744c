"""
Tests for the calibration solvers.
"""

import math

from django.test import SimpleTestCase

from compiler_modules.calibration import (
    calibrate_bundle,
    round_sig,
    solve_floorplan,
    solve_write_boundary,
    verify_write_boundary,
    write_segments,
)
from compiler_modules.exceptions import ProfileValidationError
from compiler_modules.technology import CalibrationTargets, default_bundle, default_profile


class CalibrationTestCase(SimpleTestCase):
    """Test cases for the floorplan and write-boundary fits."""

    def test_floorplan_reproduces_default_profile(self):
        fit = solve_floorplan(CalibrationTargets())
        t = default_profile()
        self.assertTrue(math.isclose(fit.cell_pitch, t.cell_pitch_x, rel_tol=1e-3))
        self.assertTrue(math.isclose(fit.periphery_width, t.periphery_width, rel_tol=1e-3))
        self.assertTrue(math.isclose(fit.periphery_height, t.periphery_height, rel_tol=1e-3))

    def test_write_segments(self):
        self.assertEqual(write_segments(128, 64, 4), 184)
        self.assertEqual(write_segments(256, 64, 16), 288)
        self.assertEqual(write_segments(32, 32, 4), 56)

    def test_write_boundary_reproduces_default_profile(self):
        fit = solve_write_boundary(default_profile(), CalibrationTargets())
        self.assertEqual((fit.pass_segments, fit.fail_segments), (184, 288))
        self.assertAlmostEqual(fit.boundary_segments, math.sqrt(184 * 288))
        self.assertTrue(math.isclose(fit.c_line_per_cell, default_profile().c_line_per_cell, rel_tol=1e-3))

    def test_overlapping_targets(self):
        targets = CalibrationTargets(write_pass_geometries=((256, 64, 4),), write_fail_geometries=((128, 64, 4),))
        with self.assertRaisesMessage(ProfileValidationError, "overlap"):
            solve_write_boundary(default_profile(), targets)

    def test_identical_sizes_cannot_fit_floorplan(self):
        targets = CalibrationTargets(density_anchor=(64, 64, 8, 0.024))
        with self.assertRaises(ProfileValidationError):
            solve_floorplan(targets)

    def test_calibrated_bundle_keeps_other_fields(self):
        result = calibrate_bundle(default_bundle())
        t = result.bundle.technology
        self.assertEqual(t.r_ref, default_profile().r_ref)
        self.assertEqual(t.cell_pitch_x, t.cell_pitch_y)
        self.assertEqual(t.c_line_per_cell, result.write_boundary.c_line_per_cell)

    def test_verification_is_consistent(self):
        rows = verify_write_boundary(default_bundle())
        self.assertEqual(len(rows), 6 * 4)
        for dims, corner, expected, passed in rows:
            self.assertEqual(expected, passed, f"{dims} {corner}")

    def test_round_sig(self):
        self.assertEqual(round_sig(2.1036312e-14), 2.10363e-14)
        self.assertEqual(round_sig(123456789.0, 3), 123000000.0)
