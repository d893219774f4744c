"""
Tests for geometry validation and worst-case addressing.
"""

import random

from django.test import SimpleTestCase

from compiler_modules.exceptions import (
    GeometryError,
    InvalidColumnCount,
    InvalidWordWidth,
    NonPowerOfTwo,
)
from compiler_modules.geometry import (
    parse_size,
    validate_geometry,
    worst_case_read_address,
    worst_case_write_address,
)


def _acceptable(M, N, B):
    powers = {1 << k for k in range(20)}
    return M in powers and M >= 2 and B in powers and N % B == 0 and N // B in powers and N // B >= 2


class ValidateGeometryTestCase(SimpleTestCase):
    """Test cases for validate_geometry."""

    def test_reference_layout_dimensions(self):
        """Test the 64 x 64, B = 8 instance derives X = 3, Y = 6."""
        g = validate_geometry(64, 64, 8)
        self.assertEqual((g.X, g.Y), (3, 6))
        self.assertEqual(g.word_columns, 8)
        self.assertEqual(g.word_count, 512)
        self.assertEqual(g.capacity_bits, 4096)

    def test_random_inputs_accept_exactly_consistent_triples(self):
        """Test 500 random triples against an independent acceptance rule."""
        rng = random.Random(20240501)
        accepted = 0
        for _ in range(500):
            M = rng.choice([rng.randint(1, 300), 1 << rng.randint(0, 9)])
            B = rng.choice([rng.randint(1, 20), 1 << rng.randint(0, 4)])
            N = rng.choice([rng.randint(1, 300), B << rng.randint(0, 6)])
            if _acceptable(M, N, B):
                g = validate_geometry(M, N, B)
                accepted += 1
                self.assertEqual((g.M, g.N, g.B), (M, N, B))
                self.assertEqual(g.M, 1 << g.Y)
                self.assertEqual(g.N, g.B * (1 << g.X))
            else:
                with self.assertRaises(GeometryError):
                    validate_geometry(M, N, B)
        self.assertGreater(accepted, 50)

    def test_rejections_name_the_rule(self):
        """Test each rejection raises its own error type."""
        with self.assertRaisesMessage(NonPowerOfTwo, "M must be a power of two"):
            validate_geometry(63, 64, 8)
        with self.assertRaises(InvalidWordWidth):
            validate_geometry(64, 60, 6)
        with self.assertRaises(InvalidColumnCount):
            validate_geometry(64, 8, 8)
        with self.assertRaises(InvalidColumnCount):
            validate_geometry(64, 48, 8)
        with self.assertRaises(GeometryError):
            validate_geometry(0, 64, 8)

    def test_errors_are_value_errors(self):
        """Test geometry errors are caught by the service layer's ValueError handler."""
        with self.assertRaises(ValueError):
            validate_geometry(3, 4, 2)

    def test_smallest_geometry(self):
        """Test M = 2, N = 2, B = 1 is the smallest accepted instance."""
        g = validate_geometry(2, 2, 1)
        self.assertEqual((g.X, g.Y), (1, 1))


class WorstCaseAddressTestCase(SimpleTestCase):
    """Test cases for the worst-case test addresses."""

    def test_write_address(self):
        self.assertEqual(worst_case_write_address(validate_geometry(32, 32, 4)), (6, 31))

    def test_read_address(self):
        self.assertEqual(worst_case_read_address(validate_geometry(32, 32, 4)), (7, 31))

    def test_smallest_geometry_addresses(self):
        g = validate_geometry(2, 2, 1)
        self.assertEqual(worst_case_write_address(g), (0, 1))
        self.assertEqual(worst_case_read_address(g), (1, 1))


class ParseSizeTestCase(SimpleTestCase):

    def test_parse(self):
        g = parse_size("128x64x16")
        self.assertEqual((g.M, g.N, g.B), (128, 64, 16))

    def test_malformed(self):
        for text in ("128x64", "axbxc", "128*64*16"):
            with self.assertRaises(GeometryError):
                parse_size(text)
