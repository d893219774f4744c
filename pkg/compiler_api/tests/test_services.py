"""
Tests for the compiler service layer.
"""

import tempfile
from pathlib import Path
from unittest import mock

from django.test import SimpleTestCase

from compiler_api import services
from compiler_api.services import CompilerService
from compiler_modules.geometry import validate_geometry
from compiler_modules.technology import default_profile


class GenerateServiceTestCase(SimpleTestCase):
    """Test cases for CompilerService.generate."""

    def test_elaborates_once(self):
        g = validate_geometry(8, 8, 2)
        with tempfile.TemporaryDirectory() as tmp, \
                mock.patch.object(services, 'elaborate', wraps=services.elaborate) as elaborate:
            summary = CompilerService.generate(g, default_profile(), out=tmp)
            self.assertEqual(elaborate.call_count, 1)
            netlist_text = (Path(tmp) / 'rram_M8_N8_B2.netlist').read_text()
        self.assertEqual(summary['design'], 'rram_M8_N8_B2')
        self.assertEqual(netlist_text.count('\ninst '), summary['counts']['instances'])
        self.assertEqual(len(summary['files']), 3)

    def test_summary_without_files(self):
        summary = CompilerService.generation_summary(validate_geometry(8, 8, 2), default_profile())
        self.assertEqual(summary['counts'], summary['counts'] | summary['expected_counts'])
