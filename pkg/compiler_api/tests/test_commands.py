"""
Tests for the compiler management commands.
"""

import json
import math
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from compiler_api.profiles import load_bundle
from compiler_modules.technology import default_profile

SCRIPTS = Path(__file__).resolve().parent.parent.parent / "scripts"


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class GenerateCommandTestCase(SimpleTestCase):
    """Test cases for the generate command."""

    def test_writes_netlists(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('generate', '-M', '32', '-N', '32', '-B', '4', '--out', tmp)
            self.assertIn('rram_M32_N32_B4: 1024 cells, 4 sense amps, 1257 instances', output)
            names = sorted(p.name for p in Path(tmp).iterdir())
            self.assertEqual(names, ['rram_M32_N32_B4.netlist', 'rram_M32_N32_B4.sp',
                                     'rram_M32_N32_B4.stats.json'])
            stats = json.loads((Path(tmp) / 'rram_M32_N32_B4.stats.json').read_text())
            self.assertEqual(stats['counts']['SenseAmp'], 4)

    def test_reference_layout_size(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('generate', '-M', '64', '-N', '64', '-B', '8', '--out', tmp)
            self.assertIn('rram_M64_N64_B8: 4096 cells, 8 sense amps', output)

    def test_output_is_deterministic(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            run('generate', '--size', '16x16x4', '--out', first)
            run('generate', '--size', '16x16x4', '--out', second)
            for path in Path(first).iterdir():
                self.assertEqual(path.read_bytes(), (Path(second) / path.name).read_bytes(), path.name)

    def test_invalid_geometry_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as cm:
                run('generate', '-M', '63', '-N', '32', '-B', '4', '--out', tmp)
            self.assertEqual(cm.exception.returncode, 2)
            self.assertIn('M must be a power of two', str(cm.exception))
            self.assertEqual(list(Path(tmp).iterdir()), [])

    def test_incomplete_geometry(self):
        with self.assertRaises(CommandError) as cm:
            run('generate', '-M', '32')
        self.assertEqual(cm.exception.returncode, 2)


class SimulateCommandTestCase(SimpleTestCase):
    """Test cases for the simulate command."""

    def test_corner_word_script(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('simulate', '-M', '32', '-N', '32', '-B', '4', '--clock', '25e6',
                         '--script', str(SCRIPTS / 'read_corner_word.sim'), '--out', tmp)
            self.assertIn('all checks passed', output)
            vcd = (Path(tmp) / 'read_corner_word.vcd').read_text()
            self.assertIn('$timescale 1 ns $end', vcd)
            log = (Path(tmp) / 'read_corner_word.runlog.jsonl').read_text().splitlines()
            self.assertEqual(json.loads(log[0])['design'], 'M32_N32_B4')
            reads = [json.loads(line) for line in log[1:] if json.loads(line)['op'] == 'read']
            self.assertEqual([r['data'] for r in reads], ['0101', '1010'])

    def test_empty_script_writes_header_only(self):
        with tempfile.TemporaryDirectory() as tmp:
            script = Path(tmp) / 'empty.sim'
            script.write_text('# nothing to do\n')
            run('simulate', '-M', '8', '-N', '8', '-B', '2', '--script', str(script), '--out', tmp)
            vcd = (Path(tmp) / 'empty.vcd').read_text()
            self.assertIn('$enddefinitions $end', vcd)
            self.assertFalse(any(line.startswith('#') for line in vcd.splitlines()))

    def test_failed_expectation_exits_1(self):
        with tempfile.TemporaryDirectory() as tmp:
            script = Path(tmp) / 'wrong.sim'
            script.write_text('reset\nwrite 0 0 10\nread 0 0 01\n')
            with self.assertRaises(CommandError) as cm:
                run('simulate', '-M', '8', '-N', '8', '-B', '2', '--clock', '12.5e6',
                    '--script', str(script), '--out', tmp)
            self.assertEqual(cm.exception.returncode, 1)
            self.assertIn('line 3', str(cm.exception))
            self.assertTrue((Path(tmp) / 'wrong.vcd').exists())

    def test_malformed_script_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            script = Path(tmp) / 'bad.sim'
            script.write_text('reset\nwrite 0 0\n')
            with self.assertRaises(CommandError) as cm:
                run('simulate', '-M', '8', '-N', '8', '-B', '2', '--script', str(script), '--out', tmp)
            self.assertEqual(cm.exception.returncode, 2)
            self.assertIn('line 2', str(cm.exception))

    def test_random_self_check(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('simulate', '-M', '8', '-N', '8', '-B', '2', '--clock', '12.5e6',
                         '--random', '100', '--seed', '3', '--ideal', '--no-vcd', '--out', tmp)
            self.assertIn('100 random operations match', output)
            self.assertEqual([p.name for p in Path(tmp).iterdir()], ['random_M8_N8_B2_seed3.runlog.jsonl'])


class CharacterizeCommandTestCase(SimpleTestCase):
    """Test cases for the characterize command."""

    def test_single_passing_size(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('characterize', '-M', '32', '-N', '32', '-B', '4', '--clock', '25e6',
                         '--corners', 'TT', '--out', tmp)
            self.assertIn('4 rows: 4 passed, 0 failed', output)
            report = json.loads((Path(tmp) / 'report.json').read_text())
            self.assertEqual([r['test'] for r in report['rows']], ['W1', 'W2', 'R1', 'R2'])
            self.assertIn('M32_N32_B4', (Path(tmp) / 'report.txt').read_text())

    def test_failing_corner_exits_1(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as cm:
                run('characterize', '--size', '128x64x16', '--clock', '12.5e6', '--out', tmp)
            self.assertEqual(cm.exception.returncode, 1)
            report = json.loads((Path(tmp) / 'report.json').read_text())
            failed = {r['corner'] for r in report['rows'] if not r['passed']}
            self.assertEqual(failed, {'FS', 'FF'})

    def test_reports_are_byte_identical(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            for out in (first, second):
                run('characterize', '--size', '8x8x2', '--clock', '12.5e6', '--clock', '25e6',
                    '--corners', 'TT,SF', '--vcd', '--out', out)
            for name in ('report.txt', 'report.json', 'vcd/M8_N8_B2_25MHz_SF_R.vcd'):
                self.assertEqual((Path(first) / name).read_bytes(), (Path(second) / name).read_bytes(), name)

    def test_bad_options_exit_2(self):
        for args in (['--corners', 'SS'], ['--ratio', '1.5'], ['--workers', '0'], ['--clock', 'fast']):
            with self.subTest(args=args):
                with tempfile.TemporaryDirectory() as tmp:
                    with self.assertRaises(CommandError) as cm:
                        run('characterize', '--size', '8x8x2', '--out', tmp, *args)
                    self.assertEqual(cm.exception.returncode, 2)


class CalibrateCommandTestCase(SimpleTestCase):
    """Test cases for the calibrate command."""

    def test_regenerates_default_profile(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = run('calibrate', '--out', tmp)
            self.assertIn('c_line_per_cell', output)
            fitted = load_bundle(Path(tmp) / 'calibrated_profile.json').technology
            nominal = default_profile()
            for name in ('cell_pitch_x', 'periphery_width', 'periphery_height', 'c_line_per_cell'):
                self.assertTrue(math.isclose(getattr(fitted, name), getattr(nominal, name), rel_tol=1e-3), name)
            self.assertEqual(fitted.r_ref, nominal.r_ref)
