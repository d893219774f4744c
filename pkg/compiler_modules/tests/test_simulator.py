"""
Tests for the memory simulator, the word-array self-check and the VCD writer.
"""

import json
import random

import numpy as np
from django.test import SimpleTestCase

from compiler_modules.exceptions import AddressOutOfRange, FillError, OverlappingOperation
from compiler_modules.geometry import validate_geometry
from compiler_modules.selfcheck import WordArrayModel, random_operations, run_self_check
from compiler_modules.simulator import (
    CheckerboardFill,
    ExplicitFill,
    MemorySimulator,
    UniformFill,
    alternating_word,
    fill_matrix,
    format_word,
    parse_word,
    run_log_jsonl,
)
from compiler_modules.technology import DEFAULT_CORNERS, corner_apply, default_profile, ideal_profile
from compiler_modules.waveform import WaveTrace, choose_timescale, export_vcd

SMALL_GEOMETRIES = [
    (M, N, B)
    for M in (2, 4, 8)
    for B in (1, 2, 4)
    for N in (2, 4, 8)
    if N % B == 0 and N // B >= 2
]


def parse_vcd(text):
    """Signal name to the (time, value) pairs written in a dump, in file order."""
    names, changes, time = {}, {}, 0
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "$var":
            names[parts[3]] = parts[4]
            changes[parts[4]] = []
        elif line.startswith("#"):
            time = int(line[1:])
        elif line[0] in "br":
            changes[names[parts[1]]].append((time, parts[0][1:]))
        elif line[0] in "01xzXZ":
            changes[names[line[1:]]].append((time, line[0]))
    return changes


def transitions(changes, level):
    """Times at which a signal settles to `level` from a different value."""
    settled = dict(changes)
    times, previous = [], None
    for time in sorted(settled):
        if settled[time] == level and previous not in (None, level):
            times.append(time)
        previous = settled[time]
    return times


class WordTestCase(SimpleTestCase):

    def test_msb_first(self):
        self.assertEqual(parse_word("1000", 4), [0, 0, 0, 1])
        self.assertEqual(format_word([0, 0, 0, 1]), "1000")
        self.assertEqual(parse_word(0b0110, 4), [0, 1, 1, 0])

    def test_alternating(self):
        self.assertEqual(alternating_word(4, 1), "1010")
        self.assertEqual(alternating_word(4, 0), "0101")
        self.assertEqual(alternating_word(1, 1), "1")

    def test_wrong_width(self):
        with self.assertRaises(ValueError):
            parse_word("101", 4)
        with self.assertRaises(ValueError):
            parse_word(16, 4)


class FillTestCase(SimpleTestCase):

    def test_rules(self):
        g = validate_geometry(4, 4, 2)
        self.assertTrue(np.all(fill_matrix(UniformFill(5e4), g) == 5e4))
        board = fill_matrix(CheckerboardFill(1e4, 1e5), g)
        self.assertEqual((board[0, 0], board[0, 1], board[1, 1]), (1e4, 1e5, 1e4))

    def test_explicit_shape_and_values(self):
        g = validate_geometry(2, 2, 1)
        self.assertEqual(fill_matrix(ExplicitFill([[1, 2], [3, 4]]), g)[1, 0], 3.0)
        with self.assertRaises(FillError):
            fill_matrix(ExplicitFill([[1, 2, 3], [4, 5, 6]]), g)
        with self.assertRaises(FillError):
            fill_matrix(ExplicitFill([[1, 0], [3, 4]]), g)


class MemorySimulatorTestCase(SimpleTestCase):
    """Test cases for reset, write and read sequencing."""

    def setUp(self):
        self.g = validate_geometry(32, 32, 4)
        self.sim = MemorySimulator(self.g, default_profile(), 12.5e6)

    def test_operations_need_reset(self):
        with self.assertRaisesMessage(OverlappingOperation, "RESET"):
            self.sim.write(0, 0, "1010")

    def test_write_then_read_back(self):
        self.sim.reset()
        result = self.sim.write(0, 0, "1010")
        self.assertTrue(result.ok)
        self.assertEqual(self.sim.cells[0, 3], default_profile().hrs_resistance)
        self.assertEqual(self.sim.cells[0, 0], default_profile().lrs_resistance)
        self.assertEqual(self.sim.read(0, 0).data, "1010")

    def test_operation_lengths(self):
        self.sim.reset()
        self.assertEqual(self.sim.cycle, 2)
        self.sim.write(1, 1, "0000")
        self.assertEqual(self.sim.cycle, 4)
        self.sim.read(1, 1)
        self.assertEqual(self.sim.cycle, 8)

    def test_read_is_non_destructive(self):
        self.sim.reset()
        self.sim.write(2, 3, "0110")
        before = self.sim.cells.copy()
        for _ in range(3):
            self.assertEqual(self.sim.read(2, 3).data, "0110")
        np.testing.assert_array_equal(self.sim.cells, before)

    def test_overwrite_in_both_directions(self):
        self.sim.reset()
        for word in ("0000", "1111", "0000"):
            self.assertTrue(self.sim.write(0, 0, word).ok, word)
            self.assertEqual(self.sim.read(0, 0).data, word)

    def test_other_cells_are_untouched(self):
        t = default_profile()
        sim = MemorySimulator(self.g, t, 12.5e6, CheckerboardFill(t.lrs_resistance, t.hrs_resistance))
        sim.reset()
        before = sim.cells.copy()
        selected = np.zeros(before.shape, dtype=bool)
        selected[7, [self.g.column(3, b) for b in range(self.g.B)]] = True

        sim.write(3, 7, "0110")
        np.testing.assert_array_equal(sim.cells[~selected], before[~selected])
        after_write = sim.cells.copy()
        sim.read(3, 7)
        sim.read(0, 0)
        np.testing.assert_array_equal(sim.cells, after_write)

    def test_unwritten_word_reads_ones(self):
        self.sim.reset()
        self.assertEqual(self.sim.read(5, 9).data, "1111")

    def test_address_out_of_range(self):
        self.sim.reset()
        with self.assertRaises(AddressOutOfRange):
            self.sim.write(8, 0, "0000")
        with self.assertRaises(AddressOutOfRange):
            self.sim.read(0, 32)

    def test_bus_carries_word_during_phase_three(self):
        self.sim.reset()
        self.sim.write(0, 0, "1100")
        self.sim.read(0, 0)
        values = [value for _, value in self.sim.trace.changes("Z_BUS")]
        self.assertEqual(values, ["zzzz", "1100", "zzzz"])
        self.assertIsNone(self.sim.io_bus)

    def test_run_log(self):
        self.sim.reset()
        self.sim.write(0, 0, "1010")
        self.sim.read(0, 0, expect="1010")
        lines = run_log_jsonl(self.sim.run_log_header(), self.sim.records).splitlines()
        header = json.loads(lines[0])
        self.assertEqual((header["record"], header["schema_version"], header["B"]), ("header", 1, 4))
        ops = [json.loads(line) for line in lines[1:]]
        self.assertEqual([op["op"] for op in ops], ["reset", "write", "read"])
        self.assertTrue(ops[2]["ok"])


class FarWordOverwriteTestCase(SimpleTestCase):
    """The farthest write column of an 8 kb array must switch both ways at every corner."""

    def test_far_word_at_every_corner(self):
        g = validate_geometry(128, 64, 4)
        x, y = g.word_columns - 2, g.M - 1
        for name, corner in DEFAULT_CORNERS.items():
            with self.subTest(corner=name):
                sim = MemorySimulator(g, corner_apply(default_profile(), corner), 12.5e6)
                sim.reset()
                for word in ("0000", "1111", "0000"):
                    result = sim.write(x, y, word)
                    self.assertTrue(result.ok, f"{word}: worst margin {result.worst_margin:.4g} V")
                    self.assertEqual(sim.read(x, y).data, word)


class OracleEquivalenceTestCase(SimpleTestCase):
    """Random sequences on small arrays must match a plain word array."""

    def test_random_sequences_match_word_array(self):
        rng = random.Random(1234)
        for seq in range(100):
            g = validate_geometry(*rng.choice(SMALL_GEOMETRIES))
            result = run_self_check(g, ideal_profile(), 12.5e6, count=200, seed=rng.randrange(1 << 30))
            self.assertEqual(result.mismatches, [], f"sequence {seq} on {g.label()}")
            self.assertEqual(result.operations, 200)

    def test_model_defaults_to_ones(self):
        model = WordArrayModel(validate_geometry(4, 8, 4))
        self.assertEqual(model.read(1, 3), "1111")
        model.write(1, 3, "0010")
        self.assertEqual(model.read(1, 3), "0010")

    def test_operations_are_seeded(self):
        g = validate_geometry(8, 8, 2)
        self.assertEqual(random_operations(g, 50, random.Random(9)), random_operations(g, 50, random.Random(9)))


class WaveTraceTestCase(SimpleTestCase):
    """Test cases for WaveTrace and export_vcd."""

    def test_timescale(self):
        self.assertEqual(choose_timescale(2e-9), ("1 ns", 2))
        self.assertEqual(choose_timescale(4e-9), ("1 ns", 4))
        self.assertEqual(choose_timescale(1e-8), ("10 ns", 1))

    def test_record_deduplicates_and_orders(self):
        trace = WaveTrace(1e-9)
        trace.declare("A")
        trace.record("A", 0, 0)
        trace.record("A", 5, 0)
        trace.record("A", 7, 1)
        trace.record("A", 7, 0)
        self.assertEqual(trace.changes("A"), [(0, 0)])
        trace.record("A", 10, 1)
        with self.assertRaises(ValueError):
            trace.record("A", 3, 1)

    def test_header_only_for_empty_trace(self):
        trace = WaveTrace(2e-9, scope="top")
        trace.declare("CLK")
        trace.declare("BUS", 4)
        trace.declare("V", kind="real")
        text = export_vcd(trace)
        self.assertIn("$timescale 1 ns $end", text)
        self.assertRegex(text, r"\$var wire 4 \S+ BUS \$end")
        self.assertRegex(text, r"\$var real 64 \S+ V \$end")
        self.assertFalse(any(line.startswith("#") for line in text.splitlines()))
        self.assertTrue(text.endswith("$enddefinitions $end\n"))

    def test_values_in_dump(self):
        trace = WaveTrace(1e-9)
        trace.declare("CLK")
        trace.declare("BUS", 4)
        trace.declare("V", kind="real")
        trace.record("CLK", 0, 1)
        trace.record("BUS", 0, 5)
        trace.record("V", 3, 1.25)
        trace.record("BUS", 3, "zzzz")
        changes = parse_vcd(export_vcd(trace))
        self.assertEqual(dict(changes["CLK"])[0], "1")
        bus = dict(changes["BUS"])
        self.assertEqual(int(bus[0], 2), 5)
        self.assertEqual(set(bus[3]), {"z"})
        self.assertEqual(float(dict(changes["V"])[3]), 1.25)

    def test_read_control_edges_in_dump(self):
        """Test DVLP rises before PRE and EN_SA waits for DVLP to fall in a single read."""
        sim = MemorySimulator(validate_geometry(8, 8, 2), default_profile(), 25e6)
        sim.reset()
        sim.read(1, 2)
        changes = parse_vcd(export_vcd(sim.trace))
        (dvlp_rise,) = transitions(changes["DVLP"], "1")
        (dvlp_fall,) = transitions(changes["DVLP"], "0")
        (pre_rise,) = transitions(changes["PRE"], "1")
        (en_sa_rise,) = transitions(changes["EN_SA"], "1")
        self.assertLess(dvlp_rise, pre_rise)
        self.assertLess(dvlp_rise, dvlp_fall)
        self.assertGreaterEqual(en_sa_rise, dvlp_fall)

    def test_simulation_dump_is_deterministic(self):
        def run():
            sim = MemorySimulator(validate_geometry(8, 8, 2), default_profile(), 25e6)
            sim.reset()
            sim.write(1, 2, "10")
            sim.read(1, 2, expect="10")
            return export_vcd(sim.trace)

        self.assertEqual(run(), run())
