"""
Tests for netlist elaboration and the structural and SPICE emitters.
"""

from pathlib import Path

from django.test import SimpleTestCase

from compiler_modules.exceptions import NetlistError
from compiler_modules.geometry import validate_geometry
from compiler_modules.netlist import (
    CellKind,
    elaborate,
    emit_spice,
    emit_structural,
    expected_counts,
    parse_structural,
    spice_element_count,
    stats,
)
from compiler_modules.technology import default_profile

GOLDEN = Path(__file__).resolve().parent / "golden"


class ElaborateTestCase(SimpleTestCase):
    """Test cases for elaborate and the instance counts."""

    def test_counts_match_closed_form(self):
        """Test every kind's count equals the closed form over a range of sizes."""
        for dims in ((2, 2, 1), (32, 32, 4), (64, 64, 8), (128, 64, 16), (8, 16, 2)):
            g = validate_geometry(*dims)
            counts = stats(elaborate(g, default_profile()))
            for kind, expected in expected_counts(g).items():
                self.assertEqual(counts[kind], expected, f"{kind} for {dims}")
            self.assertEqual(counts["wordlines"], g.M)

    def test_reference_layout_instance(self):
        """Test the 64 x 64, B = 8 instance has 4096 cells and 8 sense amplifiers."""
        counts = stats(elaborate(validate_geometry(64, 64, 8), default_profile()))
        self.assertEqual(counts["MemCell1T1R"], 4096)
        self.assertEqual(counts["SenseAmp"], 8)
        self.assertEqual(counts["RefCell"], 512)
        self.assertEqual(counts["MuxSwitch"], 8 * 17)

    def test_single_bit_words(self):
        """Test B = 1 gives one write driver and one sense amplifier."""
        netlist = elaborate(validate_geometry(4, 4, 1), default_profile())
        self.assertEqual(len(netlist.by_kind(CellKind.WriteDriver)), 1)
        self.assertEqual(len(netlist.by_kind(CellKind.SenseAmp)), 1)

    def test_reference_block_selects_on_read(self):
        netlist = elaborate(validate_geometry(32, 32, 4), default_profile())
        block = next(i for i in netlist.instances if i.name == "PMUX_BLK8")
        self.assertEqual(block.port("SEL"), "READ")
        switch = next(i for i in netlist.instances if i.name == "PMUX_BLK8_SW3")
        self.assertEqual((switch.port("A"), switch.port("Y"), switch.parent), ("REFP3", "SA_REF3", "PMUX_BLK8"))

    def test_every_cell_in_a_row_shares_the_wordline(self):
        netlist = elaborate(validate_geometry(8, 8, 2), default_profile())
        for inst in netlist.by_kind(CellKind.MemCell1T1R):
            row = int(inst.name.split("_")[1][1:])
            self.assertEqual(inst.port("WL"), f"WL{row}")


class StructuralFormatTestCase(SimpleTestCase):
    """Test cases for the structural netlist format."""

    def test_golden_smallest_instance(self):
        """Test the 2 x 2, B = 1 netlist is byte-identical to the golden file."""
        text = emit_structural(elaborate(validate_geometry(2, 2, 1), default_profile()))
        self.assertEqual(text, (GOLDEN / "rram_M2_N2_B1.netlist").read_text(encoding="utf-8"))

    def test_deterministic(self):
        g = validate_geometry(16, 16, 4)
        self.assertEqual(emit_structural(elaborate(g, default_profile())),
                         emit_structural(elaborate(g, default_profile())))

    def test_parse_recovers_netlist(self):
        netlist = elaborate(validate_geometry(8, 16, 4), default_profile())
        self.assertEqual(parse_structural(emit_structural(netlist)), netlist)

    def test_parse_errors_name_the_line(self):
        text = emit_structural(elaborate(validate_geometry(2, 2, 1), default_profile()))
        lines = text.splitlines()
        lines[5] = "net CLK wire"
        with self.assertRaisesMessage(NetlistError, "line 6"):
            parse_structural("\n".join(lines))

    def test_parse_rejects_undeclared_net(self):
        text = emit_structural(elaborate(validate_geometry(2, 2, 1), default_profile()))
        with self.assertRaisesMessage(NetlistError, "undeclared net"):
            parse_structural(text.replace("TBUF0 TriStateBuffer - vddh=3.3 : A=SA_OUT0",
                                          "TBUF0 TriStateBuffer - vddh=3.3 : A=SA_OUT9"))

    def test_parse_rejects_missing_end(self):
        text = emit_structural(elaborate(validate_geometry(2, 2, 1), default_profile()))
        with self.assertRaisesMessage(NetlistError, "missing 'end'"):
            parse_structural(text.replace("end\n", ""))


class SpiceTestCase(SimpleTestCase):
    """Test cases for the SPICE deck."""

    def test_one_subcircuit_per_kind(self):
        netlist = elaborate(validate_geometry(8, 8, 2), default_profile())
        deck = emit_spice(netlist, default_profile())
        self.assertEqual(deck.count(".subckt MemCell1T1R "), 1)
        self.assertEqual(deck.count(".subckt SenseAmp "), 1)
        self.assertIn("XMC_R7_C7 ", deck)
        self.assertTrue(deck.rstrip().endswith(".end"))

    def test_element_count(self):
        """Test the expanded element count sums each leaf's subcircuit body."""
        g = validate_geometry(2, 2, 1)
        netlist = elaborate(g, default_profile())
        # supplies 3; MemCell 4x3; RefCell 2x3; MuxSwitch 5x3; WriteDriver 4;
        # SenseAmp 4; LevelDown 5x1; TriStateBuffer 2; decoders 2 + 2
        self.assertEqual(spice_element_count(netlist), 3 + 12 + 6 + 15 + 4 + 4 + 5 + 2 + 2 + 2)

    def test_deterministic(self):
        g = validate_geometry(16, 16, 4)
        self.assertEqual(emit_spice(elaborate(g, default_profile()), default_profile()),
                         emit_spice(elaborate(g, default_profile()), default_profile()))
