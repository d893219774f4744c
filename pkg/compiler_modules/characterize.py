"""
Characterization Module

This module runs the automated pass/fail characterization of generated
memories: a reset, two write tests and two read tests at the worst-case
addresses, swept over sizes, clock frequencies and process corners.

Tests:
    W1: word preset to 1 MOhm, write 1010...; every bit must reach
        |V_PN| >= write_threshold * VDDW with the right sign 0.4 of a
        period into the write
    W2: as W1 with the complement 0101...
    R1: word initialised LRS, HRS, ... (MSB first), expect 0101...; each
        sensed level must be above read_high_threshold * VDDL for a 1 and
        below read_low_threshold * VDDL for a 0
    R2: as R1 with the complement initialisation, expect 1010...

Functions:
    run_w_tests / run_r_tests: One geometry, clock and corner
    characterize_sweep: Every combination, in a deterministic row order
    format_report_table / report_to_json: Report emission

Usage:
    from compiler_modules.characterize import characterize_sweep

    report = characterize_sweep([(g, 12.5e6)], tech, list(bundle.corners.values()))
    print(format_report_table(report))
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

from .floorplan import estimate_area
from .geometry import MemoryGeometry, worst_case_read_address, worst_case_write_address
from .netlist import CONTROL_NETS
from .simulator import MemorySimulator, UniformFill, alternating_word, parse_word
from .technology import CornerProfile, TechnologyProfile, corner_apply

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
PRESET_RESISTANCE = 1e6
TEST_NAMES = ("W1", "W2", "R1", "R2")
# sizes characterized when none are named: 1 kb to 8 kb, word widths 4 to 16
DEFAULT_SUITE = ((32, 32, 4), (64, 64, 4), (64, 64, 8), (128, 64, 4), (128, 64, 8), (128, 64, 16))
CALIBRATION_NOTE = (
    "Timing and area figures are calibration-constrained reproductions: the default profile's "
    "parasitics and floorplan constants were fitted to the published write boundary, layout size "
    "and best density, so matching those figures is not an independent prediction."
)


@dataclass(frozen=True)
class TestSpec:
    """
    Definition of one characterization test.

    Attributes:
        name (str): W1, W2, R1 or R2
        address_rule (str): "write" or "read" worst-case address
        msb (int): most significant bit of the alternating pattern
        threshold_rule (str): human-readable pass rule
        checkpoint (float): check time as a fraction of the clock period
            after the write start or after read phase 3 starts
    """
    name: str
    address_rule: str
    msb: int
    threshold_rule: str
    checkpoint: float = 0.4

    def pattern(self, width: int) -> str:
        return alternating_word(width, self.msb)


TEST_SPECS = {
    "W1": TestSpec("W1", "write", 1, "|V_PN| >= write_threshold * VDDW, sign by bit"),
    "W2": TestSpec("W2", "write", 0, "|V_PN| >= write_threshold * VDDW, sign by bit"),
    "R1": TestSpec("R1", "read", 0, "Z_SA > read_high * VDDL for 1, < read_low * VDDL for 0"),
    "R2": TestSpec("R2", "read", 1, "Z_SA > read_high * VDDL for 1, < read_low * VDDL for 0"),
}


@dataclass(frozen=True)
class TestResult:
    name: str
    passed: bool
    worst_margin: float
    x: int
    y: int
    data: str


@dataclass(frozen=True)
class ReportRow:
    """One (geometry, clock, corner, test) outcome."""
    M: int
    N: int
    B: int
    clock_hz: float
    corner: str
    test: str
    passed: bool
    worst_margin: Optional[float]
    access_time: float
    write_time: float
    area_m2: float
    density_mb_per_mm2: float
    error: Optional[str] = None

    @property
    def capacity_bits(self) -> int:
        return self.M * self.N


@dataclass
class CharacterizationReport:
    rows: List[ReportRow] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)

    def failures(self) -> List[ReportRow]:
        return [r for r in self.rows if not r.passed]

    def summary(self) -> dict:
        return {
            "rows": len(self.rows),
            "passed": sum(1 for r in self.rows if r.passed),
            "failed": sum(1 for r in self.rows if not r.passed),
            "errors": sum(1 for r in self.rows if r.error),
            "all_passed": self.all_passed,
        }


def access_time(t: TechnologyProfile, clock_hz: float) -> float:
    """READ rising to sense enable: the two develop phases."""
    return 2 * t.read_phase_cycles / clock_hz


def write_time(t: TechnologyProfile, clock_hz: float) -> float:
    return t.write_cycles / clock_hz


def check_reset(sim: MemorySimulator) -> bool:
    """All control nets in the trace are deasserted once reset has completed."""
    return all(sim.trace.value(name) == 0 for name in CONTROL_NETS)


def write_test_session(
    g: MemoryGeometry,
    t: TechnologyProfile,
    clock_hz: float,
    corner: CornerProfile,
) -> Tuple[List[TestResult], MemorySimulator]:
    """Run W1 and W2 on one simulator; returns the results and the simulator for its trace."""
    tc = corner_apply(t, corner)
    sim = MemorySimulator(g, tc, clock_hz, UniformFill(PRESET_RESISTANCE))
    sim.reset()
    if not check_reset(sim):
        raise RuntimeError("control signals still asserted after reset")

    x, y = worst_case_write_address(g)
    results = []
    for name in ("W1", "W2"):
        for b in range(g.B):
            sim.set_cell(g.column(x, b), y, PRESET_RESISTANCE)
        outcome = sim.write(x, y, TEST_SPECS[name].pattern(g.B))
        results.append(TestResult(name, outcome.ok, outcome.worst_margin, x, y, outcome.data))
    return results, sim


def read_test_session(
    g: MemoryGeometry,
    t: TechnologyProfile,
    clock_hz: float,
    corner: CornerProfile,
    ratio: float = 0.3,
) -> Tuple[List[TestResult], MemorySimulator]:
    """
    Run R1 and R2 on one simulator.

    The word's cells are set to ratio * r_ref for each expected 0 and
    r_ref / ratio for each expected 1, using the nominal reference value.
    """
    if not 0 < ratio < 1:
        raise ValueError(f"resistance ratio must be in (0, 1), got {ratio}")
    tc = corner_apply(t, corner)
    sim = MemorySimulator(g, tc, clock_hz, UniformFill(PRESET_RESISTANCE))
    sim.reset()
    if not check_reset(sim):
        raise RuntimeError("control signals still asserted after reset")

    x, y = worst_case_read_address(g)
    results = []
    for name in ("R1", "R2"):
        expected = TEST_SPECS[name].pattern(g.B)
        for b, bit in enumerate(parse_word(expected, g.B)):
            sim.set_cell(g.column(x, b), y, t.r_ref / ratio if bit else t.r_ref * ratio)
        outcome = sim.read(x, y, expect=expected)
        passed = sim.read_matches(outcome, expected)
        results.append(TestResult(name, passed, outcome.worst_margin, x, y, outcome.data))
    return results, sim


def run_w_tests(g: MemoryGeometry, t: TechnologyProfile, clock_hz: float, corner: CornerProfile) -> List[TestResult]:
    """
    W1 and W2 at the worst-case write address.

    Args:
        g (MemoryGeometry): geometry
        t (TechnologyProfile): nominal technology; the corner is applied here
        clock_hz (float): clock frequency
        corner (CornerProfile): process corner

    Returns:
        list: [W1 result, W2 result]
    """
    return write_test_session(g, t, clock_hz, corner)[0]


def run_r_tests(
    g: MemoryGeometry,
    t: TechnologyProfile,
    clock_hz: float,
    corner: CornerProfile,
    ratio: float = 0.3,
) -> List[TestResult]:
    """R1 and R2 at the worst-case read address; see read_test_session."""
    return read_test_session(g, t, clock_hz, corner, ratio)[0]


def _run_cell(task) -> List[ReportRow]:
    g, clock_hz, t, corner, ratio = task
    area = estimate_area(g, t)
    common = dict(
        M=g.M, N=g.N, B=g.B, clock_hz=clock_hz, corner=corner.name,
        access_time=access_time(t, clock_hz), write_time=write_time(t, clock_hz),
        area_m2=area.area, density_mb_per_mm2=area.density,
    )
    try:
        results = run_w_tests(g, t, clock_hz, corner) + run_r_tests(g, t, clock_hz, corner, ratio)
    except Exception as e:
        logger.error(f"{g.label()} at {clock_hz:g} Hz, corner {corner.name}: {e}")
        return [ReportRow(test=name, passed=False, worst_margin=None, error=str(e), **common)
                for name in TEST_NAMES]
    return [ReportRow(test=r.name, passed=r.passed, worst_margin=r.worst_margin, **common) for r in results]


def characterize_sweep(
    configs: Sequence[Tuple[MemoryGeometry, float]],
    t: TechnologyProfile,
    corners: Sequence[CornerProfile],
    ratio: float = 0.3,
    workers: int = 1,
) -> CharacterizationReport:
    """
    Run W1, W2, R1, R2 for every (geometry, clock) config and corner.

    Rows are ordered by config, then corner, then test, whatever the worker
    count. An error in one cell becomes failed rows carrying the message;
    the rest of the sweep still runs.

    Args:
        configs: (geometry, clock_hz) pairs
        t (TechnologyProfile): nominal technology
        corners: corners to run, in report order
        ratio (float): LRS/HRS ratio for the read tests
        workers (int): processes to use; 1 runs in-process

    Returns:
        CharacterizationReport: the ordered rows

    Raises:
        ValueError: If configs or corners is empty
    """
    if not configs or not corners:
        raise ValueError("characterization needs at least one configuration and one corner")
    tasks = [(g, clock_hz, t, corner, ratio) for g, clock_hz in configs for corner in corners]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_run_cell, tasks))
    else:
        cells = [_run_cell(task) for task in tasks]

    report = CharacterizationReport([row for cell in cells for row in cell])
    summary = report.summary()
    logger.info(f"Characterized {len(tasks)} configuration/corner cells: "
                f"{summary['passed']} passed, {summary['failed']} failed")
    return report


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

_HEADER = (
    f"{'size':<14} {'clock_MHz':>9} {'corner':<6} {'test':<4} {'result':<6} "
    f"{'margin_V':>9} {'access_ns':>9} {'write_ns':>8} {'area_mm2':>8} {'Mb/mm2':>7}"
)


def format_report_table(report: CharacterizationReport) -> str:
    """Aligned plain-text table, one line per row, followed by the summary and the calibration note."""
    lines = [_HEADER, "-" * len(_HEADER)]
    for r in report.rows:
        result = "ERROR" if r.error else ("PASS" if r.passed else "FAIL")
        margin = "-" if r.worst_margin is None else f"{r.worst_margin:.4f}"
        lines.append(
            f"{f'M{r.M}_N{r.N}_B{r.B}':<14} {r.clock_hz / 1e6:>9.3f} {r.corner:<6} {r.test:<4} {result:<6} "
            f"{margin:>9} {r.access_time * 1e9:>9.1f} {r.write_time * 1e9:>8.1f} "
            f"{r.area_m2 * 1e6:>8.4f} {r.density_mb_per_mm2:>7.4f}"
        )
    s = report.summary()
    lines.append("")
    lines.append(f"{s['rows']} rows: {s['passed']} passed, {s['failed']} failed, {s['errors']} errors")
    lines.append(f"Note: {CALIBRATION_NOTE}")
    return "\n".join(lines) + "\n"


def report_to_dict(report: CharacterizationReport) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "note": CALIBRATION_NOTE,
        "rows": [asdict(r) for r in report.rows],
        "summary": report.summary(),
    }


def report_to_json(report: CharacterizationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"
