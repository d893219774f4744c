"""
Memory Simulator Module

This module executes reset/write/read sequences against one memory instance.
A cycle loop drives the controller FSM, the analog models are evaluated at
the two checkpoints (0.4 of a clock period into the last write cycle and
into read phase 3) and every signal change goes into a WaveTrace.

Timing:
    Each clock cycle is 20 ticks. CLK rises at the start of a cycle and
    falls half way through; inputs change mid-cycle and are sampled on the
    next rising edge, where the controller outputs change.

Classes:
    MemorySimulator: Cell matrix, controller and trace of one run
    WriteResult / ReadResult: Per-operation outcomes

Functions:
    fill_matrix: Build the initial resistance matrix from a fill rule
    parse_word / format_word: MSB-first binary data words
    run_log_jsonl: Serialize run-log records, one JSON object per line

Usage:
    from compiler_modules.simulator import MemorySimulator, UniformFill

    sim = MemorySimulator(g, tech, clock_hz=25e6, fill=UniformFill(1e6))
    sim.reset()
    sim.write(7, 31, "1010")
    print(sim.read(7, 31).data)
"""

import json
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from .analog import (
    MemristorState,
    SenseResult,
    address_parasitics,
    apply_write,
    effective_develop_time,
    read_level_ok,
    read_paths,
    sense,
    sensed_level,
    vpn_at,
    write_driver,
    write_margin,
)
from .controller import Controller, FsmInputs, FsmState, IDLE_INPUTS, PhaseTiming
from .exceptions import AddressOutOfRange, FillError, OverlappingOperation
from .geometry import MemoryGeometry
from .technology import TechnologyProfile
from .waveform import WaveTrace

logger = logging.getLogger(__name__)

TICKS_PER_CYCLE = 20
CHECKPOINT_TICKS = 8
RUN_LOG_SCHEMA_VERSION = 1

_CONTROL_NETS = ("READ", "WRITE", "DVLP", "PRE", "EN_SA", "DEC_EN", "IO_DRIVE")


# ---------------------------------------------------------------------------
# Fill rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniformFill:
    resistance: float = 1e6


@dataclass(frozen=True)
class CheckerboardFill:
    """Cell (row, col) gets `even` when row + col is even, `odd` otherwise."""
    even: float
    odd: float


@dataclass(frozen=True)
class ExplicitFill:
    matrix: Sequence[Sequence[float]]


FillRule = Union[UniformFill, CheckerboardFill, ExplicitFill]


def fill_matrix(rule: FillRule, g: MemoryGeometry) -> np.ndarray:
    """
    Initial M x N resistance matrix for a fill rule.

    Raises:
        FillError: If an explicit matrix has the wrong shape or a value is not positive
    """
    if isinstance(rule, UniformFill):
        cells = np.full((g.M, g.N), float(rule.resistance))
    elif isinstance(rule, CheckerboardFill):
        rows, cols = np.indices((g.M, g.N))
        cells = np.where((rows + cols) % 2 == 0, float(rule.even), float(rule.odd))
    elif isinstance(rule, ExplicitFill):
        try:
            cells = np.array(rule.matrix, dtype=float)
        except (TypeError, ValueError):
            raise FillError("explicit fill must be a rectangular matrix of numbers")
        if cells.shape != (g.M, g.N):
            raise FillError(f"explicit fill has shape {cells.shape}, geometry needs ({g.M}, {g.N})")
    else:
        raise FillError(f"unknown fill rule {rule!r}")

    if not np.all(np.isfinite(cells)) or np.any(cells <= 0):
        raise FillError("fill resistances must be finite and > 0")
    return cells


# ---------------------------------------------------------------------------
# Data words
# ---------------------------------------------------------------------------

def parse_word(data: Union[str, int], width: int) -> List[int]:
    """
    Bits of a data word indexed by IO line (element b is bit b).

    Strings are MSB-first binary digits and must have exactly `width` digits.
    """
    if isinstance(data, int) and not isinstance(data, bool):
        if not 0 <= data < (1 << width):
            raise ValueError(f"data {data} does not fit in {width} bits")
        return [(data >> b) & 1 for b in range(width)]
    text = str(data)
    if len(text) != width or any(ch not in "01" for ch in text):
        raise ValueError(f"data must be {width} binary digits, got {text!r}")
    return [int(ch) for ch in reversed(text)]


def format_word(bits: Sequence[Union[int, str]]) -> str:
    """MSB-first text of bits indexed by IO line."""
    return "".join(str(b) for b in reversed(bits))


def alternating_word(width: int, msb: int = 1) -> str:
    """"1010..." (msb=1) or "0101..." (msb=0) of the given width."""
    return "".join(str(msb ^ (i % 2)) for i in range(width))


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BitWrite:
    bit: int
    column: int
    target: int
    vpn: float
    margin: float
    ok: bool


@dataclass(frozen=True)
class WriteResult:
    x: int
    y: int
    data: str
    bits: List[BitWrite]

    @property
    def ok(self) -> bool:
        return all(b.ok for b in self.bits)

    @property
    def worst_margin(self) -> float:
        return min(b.margin for b in self.bits)


@dataclass(frozen=True)
class ReadResult:
    """
    Outcome of one read.

    Attributes:
        data (str): MSB-first word on the bus; unreliable bits read as "x"
        senses (list): SenseResult per IO line
        levels (list): sense output level per IO line, volts
        develop_time (float): effective develop time used, seconds
    """
    x: int
    y: int
    data: str
    senses: List[SenseResult]
    levels: List[float]
    develop_time: float

    @property
    def reliable(self) -> bool:
        return all(s.reliable for s in self.senses)

    @property
    def worst_margin(self) -> float:
        return min(s.margin for s in self.senses)


# ---------------------------------------------------------------------------
# Simulator
# ---------------------------------------------------------------------------

@dataclass
class SimState:
    """Snapshot of a simulator for inspection and tests."""
    fsm: FsmState
    cycle: int
    clock_period: float
    io_bus: Optional[str]
    cells: np.ndarray = field(repr=False)


class MemorySimulator:
    """
    Cycle-level behavioral simulator of one memory instance.

    The FSM starts in RESET, so reset() must run before the first write or
    read. Write and read raise OverlappingOperation unless the controller is
    IDLE.
    """

    def __init__(
        self,
        g: MemoryGeometry,
        t: TechnologyProfile,
        clock_hz: float,
        fill: Optional[FillRule] = None,
    ):
        if not clock_hz > 0:
            raise ValueError(f"clock_hz must be > 0, got {clock_hz}")
        self.geometry = g
        self.technology = t
        self.clock_hz = clock_hz
        self.clock_period = 1.0 / clock_hz
        self.cells = fill_matrix(fill or UniformFill(), g)
        self.write_ok = np.zeros((g.M, g.N), dtype=bool)
        self.controller = Controller(PhaseTiming(t.write_cycles, t.read_phase_cycles))
        self.cycle = 0
        self.io_bus: Optional[str] = None
        self.records: List[dict] = []
        self.trace = self._new_trace()
        logger.debug(f"Simulator created for {g.label()} at {clock_hz:g} Hz")

    # -- trace plumbing -----------------------------------------------------

    def _new_trace(self) -> WaveTrace:
        g = self.geometry
        trace = WaveTrace(self.clock_period / TICKS_PER_CYCLE, scope=f"rram_{g.label()}")
        for name in ("CLK", "RESET", "EN", "RW"):
            trace.declare(name)
        trace.declare("X_ADDR", max(1, g.X))
        trace.declare("Y_ADDR", max(1, g.Y))
        trace.declare("DATA_IN", g.B)
        for name in _CONTROL_NETS:
            trace.declare(name)
        trace.declare("Z_BUS", g.B)
        trace.declare("WR_OK", g.B)
        for b in range(g.B):
            trace.declare(f"VPN{b}", kind="real")
        for b in range(g.B):
            trace.declare(f"Z_SA{b}", kind="real")

        for name in ("RESET", "EN", "RW", "X_ADDR", "Y_ADDR", "DATA_IN") + _CONTROL_NETS:
            trace.record(name, 0, 0)
        trace.record("Z_BUS", 0, "z" * g.B)
        trace.record("WR_OK", 0, 0)
        for b in range(g.B):
            trace.record(f"VPN{b}", 0, 0.0)
            trace.record(f"Z_SA{b}", 0, self.technology.vddl)
        return trace

    @property
    def tick(self) -> int:
        return self.cycle * TICKS_PER_CYCLE

    @property
    def state(self) -> FsmState:
        return self.controller.state

    def snapshot(self) -> SimState:
        return SimState(self.state, self.cycle, self.clock_period, self.io_bus, self.cells.copy())

    def _step(self, inputs: FsmInputs = IDLE_INPUTS, data_in: int = 0):
        start = self.tick
        mid = start + TICKS_PER_CYCLE // 2
        self.trace.record("CLK", start, 1)
        self.trace.record("CLK", mid, 0)
        self.trace.record("RESET", mid, inputs.reset)
        self.trace.record("EN", mid, inputs.en)
        self.trace.record("RW", mid, inputs.rw)
        if inputs.en:
            self.trace.record("X_ADDR", mid, inputs.x_addr)
            self.trace.record("Y_ADDR", mid, inputs.y_addr)
            self.trace.record("DATA_IN", mid, data_in)

        state, signals = self.controller.step(inputs)
        self.cycle += 1
        edge = self.tick
        for name, level in signals.as_dict().items():
            self.trace.record(name, edge, level)
        if not signals.io_drive and self.io_bus is not None:
            self.io_bus = None
            self.trace.record("Z_BUS", edge, "z" * self.geometry.B)
        return state

    def _require_idle(self, op: str):
        if self.state is not FsmState.IDLE:
            raise OverlappingOperation(f"cannot start {op} at cycle {self.cycle}: controller is in {self.state.value}")

    def _check_address(self, x: int, y: int):
        g = self.geometry
        if not 0 <= x < g.word_columns:
            raise AddressOutOfRange(f"x address {x} outside 0..{g.word_columns - 1}")
        if not 0 <= y < g.M:
            raise AddressOutOfRange(f"y address {y} outside 0..{g.M - 1}")

    # -- operations ---------------------------------------------------------

    def reset(self):
        """Assert RESET for one cycle, then release it; the FSM ends in IDLE."""
        start = self.cycle
        self._step(FsmInputs(reset=1))
        self._step()
        self.records.append({"op": "reset", "cycle": start, "state": self.state.value})
        logger.debug(f"Reset at cycle {start}")

    def idle(self, cycles: int = 1):
        if cycles < 0:
            raise ValueError(f"idle cycle count must be >= 0, got {cycles}")
        start = self.cycle
        for _ in range(cycles):
            self._step()
        self.records.append({"op": "idle", "cycle": start, "cycles": cycles})

    def set_cell(self, column: int, row: int, resistance: float):
        """Force one cell's resistance (test fixtures and scripts)."""
        g = self.geometry
        if not 0 <= column < g.N or not 0 <= row < g.M:
            raise AddressOutOfRange(f"cell ({column}, {row}) outside {g.N} columns x {g.M} rows")
        if not resistance > 0:
            raise FillError(f"cell resistance must be > 0, got {resistance}")
        self.cells[row, column] = float(resistance)
        self.records.append({"op": "set_cell", "cycle": self.cycle, "column": column, "row": row,
                             "ohms": float(resistance)})

    def write(self, x: int, y: int, data: Union[str, int]) -> WriteResult:
        """
        Write one word.

        The word's bit columns are driven for write_cycles cycles and each
        cell is judged on V_PN 0.4 of a period into the last write cycle.
        Takes 1 + write_cycles cycles.

        Raises:
            OverlappingOperation: If the controller is not IDLE
            AddressOutOfRange: If (x, y) is outside the geometry
            ValueError: If data is not a B-bit word
        """
        self._require_idle("write")
        self._check_address(x, y)
        g, t = self.geometry, self.technology
        bits = parse_word(data, g.B)
        word = format_word(bits)
        start_cycle = self.cycle

        self._step(FsmInputs(en=1, rw=0, x_addr=x, y_addr=y), data_in=int(word, 2))
        for _ in range(self.controller.timing.write_cycles - 1):
            self._step()

        checkpoint = self.tick + CHECKPOINT_TICKS
        t_elapsed = (self.controller.timing.write_cycles - 1 + CHECKPOINT_TICKS / TICKS_PER_CYCLE) * self.clock_period
        results = []
        for b, target in enumerate(bits):
            col = g.column(x, b)
            model = address_parasitics(g, t, x, y, memristance=self.cells[y, col])
            vpn = vpn_at(model, write_driver(target, t), t_elapsed)
            cell = apply_write(MemristorState(float(self.cells[y, col])), vpn, t, target)
            self.cells[y, col] = cell.resistance
            self.write_ok[y, col] = cell.last_write_ok
            results.append(BitWrite(b, col, target, vpn, write_margin(vpn, t, target), cell.last_write_ok))
            self.trace.record(f"VPN{b}", checkpoint, vpn)
        self.trace.record("WR_OK", checkpoint, sum(int(r.ok) << r.bit for r in results))

        self._step()
        for b in range(g.B):
            self.trace.record(f"VPN{b}", self.tick, 0.0)

        result = WriteResult(x, y, word, results)
        self.records.append({
            "op": "write",
            "cycle": start_cycle,
            "x": x,
            "y": y,
            "data": word,
            "ok": result.ok,
            "bits": [{"bit": r.bit, "column": r.column, "vpn": r.vpn, "margin": r.margin, "ok": r.ok}
                     for r in results],
        })
        if not result.ok:
            logger.warning(f"Write of {word} at ({x}, {y}) failed on bits "
                           f"{[r.bit for r in results if not r.ok]} (worst margin {result.worst_margin:.4g} V)")
        else:
            logger.debug(f"Write of {word} at ({x}, {y}) ok, worst margin {result.worst_margin:.4g} V")
        return result

    def read(self, x: int, y: int, expect: Optional[str] = None) -> ReadResult:
        """
        Read one word through the three-phase sense sequence.

        DVLP spans the first two read phases; the sense amplifiers resolve
        when EN_SA rises in phase 3 and the bus is captured 0.4 of a period
        later. Reads never modify cell resistances. Takes 1 + 3 *
        read_phase_cycles cycles.

        Args:
            x (int): word column address
            y (int): row address
            expect (str, optional): expected MSB-first word, checked against
                the sensed levels with the read thresholds and logged

        Raises:
            OverlappingOperation: If the controller is not IDLE
            AddressOutOfRange: If (x, y) is outside the geometry
        """
        self._require_idle("read")
        self._check_address(x, y)
        g, t = self.geometry, self.technology
        expected_bits = parse_word(expect, g.B) if expect is not None else None
        phase = self.controller.timing.read_phase_cycles
        start_cycle = self.cycle

        self._step(FsmInputs(en=1, rw=1, x_addr=x, y_addr=y))
        for b in range(g.B):
            self.trace.record(f"Z_SA{b}", self.tick, t.vddl)

        develop = effective_develop_time(g, t, x, y, 2 * phase * self.clock_period)
        senses, levels, bus = [], [], []
        for b in range(g.B):
            r_cell, r_ref = read_paths(g, t, x, y, float(self.cells[y, g.column(x, b)]))
            result = sense(r_cell, r_ref, develop, 0.0, t)
            senses.append(result)
            levels.append(sensed_level(result, t))
            bus.append(result.bit if result.reliable else "x")

        for _ in range(2 * phase):
            self._step()
        ph3 = self.tick
        word = format_word(bus)
        for b in range(g.B):
            self.trace.record(f"Z_SA{b}", ph3, levels[b])
        self.io_bus = word
        self.trace.record("Z_BUS", ph3, word)

        for _ in range(phase):
            self._step()

        result = ReadResult(x, y, word, senses, levels, develop)
        record = {
            "op": "read",
            "cycle": start_cycle,
            "x": x,
            "y": y,
            "data": word,
            "develop_time": develop,
            "capture_time": (ph3 + CHECKPOINT_TICKS) * self.trace.tick_seconds,
            "bits": [{"bit": b, "level": levels[b], "margin": s.margin, "reliable": s.reliable}
                     for b, s in enumerate(senses)],
        }
        if expected_bits is not None:
            failing = [b for b in range(g.B) if not read_level_ok(levels[b], expected_bits[b], t)]
            record["expect"] = format_word(expected_bits)
            record["ok"] = not failing
            if failing:
                logger.warning(f"Read at ({x}, {y}) got {word}, expected {record['expect']}; "
                               f"failing bits {failing}")
        self.records.append(record)
        if not result.reliable:
            logger.warning(f"Unreliable sense at ({x}, {y}): worst margin {result.worst_margin:.4g} V")
        return result

    def read_matches(self, result: ReadResult, expect: str) -> bool:
        """True when every sensed level meets the read threshold for `expect`."""
        bits = parse_word(expect, self.geometry.B)
        return all(read_level_ok(level, bit, self.technology) for level, bit in zip(result.levels, bits))

    def run_log_header(self) -> dict:
        g = self.geometry
        return {
            "record": "header",
            "schema_version": RUN_LOG_SCHEMA_VERSION,
            "design": g.label(),
            "M": g.M,
            "N": g.N,
            "B": g.B,
            "clock_hz": self.clock_hz,
        }


def run_log_jsonl(header: dict, records: Sequence[dict]) -> str:
    """One JSON object per line: the header first, then the operation records in order."""
    lines = [json.dumps(header)]
    lines.extend(json.dumps({"record": "op", **rec}) for rec in records)
    return "\n".join(lines) + "\n"
