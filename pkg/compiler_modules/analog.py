"""
Analog Behavioral Models Module

This module provides the first-order electrical models the simulator uses at
its two checkpoints: the bitline voltage across a cell while it is written,
and the sense amplifier decision while it is read.

Write path:
    write_driver gives the P/N polarity for a data bit, address_parasitics
    gives the lumped RC load of the addressed cell, vpn_at evaluates the
    single-pole response at a point in time and apply_write decides whether
    the cell switched.

Read path:
    effective_develop_time trims the DVLP window by bitline settling and
    control-signal fan-out, read_paths gives the cell and reference path
    resistances, and sense integrates the current difference on the sense
    node.

Functions:
    write_driver, vpn_at, address_parasitics, apply_write, write_margin,
    sense, sensed_level, read_level_ok, effective_develop_time, read_paths

Usage:
    from compiler_modules.analog import write_driver, address_parasitics, vpn_at

    model = address_parasitics(g, tech, 6, 31, memristance=1e6)
    vpn = vpn_at(model, write_driver(0, tech), 0.4 * 80e-9)
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from .exceptions import AddressOutOfRange
from .geometry import MemoryGeometry
from .technology import TechnologyProfile


@dataclass(frozen=True)
class MemristorState:
    """Resistance of one cell and whether the last write to it succeeded."""
    resistance: float
    last_write_ok: bool = False

    def __post_init__(self):
        if not self.resistance > 0:
            raise ValueError(f"memristor resistance must be > 0, got {self.resistance}")


@dataclass(frozen=True)
class DrivePair:
    """Voltages the write driver puts on the P and N lines."""
    v_p: float
    v_n: float

    @property
    def vpn(self) -> float:
        return self.v_p - self.v_n


@dataclass(frozen=True)
class SettlingModel:
    """
    Lumped load seen by the write driver for one cell.

    Attributes:
        r_drive (float): driver output resistance
        r_path (float): multiplexer plus line resistance to the cell
        c_node (float): lumped line capacitance up to the cell
        r_cell (float): access transistor plus memristance
    """
    r_drive: float
    r_path: float
    c_node: float
    r_cell: float

    def __post_init__(self):
        for name in ("r_drive", "r_path", "c_node", "r_cell"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def r_thevenin(self) -> float:
        r_series = self.r_drive + self.r_path
        return r_series * self.r_cell / (r_series + self.r_cell)

    @property
    def tau(self) -> float:
        return self.r_thevenin * self.c_node

    def final_fraction(self) -> float:
        """Divider ratio of the settled cell voltage to the drive voltage."""
        return self.r_cell / (self.r_cell + self.r_drive + self.r_path)


@dataclass(frozen=True)
class SenseResult:
    """
    Outcome of one sense amplifier decision.

    Attributes:
        bit (int): decided bit, 1 when the cell is more resistive than the reference
        margin (float): developed signal minus total input-referred offset, volts
        reliable (bool): margin > 0 and the develop window was long enough
        delta (float): signed developed differential signal, volts
    """
    bit: int
    margin: float
    reliable: bool
    delta: float


def write_driver(bit_in: int, t: TechnologyProfile) -> DrivePair:
    """
    Level-shifted write polarity for one data bit.

    A 0 (LRS) drives P to VDDW and N to 0 V; a 1 (HRS) drives P to 0 V and
    N to VDDW.
    """
    if bit_in:
        return DrivePair(v_p=0.0, v_n=t.vddw)
    return DrivePair(v_p=t.vddw, v_n=0.0)


def vpn_at(m: SettlingModel, drive: DrivePair, t_elapsed: float) -> float:
    """
    Voltage across the cell's P/N terminals t_elapsed seconds after the drive starts.

    The response is the exact single-pole Thevenin step response:
    V(t) = V_final * (1 - exp(-t / tau)), with V_final set by the divider of
    the cell against driver and path, and tau by the Thevenin resistance and
    the lumped line capacitance.

    Args:
        m (SettlingModel): load of the addressed cell
        drive (DrivePair): driver output voltages
        t_elapsed (float): seconds since the write phase started, >= 0

    Returns:
        float: signed V_PN in volts

    Raises:
        ValueError: If t_elapsed is negative
    """
    if t_elapsed < 0:
        raise ValueError(f"t_elapsed must be >= 0, got {t_elapsed}")
    v_final = drive.vpn * m.final_fraction()
    return v_final * -math.expm1(-t_elapsed / m.tau)


def address_parasitics(
    g: MemoryGeometry,
    t: TechnologyProfile,
    x: int,
    y: int,
    memristance: Optional[float] = None,
) -> SettlingModel:
    """
    Lumped RC load between the drivers and word (x, y).

    Drivers and sense amplifiers sit at the bottom left of the array. The
    path runs y + 1 row pitches up the bitline and x * B column pitches
    along the multiplexer bus, each segment adding r_line_per_cell and
    c_line_per_cell.

    Args:
        g (MemoryGeometry): array geometry
        t (TechnologyProfile): technology (already cornered if needed)
        x (int): word column address
        y (int): row address
        memristance (float, optional): cell resistance to put in series with
            the access transistor; without it r_cell is the access transistor alone

    Returns:
        SettlingModel: the load model

    Raises:
        AddressOutOfRange: If (x, y) is outside the geometry
    """
    if not 0 <= x < g.word_columns:
        raise AddressOutOfRange(f"x address {x} outside 0..{g.word_columns - 1}")
    if not 0 <= y < g.M:
        raise AddressOutOfRange(f"y address {y} outside 0..{g.M - 1}")

    segments = (y + 1) + x * g.B
    return SettlingModel(
        r_drive=t.r_driver,
        r_path=t.r_mux_on + t.r_line_per_cell * segments,
        c_node=t.c_line_per_cell * segments,
        r_cell=t.r_on_access + (0.0 if memristance is None else memristance),
    )


def write_margin(vpn: float, t: TechnologyProfile, target: int) -> float:
    """Signed distance of V_PN past the write threshold for `target` (positive = passes)."""
    required = t.write_threshold * t.vddw
    return (-vpn if target else vpn) - required


def apply_write(cell: MemristorState, vpn_at_deadline: float, t: TechnologyProfile, target: int) -> MemristorState:
    """
    Switch a cell if V_PN reached the write threshold with the right sign.

    A 0 needs V_PN >= +threshold * VDDW and leaves the cell at the LRS value;
    a 1 needs V_PN <= -threshold * VDDW and leaves it at the HRS value.
    Otherwise the resistance is kept and last_write_ok is cleared.
    """
    if write_margin(vpn_at_deadline, t, target) >= 0:
        return MemristorState(t.hrs_resistance if target else t.lrs_resistance, True)
    return replace(cell, last_write_ok=False)


def sense(
    r_cell: float,
    r_ref: float,
    develop_time: float,
    corner_offset: float,
    t: TechnologyProfile,
) -> SenseResult:
    """
    Sense amplifier decision between a cell path and a reference path.

    Both paths are biased at read_bias * VDDL. The current difference is
    integrated on the sense node capacitance c_sense for develop_time and
    clipped to the VDDL rail. The decided bit is 1 when the cell carries less
    current than the reference (HRS).

    Args:
        r_cell (float): cell path resistance, ohms
        r_ref (float): reference path resistance, ohms
        develop_time (float): usable develop window, seconds
        corner_offset (float): offset on top of the profile's sense_offset, volts
        t (TechnologyProfile): technology

    Returns:
        SenseResult: decision, margin and reliability
    """
    if r_cell <= 0 or r_ref <= 0:
        raise ValueError("sense resistances must be > 0")
    if develop_time < 0:
        raise ValueError(f"develop_time must be >= 0, got {develop_time}")

    v_bias = t.read_bias * t.vddl
    current_diff = v_bias * (1.0 / r_ref - 1.0 / r_cell)
    delta = current_diff * develop_time / t.c_sense
    delta = max(-t.vddl, min(t.vddl, delta))

    margin = abs(delta) - abs(corner_offset + t.sense_offset)
    reliable = margin > 0 and develop_time >= t.sense_min_develop
    return SenseResult(bit=1 if delta > 0 else 0, margin=margin, reliable=reliable, delta=delta)


def sensed_level(result: SenseResult, t: TechnologyProfile) -> float:
    """Sense output (VO1) after phase 3: rail for a reliable decision, mid-rail otherwise."""
    if not result.reliable:
        return t.vddl / 2.0
    return t.vddl if result.bit else 0.0


def read_level_ok(level: float, expected_bit: int, t: TechnologyProfile) -> bool:
    if expected_bit:
        return level > t.read_high_threshold * t.vddl
    return level < t.read_low_threshold * t.vddl


def effective_develop_time(
    g: MemoryGeometry,
    t: TechnologyProfile,
    x: int,
    y: int,
    dvlp_duration: float,
) -> float:
    """
    Part of the DVLP window left for developing the sense signal.

    The bitline must first settle to its bias (bitline_settle_taus time
    constants of the read path) and the level-down circuit must swing the
    VDDL control lines of all B sense amplifiers.
    """
    m = address_parasitics(g, t, x, y)
    settle = t.bitline_settle_taus * m.r_path * m.c_node
    fanout = t.level_down_delay + g.B * t.level_down_fanout_delay
    return max(0.0, dvlp_duration - settle - fanout)


def read_paths(
    g: MemoryGeometry,
    t: TechnologyProfile,
    x: int,
    y: int,
    memristance: float,
) -> Tuple[float, float]:
    """(cell path, reference path) resistances for reading word (x, y)."""
    m = address_parasitics(g, t, x, y)
    return memristance + t.r_on_access + m.r_path, t.r_ref_effective + m.r_path
