"""
Waveform Trace Module

This module records per-signal value changes during a simulation and writes
them as a standard value change dump with pyvcd.

Times are integer ticks of a fixed tick length (the simulator uses a
twentieth of the clock period), so every checkpoint lands on an exact tick
and the dump is byte-identical between runs.

Value kinds:
    wire, width 1: 0, 1, "x" or "z"
    wire, width > 1: an int, or a string of 0/1/x/z digits MSB-first
    real: a float

Usage:
    from compiler_modules.waveform import WaveTrace, export_vcd

    trace = WaveTrace(tick_seconds=2e-9)
    trace.declare("CLK")
    trace.record("CLK", 0, 1)
    text = export_vcd(trace)
"""

import io
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

from vcd import VCDWriter

Value = Union[int, float, str]

_UNITS = (("s", 0), ("ms", -3), ("us", -6), ("ns", -9), ("ps", -12), ("fs", -15))


@dataclass(frozen=True)
class SignalDef:
    name: str
    width: int = 1
    kind: str = "wire"


class WaveTrace:
    """
    Time-ordered value changes for a fixed set of declared signals.

    Recording a value equal to the signal's last value is a no-op, and a
    second record at the same tick replaces the first, so change lists stay
    strictly increasing in time.
    """

    def __init__(self, tick_seconds: float, scope: str = "rram"):
        if tick_seconds <= 0:
            raise ValueError(f"tick_seconds must be > 0, got {tick_seconds}")
        self.tick_seconds = tick_seconds
        self.scope = scope
        self._signals: Dict[str, SignalDef] = {}
        self._changes: Dict[str, List[Tuple[int, Value]]] = {}

    def declare(self, name: str, width: int = 1, kind: str = "wire"):
        if kind not in ("wire", "real"):
            raise ValueError(f"unknown signal kind {kind!r}")
        if name in self._signals:
            raise ValueError(f"signal {name} already declared")
        self._signals[name] = SignalDef(name, width if kind == "wire" else 64, kind)
        self._changes[name] = []

    @property
    def signals(self) -> List[SignalDef]:
        return list(self._signals.values())

    def changes(self, name: str) -> List[Tuple[int, Value]]:
        return list(self._changes[name])

    def value(self, name: str):
        """Last recorded value of a signal, or None."""
        changes = self._changes[name]
        return changes[-1][1] if changes else None

    def is_empty(self) -> bool:
        return not any(self._changes.values())

    def empty_copy(self) -> "WaveTrace":
        """Same declarations, no changes."""
        copy = WaveTrace(self.tick_seconds, self.scope)
        for sig in self._signals.values():
            copy.declare(sig.name, sig.width, sig.kind)
        return copy

    def record(self, name: str, tick: int, value: Value):
        changes = self._changes[name]
        if changes:
            last_tick, last_value = changes[-1]
            if tick < last_tick:
                raise ValueError(f"{name}: change at tick {tick} precedes tick {last_tick}")
            if tick == last_tick:
                changes.pop()
                if changes and changes[-1][1] == value:
                    return
            elif last_value == value:
                return
        changes.append((tick, value))


def choose_timescale(tick_seconds: float) -> Tuple[str, int]:
    """
    Largest VCD timescale that divides the tick exactly.

    Returns:
        tuple: (timescale text such as "1 ns", ticks-to-timescale multiplier)
    """
    for unit, exponent in _UNITS:
        for magnitude in (100, 10, 1):
            step = magnitude * 10.0 ** exponent
            ratio = tick_seconds / step
            nearest = round(ratio)
            if nearest >= 1 and abs(ratio - nearest) <= 1e-9 * ratio:
                return f"{magnitude} {unit}", int(nearest)
    return "1 fs", max(1, round(tick_seconds / 1e-15))


def _vcd_value(sig: SignalDef, value: Value) -> Value:
    if sig.kind == "real":
        return float(value)
    if sig.width > 1 and isinstance(value, int):
        return format(value, f"0{sig.width}b")
    return value


def export_vcd(trace: WaveTrace, version: str = "rram-compiler behavioral simulator") -> str:
    """
    Render a trace as value change dump text.

    Changes at one tick are written in declaration order and the header
    carries no date, so repeated runs are byte-identical. A trace with no
    recorded changes produces the definitions alone.
    """
    timescale, multiplier = choose_timescale(trace.tick_seconds)
    events = sorted(
        (tick, index, sig, value)
        for index, sig in enumerate(trace.signals)
        for tick, value in trace.changes(sig.name)
    )

    out = io.StringIO()
    with VCDWriter(out, timescale=timescale, date="", version=version) as writer:
        variables = {
            sig.name: writer.register_var(trace.scope, sig.name, sig.kind, size=sig.width)
            for sig in trace.signals
        }
        for tick, _, sig, value in events:
            writer.change(variables[sig.name], tick * multiplier, _vcd_value(sig, value))
    text = out.getvalue()

    if not events:
        head, end, _ = text.partition("$enddefinitions $end\n")
        text = head + end
    return text
