"""
Digital Controller Module

Cycle-level model of the memory controller FSM: an idle state, a one-phase
write and a three-phase read (develop, precharge release, sense enable),
with the decoder enable and the tri-state IO drive.

The pure transition function fsm_step advances one phase per call. The
Controller class wraps it with phase lengths in clock cycles so a slow
profile can stretch the write or each read phase.

Functions:
    fsm_step: One transition of the FSM
    signals_for: Control signal levels asserted in a state
    sequence_trace: Replay a list of timed inputs

Classes:
    Controller: Stateful wrapper with configurable phase lengths
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from .exceptions import OverlappingOperation

logger = logging.getLogger(__name__)


class FsmState(Enum):
    RESET = "RESET"
    IDLE = "IDLE"
    WRITE = "WRITE"
    READ_PH1 = "READ_PH1"
    READ_PH2 = "READ_PH2"
    READ_PH3 = "READ_PH3"

    @property
    def is_read(self) -> bool:
        return self in (FsmState.READ_PH1, FsmState.READ_PH2, FsmState.READ_PH3)

    @property
    def busy(self) -> bool:
        return self is FsmState.WRITE or self.is_read


@dataclass(frozen=True)
class ControlSignals:
    read: int = 0
    write: int = 0
    dvlp: int = 0
    pre: int = 0
    en_sa: int = 0
    dec_en: int = 0
    io_drive: int = 0

    def __post_init__(self):
        if self.read and self.write:
            raise ValueError("READ and WRITE cannot both be asserted")
        if self.en_sa and self.dvlp:
            raise ValueError("EN_SA cannot be asserted while DVLP is high")

    def as_dict(self):
        return {
            "READ": self.read,
            "WRITE": self.write,
            "DVLP": self.dvlp,
            "PRE": self.pre,
            "EN_SA": self.en_sa,
            "DEC_EN": self.dec_en,
            "IO_DRIVE": self.io_drive,
        }


@dataclass(frozen=True)
class FsmInputs:
    """
    Inputs sampled on a rising clock edge.

    Attributes:
        en (int): chip enable
        rw (int): 1 = read, 0 = write
        reset (int): synchronous reset
        x_addr (int): word column address
        y_addr (int): row address
    """
    en: int = 0
    rw: int = 0
    reset: int = 0
    x_addr: int = 0
    y_addr: int = 0


IDLE_INPUTS = FsmInputs()

_SIGNALS = {
    FsmState.RESET: ControlSignals(),
    FsmState.IDLE: ControlSignals(),
    FsmState.WRITE: ControlSignals(write=1, dec_en=1),
    FsmState.READ_PH1: ControlSignals(read=1, dvlp=1, dec_en=1),
    FsmState.READ_PH2: ControlSignals(read=1, dvlp=1, pre=1, dec_en=1),
    FsmState.READ_PH3: ControlSignals(read=1, pre=1, en_sa=1, dec_en=1, io_drive=1),
}

_NEXT = {
    FsmState.WRITE: FsmState.IDLE,
    FsmState.READ_PH1: FsmState.READ_PH2,
    FsmState.READ_PH2: FsmState.READ_PH3,
    FsmState.READ_PH3: FsmState.IDLE,
}


def signals_for(state: FsmState) -> ControlSignals:
    return _SIGNALS[state]


def fsm_step(s: FsmState, inputs: FsmInputs) -> Tuple[FsmState, ControlSignals]:
    """
    Advance the controller by one phase.

    Reset dominates every other input. From IDLE, EN with RW=0 starts a
    write and EN with RW=1 starts the three read phases; EN is ignored in
    every other state. The returned signals are those of the new state.

    Args:
        s (FsmState): current state
        inputs (FsmInputs): inputs sampled on this edge

    Returns:
        tuple: (next state, control signals of the next state)
    """
    if inputs.reset:
        nxt = FsmState.RESET
    elif s is FsmState.RESET:
        nxt = FsmState.IDLE
    elif s is FsmState.IDLE:
        if inputs.en:
            nxt = FsmState.READ_PH1 if inputs.rw else FsmState.WRITE
        else:
            nxt = FsmState.IDLE
    else:
        nxt = _NEXT[s]
    return nxt, _SIGNALS[nxt]


@dataclass(frozen=True)
class PhaseTiming:
    """Length of the write phase and of each read phase, in clock cycles."""
    write_cycles: int = 1
    read_phase_cycles: int = 1

    def __post_init__(self):
        if self.write_cycles < 1 or self.read_phase_cycles < 1:
            raise ValueError("phase lengths must be at least one cycle")

    @property
    def read_cycles(self) -> int:
        return 3 * self.read_phase_cycles


class Controller:
    """
    FSM with phase lengths counted in clock cycles.

    Each call to step() is one rising clock edge.
    """

    def __init__(self, timing: Optional[PhaseTiming] = None, state: FsmState = FsmState.RESET):
        self.timing = timing or PhaseTiming()
        self.state = state
        self._held = 0

    def _hold_for(self, state: FsmState) -> int:
        if state is FsmState.WRITE:
            return self.timing.write_cycles
        if state.is_read:
            return self.timing.read_phase_cycles
        return 1

    @property
    def signals(self) -> ControlSignals:
        return _SIGNALS[self.state]

    def step(self, inputs: FsmInputs) -> Tuple[FsmState, ControlSignals]:
        if not inputs.reset and self.state.busy and self._held + 1 < self._hold_for(self.state):
            self._held += 1
            return self.state, self.signals
        self.state, sig = fsm_step(self.state, inputs)
        self._held = 0
        return self.state, sig


def sequence_trace(
    ops: Iterable[Tuple[int, FsmInputs]],
    n_cycles: Optional[int] = None,
    timing: Optional[PhaseTiming] = None,
    start: FsmState = FsmState.IDLE,
) -> List[Tuple[int, FsmState, ControlSignals]]:
    """
    Replay timed inputs through the controller.

    Inputs given for cycle c are sampled on the edge that ends cycle c, so
    the resulting state is reported at cycle c + 1. Cycles without an entry
    use idle inputs. Without n_cycles the replay runs until the controller
    has drained back to IDLE after the last operation; an empty list replays
    one idle edge, which leaves RESET for IDLE.

    Args:
        ops: (cycle, inputs) pairs with strictly increasing cycles
        n_cycles (int, optional): number of edges to simulate
        timing (PhaseTiming, optional): phase lengths
        start (FsmState): state before the first edge

    Returns:
        list: (cycle, state, signals) for cycles 1..n

    Raises:
        ValueError: If cycles are not strictly increasing or negative
        OverlappingOperation: If EN is asserted while a write or read is in flight
    """
    schedule = {}
    last = -1
    for cycle, inputs in ops:
        if cycle <= last:
            raise ValueError(f"operation cycles must be strictly increasing (got {cycle} after {last})")
        schedule[cycle] = inputs
        last = cycle

    ctrl = Controller(timing, state=start)
    if n_cycles is None:
        drain = max(ctrl.timing.write_cycles, ctrl.timing.read_cycles) + 1
        n_cycles = last + 1 + drain if schedule else 1

    trace = []
    for cycle in range(n_cycles):
        inputs = schedule.get(cycle, IDLE_INPUTS)
        if inputs.en and not inputs.reset and ctrl.state.busy:
            raise OverlappingOperation(f"EN asserted at cycle {cycle} while controller is in {ctrl.state.value}")
        state, sig = ctrl.step(inputs)
        trace.append((cycle + 1, state, sig))
    logger.debug(f"Replayed {len(schedule)} operations over {n_cycles} cycles")
    return trace
