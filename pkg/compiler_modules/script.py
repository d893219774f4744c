"""
Simulation script parser and runner.

One operation per line, blank lines and '#' comments ignored:

    reset
    write <x> <y> <data>          data: B binary digits, MSB first
    read <x> <y> [<expect>]       expect: B binary digits, MSB first
    set_cell <column> <row> <ohms>
    idle <cycles>
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .exceptions import RramError, ScriptError
from .geometry import MemoryGeometry
from .simulator import MemorySimulator

logger = logging.getLogger(__name__)

_ARITY = {
    "reset": (0, 0),
    "write": (3, 3),
    "read": (2, 3),
    "set_cell": (3, 3),
    "idle": (1, 1),
}


@dataclass(frozen=True)
class ScriptOp:
    op: str
    args: Tuple
    line: int


@dataclass
class ScriptOutcome:
    """Expectation failures as (line, message), in script order."""
    failures: List[Tuple[int, str]] = field(default_factory=list)
    reads: int = 0
    writes: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def _int(token: str, what: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ScriptError(f"{what} must be an integer, got {token!r}", line)
    if value < 0:
        raise ScriptError(f"{what} must be >= 0, got {value}", line)
    return value


def _word(token: str, what: str, line: int, g: Optional[MemoryGeometry]) -> str:
    if any(ch not in "01" for ch in token):
        raise ScriptError(f"{what} must be binary digits, got {token!r}", line)
    if g is not None and len(token) != g.B:
        raise ScriptError(f"{what} must have {g.B} digits, got {len(token)}", line)
    return token


def parse_script(text: str, g: Optional[MemoryGeometry] = None) -> List[ScriptOp]:
    """
    Parse script text into operations.

    Args:
        text (str): script source
        g (MemoryGeometry, optional): when given, word widths and addresses are checked

    Raises:
        ScriptError: On the first malformed line, carrying its line number
    """
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        op, args = tokens[0].lower(), tokens[1:]
        if op not in _ARITY:
            raise ScriptError(f"unknown operation {tokens[0]!r}", lineno)
        low, high = _ARITY[op]
        if not low <= len(args) <= high:
            expected = str(low) if low == high else f"{low}-{high}"
            raise ScriptError(f"{op} takes {expected} arguments, got {len(args)}", lineno)

        if op == "write":
            parsed = (_int(args[0], "x", lineno), _int(args[1], "y", lineno), _word(args[2], "data", lineno, g))
        elif op == "read":
            parsed = (_int(args[0], "x", lineno), _int(args[1], "y", lineno))
            if len(args) == 3:
                parsed += (_word(args[2], "expect", lineno, g),)
        elif op == "set_cell":
            try:
                ohms = float(args[2])
            except ValueError:
                raise ScriptError(f"ohms must be a number, got {args[2]!r}", lineno)
            if not ohms > 0:
                raise ScriptError(f"ohms must be > 0, got {args[2]}", lineno)
            parsed = (_int(args[0], "column", lineno), _int(args[1], "row", lineno), ohms)
        elif op == "idle":
            parsed = (_int(args[0], "cycles", lineno),)
        else:
            parsed = ()

        if g is not None:
            _check_range(op, parsed, g, lineno)
        ops.append(ScriptOp(op, parsed, lineno))
    return ops


def _check_range(op: str, args: Tuple, g: MemoryGeometry, line: int):
    if op in ("write", "read"):
        if args[0] >= g.word_columns:
            raise ScriptError(f"x address {args[0]} outside 0..{g.word_columns - 1}", line)
        if args[1] >= g.M:
            raise ScriptError(f"y address {args[1]} outside 0..{g.M - 1}", line)
    elif op == "set_cell":
        if args[0] >= g.N or args[1] >= g.M:
            raise ScriptError(f"cell ({args[0]}, {args[1]}) outside {g.N} columns x {g.M} rows", line)


def run_script(sim: MemorySimulator, ops: List[ScriptOp]) -> ScriptOutcome:
    """
    Execute parsed operations in order.

    Failed writes and reads that miss their expectation are collected; the
    run continues.

    Raises:
        ScriptError: When an operation cannot be issued (e.g. before reset),
            naming the script line
    """
    outcome = ScriptOutcome()
    for step in ops:
        try:
            if step.op == "reset":
                sim.reset()
            elif step.op == "idle":
                sim.idle(*step.args)
            elif step.op == "set_cell":
                sim.set_cell(*step.args)
            elif step.op == "write":
                outcome.writes += 1
                result = sim.write(*step.args)
                if not result.ok:
                    failing = [b.bit for b in result.bits if not b.ok]
                    outcome.failures.append((step.line, f"write of {result.data} at ({result.x}, {result.y}) "
                                                        f"failed on bits {failing}"))
            elif step.op == "read":
                outcome.reads += 1
                x, y = step.args[:2]
                expect = step.args[2] if len(step.args) == 3 else None
                result = sim.read(x, y, expect=expect)
                if expect is not None and not sim.read_matches(result, expect):
                    outcome.failures.append((step.line, f"read at ({x}, {y}) got {result.data}, expected {expect}"))
        except (RramError, ValueError) as e:
            raise ScriptError(str(e), step.line)
    logger.info(f"Script ran {len(ops)} operations: {outcome.writes} writes, {outcome.reads} reads, "
                f"{len(outcome.failures)} failed checks")
    return outcome
