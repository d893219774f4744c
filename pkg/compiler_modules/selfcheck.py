"""
Random self-check against a plain word-array model.

A seeded random sequence of writes and reads runs on the simulator and on
a dictionary of words; every read must return the word the dictionary
holds. Unwritten words read as all ones, since the default fill is the
1 MOhm extreme, well above the reference.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .geometry import MemoryGeometry
from .simulator import MemorySimulator, UniformFill
from .technology import TechnologyProfile

logger = logging.getLogger(__name__)


class WordArrayModel:
    """B-bit words addressed by (x, y), initialised to all ones."""

    def __init__(self, g: MemoryGeometry):
        self.width = g.B
        self.words: Dict[Tuple[int, int], str] = {}

    def write(self, x: int, y: int, data: str):
        self.words[(x, y)] = data

    def read(self, x: int, y: int) -> str:
        return self.words.get((x, y), "1" * self.width)


def random_operations(g: MemoryGeometry, count: int, rng: random.Random) -> List[Tuple]:
    """("write", x, y, data) or ("read", x, y) tuples."""
    ops = []
    for _ in range(count):
        x = rng.randrange(g.word_columns)
        y = rng.randrange(g.M)
        if rng.random() < 0.5:
            data = "".join(rng.choice("01") for _ in range(g.B))
            ops.append(("write", x, y, data))
        else:
            ops.append(("read", x, y))
    return ops


@dataclass
class SelfCheckResult:
    operations: int = 0
    mismatches: List[Tuple[int, int, int, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def run_self_check(
    g: MemoryGeometry,
    t: TechnologyProfile,
    clock_hz: float,
    count: int,
    seed: int,
    sim: Optional[MemorySimulator] = None,
) -> SelfCheckResult:
    """
    Run `count` random operations and compare every read with the model.

    Mismatches are (operation index, x, y, got, expected).
    """
    rng = random.Random(seed)
    sim = sim or MemorySimulator(g, t, clock_hz, UniformFill(1e6))
    model = WordArrayModel(g)
    sim.reset()

    result = SelfCheckResult()
    for index, op in enumerate(random_operations(g, count, rng)):
        if op[0] == "write":
            _, x, y, data = op
            sim.write(x, y, data)
            model.write(x, y, data)
        else:
            _, x, y = op
            got = sim.read(x, y).data
            expected = model.read(x, y)
            if got != expected:
                result.mismatches.append((index, x, y, got, expected))
        result.operations += 1

    if result.mismatches:
        logger.warning(f"Self-check seed {seed}: {len(result.mismatches)} of {count} operations mismatched")
    else:
        logger.info(f"Self-check seed {seed}: {count} operations matched the word-array model")
    return result
