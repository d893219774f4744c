"""
Memory Geometry Module

This module validates the dimensional parameters of an RRAM instance and
derives the address widths and worst-case test addresses from them.

An array has M rows and N columns with M = 2^Y and N = B * 2^X, where B is the
word width. Words are grouped in 2^X word columns of B adjacent bit columns
each. All addresses are zero-based.

Functions:
    validate_geometry: Build a MemoryGeometry from (M, N, B)
    worst_case_write_address: Word address used by the W1/W2 tests
    worst_case_read_address: Word address used by the R1/R2 tests

Usage:
    from compiler_modules.geometry import validate_geometry, worst_case_read_address

    g = validate_geometry(32, 32, 4)
    print(g.X, g.Y)                       # 3 5
    print(worst_case_read_address(g))     # (7, 31)
"""

from dataclasses import dataclass
from typing import Tuple

from .exceptions import GeometryError, InvalidColumnCount, InvalidWordWidth, NonPowerOfTwo


def _is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


@dataclass(frozen=True)
class MemoryGeometry:
    """
    Validated dimension bundle of one memory instance.

    Attributes:
        M (int): row count, 2^Y
        N (int): column count, B * 2^X
        B (int): word width in bits
        X (int): column (word) address width in bits
        Y (int): row address width in bits
    """
    M: int
    N: int
    B: int
    X: int
    Y: int

    @property
    def word_columns(self) -> int:
        return 1 << self.X

    @property
    def word_count(self) -> int:
        return 1 << (self.X + self.Y)

    @property
    def capacity_bits(self) -> int:
        return self.M * self.N

    def column(self, x: int, bit: int) -> int:
        """Bit column of bit `bit` of the word in word column `x`."""
        return x * self.B + bit

    def label(self) -> str:
        return f"M{self.M}_N{self.N}_B{self.B}"


def validate_geometry(M: int, N: int, B: int) -> MemoryGeometry:
    """
    Validate (M, N, B) and derive the address widths.

    Args:
        M (int): number of rows
        N (int): number of columns
        B (int): word width in bits

    Returns:
        MemoryGeometry: geometry with X, Y derived

    Raises:
        GeometryError: If any input is below 1
        NonPowerOfTwo: If M is not a power of two of at least 2
        InvalidWordWidth: If B is not a power of two
        InvalidColumnCount: If N / B is not an integer power of two of at least 2

    Example:
        >>> validate_geometry(64, 64, 8)
        MemoryGeometry(M=64, N=64, B=8, X=3, Y=6)
    """
    for name, value in (("M", M), ("N", N), ("B", B)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise GeometryError(f"{name} must be an integer >= 1, got {value!r}")

    if not _is_power_of_two(M) or M < 2:
        raise NonPowerOfTwo(f"M must be a power of two >= 2, got {M}")
    if not _is_power_of_two(B):
        raise InvalidWordWidth(f"B must be a power of two, got {B}")
    if N % B != 0 or not _is_power_of_two(N // B) or N // B < 2:
        raise InvalidColumnCount(
            f"N / B must be an integer power of two >= 2, got N={N}, B={B}"
        )

    return MemoryGeometry(
        M=M,
        N=N,
        B=B,
        X=(N // B).bit_length() - 1,
        Y=M.bit_length() - 1,
    )


def worst_case_write_address(g: MemoryGeometry) -> Tuple[int, int]:
    """Second-to-last word column on the top row: (2^X - 2, 2^Y - 1)."""
    return (1 << g.X) - 2, (1 << g.Y) - 1


def worst_case_read_address(g: MemoryGeometry) -> Tuple[int, int]:
    """Last word of the top row: (2^X - 1, 2^Y - 1)."""
    return (1 << g.X) - 1, (1 << g.Y) - 1


def parse_size(text: str) -> MemoryGeometry:
    """Parse an "MxNxB" size string such as "32x32x4"."""
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise GeometryError(f"size must look like MxNxB, got {text!r}")
    try:
        M, N, B = (int(p) for p in parts)
    except ValueError:
        raise GeometryError(f"size must look like MxNxB, got {text!r}")
    return validate_geometry(M, N, B)
