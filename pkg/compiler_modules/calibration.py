"""
Calibration Module

This module back-solves the profile values that have no published source
from the outcomes that are published, and regenerates the default profile.

Floorplan fit:
    Square cells of pitch p. The reference layout fixes the periphery once
    p is known, and the density anchor's area gives a quadratic in p.

Write boundary:
    The worst-case write word of each target geometry sits a known number of
    line segments from the drivers. c_line_per_cell is chosen so the nominal
    write at 1 MOhm reaches the write threshold exactly 0.4 of a period in
    at the geometric mean of the largest passing and the smallest failing
    segment counts.

Fitted values are rounded to six significant digits before they are
committed.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

from .characterize import PRESET_RESISTANCE, run_w_tests
from .exceptions import ProfileValidationError
from .geometry import validate_geometry, worst_case_write_address
from .technology import CalibrationTargets, ProfileBundle, TechnologyProfile

logger = logging.getLogger(__name__)


def round_sig(value: float, digits: int = 6) -> float:
    return float(f"{value:.{digits}g}")


@dataclass(frozen=True)
class FloorplanFit:
    cell_pitch: float
    periphery_width: float
    periphery_height: float


@dataclass(frozen=True)
class WriteBoundaryFit:
    c_line_per_cell: float
    boundary_segments: float
    pass_segments: int
    fail_segments: int


@dataclass(frozen=True)
class CalibrationResult:
    bundle: ProfileBundle
    floorplan: FloorplanFit
    write_boundary: WriteBoundaryFit


def solve_floorplan(targets: CalibrationTargets, overhead: float = 0.0) -> FloorplanFit:
    """
    Fit cell pitch and periphery to the reference layout and the density anchor.

    Raises:
        ProfileValidationError: If the targets admit no positive pitch or give
            a negative periphery
    """
    m0, n0, b0, w0, h0 = targets.reference_layout
    m1, n1, b1, density = targets.density_anchor
    area = (m1 * n1 / 1e6) / density * 1e-6 / (1.0 + overhead)

    a = (n1 + b1) - (n0 + b0)
    b = m1 - m0
    coefficients = [a * b, a * h0 + b * w0, w0 * h0 - area]
    if a == 0 and b == 0:
        raise ProfileValidationError("density anchor must differ in size from the reference layout")
    roots = np.roots(coefficients if a * b else coefficients[1:])
    pitches = sorted(r.real for r in roots if abs(r.imag) < 1e-18 and r.real > 0)
    if not pitches:
        raise ProfileValidationError("floorplan targets admit no positive cell pitch")

    pitch = pitches[0]
    periphery_width = w0 - (n0 + b0) * pitch
    periphery_height = h0 - m0 * pitch
    if periphery_width < 0 or periphery_height < 0:
        raise ProfileValidationError(
            f"floorplan fit gives negative periphery ({periphery_width:.4g} m x {periphery_height:.4g} m)"
        )
    fit = FloorplanFit(round_sig(pitch), round_sig(periphery_width), round_sig(periphery_height))
    logger.info(f"Floorplan fit: pitch {fit.cell_pitch:.6g} m, periphery "
                f"{fit.periphery_width:.6g} m x {fit.periphery_height:.6g} m")
    return fit


def write_segments(M: int, N: int, B: int) -> int:
    """Line segments between the drivers and the worst-case write word."""
    g = validate_geometry(M, N, B)
    x, y = worst_case_write_address(g)
    return (y + 1) + x * g.B


def solve_write_boundary(t: TechnologyProfile, targets: CalibrationTargets) -> WriteBoundaryFit:
    """
    Line capacitance per cell that puts the nominal write boundary between the targets.

    Raises:
        ProfileValidationError: If a passing target is not closer to the drivers
            than every failing target, or the threshold is unreachable
    """
    pass_segments = max(write_segments(*g) for g in targets.write_pass_geometries)
    fail_segments = min(write_segments(*g) for g in targets.write_fail_geometries)
    if pass_segments >= fail_segments:
        raise ProfileValidationError(
            f"write targets overlap: passing word at {pass_segments} segments, failing at {fail_segments}"
        )
    s = math.sqrt(pass_segments * fail_segments)

    r_series = t.r_driver + t.r_mux_on + t.r_line_per_cell * s
    r_cell = PRESET_RESISTANCE + t.r_on_access
    fraction = r_cell / (r_cell + r_series)
    if t.write_threshold >= fraction:
        raise ProfileValidationError("write threshold is above the settled divider voltage")
    checkpoint = 0.4 / targets.clock_hz
    tau = -checkpoint / math.log(1.0 - t.write_threshold / fraction)
    r_thevenin = r_series * r_cell / (r_series + r_cell)
    c_line = tau / r_thevenin / s

    fit = WriteBoundaryFit(round_sig(c_line), s, pass_segments, fail_segments)
    logger.info(f"Write boundary at {s:.1f} segments: c_line_per_cell {fit.c_line_per_cell:.6g} F")
    return fit


def calibrate_bundle(bundle: ProfileBundle) -> CalibrationResult:
    """Regenerate a profile bundle's fitted technology fields from its calibration targets."""
    targets = bundle.calibration
    floorplan = solve_floorplan(targets, bundle.technology.periphery_area_overhead)
    write = solve_write_boundary(bundle.technology, targets)
    technology = replace(
        bundle.technology,
        cell_pitch_x=floorplan.cell_pitch,
        cell_pitch_y=floorplan.cell_pitch,
        periphery_width=floorplan.periphery_width,
        periphery_height=floorplan.periphery_height,
        c_line_per_cell=write.c_line_per_cell,
    )
    return CalibrationResult(replace(bundle, technology=technology), floorplan, write)


def verify_write_boundary(bundle: ProfileBundle) -> List[Tuple[Tuple[int, int, int], str, bool, bool]]:
    """
    W tests of every calibration target at every corner.

    Returns:
        list: (geometry, corner, expected_pass, passed) per combination
    """
    targets = bundle.calibration
    rows = []
    for expected, geometries in ((True, targets.write_pass_geometries), (False, targets.write_fail_geometries)):
        for dims in geometries:
            g = validate_geometry(*dims)
            for name, corner in bundle.corners.items():
                passed = all(r.passed for r in run_w_tests(g, bundle.technology, targets.clock_hz, corner))
                rows.append((tuple(dims), name, expected, passed))
    return rows
