"""
Technology Profile Module

This module holds every electrical, parasitic, geometric and corner parameter
the architecture leaves to the process kit, in one explicit and serializable
profile.

A profile file is JSON with four sections:

    {
        "schema_version": 1,
        "provenance": ["free-text notes on where values came from", ...],
        "technology": {"vddl": 1.8, ...},
        "corners": {"TT": {...}, "FS": {...}, "SF": {...}, "FF": {...}},
        "calibration": {...}
    }

Profile files are read and schema-checked by compiler_api.profiles; this
module owns the value invariants and writes the files. See FILE_FORMATS.md
for the full field list.

Functions:
    default_profile: Calibrated default technology values
    ideal_profile: Default profile with near-zero parasitics
    corner_apply: Scale a profile to a process corner
    save_profile / save_bundle: Write a technology section or a whole profile file
    bundle_to_dict / dumps_bundle: Profile file contents
    apply_overrides: Apply "key=value" overrides to a profile

Usage:
    from compiler_modules.technology import default_profile, corner_apply, DEFAULT_CORNERS

    tech = corner_apply(default_profile(), DEFAULT_CORNERS["FS"])
    print(tech.r_on_access)
"""

import json
import logging
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from .exceptions import ProfileParseError, ProfileValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CORNER_NAMES = ("TT", "FS", "SF", "FF")
DEFAULT_PROFILE_PATH = Path(__file__).resolve().parent.parent / "profiles" / "default_profile.json"

INT_FIELDS = {"write_cycles", "read_phase_cycles"}


@dataclass(frozen=True)
class TechnologyProfile:
    """
    Electrical and physical parameters of one process.

    Resistances are in ohms, capacitances in farads, lengths in meters, times
    in seconds and voltages in volts. Threshold fields are fractions of the
    supply they refer to.
    """
    vddl: float = 1.8
    vddh: float = 3.3
    vddw: float = 3.3
    r_ref: float = 32500.0
    r_on_access: float = 1000.0
    r_driver: float = 800.0
    r_line_per_cell: float = 2.0
    c_line_per_cell: float = 7.89517e-14
    r_mux_on: float = 200.0
    cell_pitch_x: float = 4.64886e-06
    cell_pitch_y: float = 4.64886e-06
    periphery_width: float = 0.000189582
    periphery_height: float = 5.59732e-05
    periphery_area_overhead: float = 0.0
    sense_offset: float = 0.01
    sense_min_develop: float = 5e-09
    c_sense: float = 7e-13
    read_bias: float = 0.1
    bitline_settle_taus: float = 3.0
    level_down_delay: float = 0.0
    level_down_fanout_delay: float = 8e-09
    write_threshold: float = 0.7
    read_high_threshold: float = 0.83
    read_low_threshold: float = 0.16
    lrs_ratio: float = 0.3
    write_cycles: int = 1
    read_phase_cycles: int = 1
    ref_scale: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in INT_FIELDS:
                if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                    raise ProfileValidationError(f"{f.name} must be an integer >= 1, got {value!r}")
            elif not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ProfileValidationError(f"{f.name} must be a finite number, got {value!r}")

        for name in ("r_ref", "r_on_access", "r_driver", "r_line_per_cell", "r_mux_on",
                     "c_line_per_cell", "c_sense", "cell_pitch_x", "cell_pitch_y", "ref_scale"):
            if getattr(self, name) <= 0:
                raise ProfileValidationError(f"invariant violated: {name} > 0 (got {getattr(self, name)})")

        if not 0 < self.vddl <= self.vddh:
            raise ProfileValidationError(
                f"invariant violated: 0 < vddl <= vddh (vddl={self.vddl}, vddh={self.vddh})"
            )
        if self.vddw <= 0:
            raise ProfileValidationError(f"invariant violated: vddw > 0 (got {self.vddw})")
        if not 0 <= self.periphery_area_overhead < 10:
            raise ProfileValidationError(
                f"invariant violated: 0 <= periphery_area_overhead < 10 (got {self.periphery_area_overhead})"
            )

        for name in ("periphery_width", "periphery_height", "sense_offset", "sense_min_develop",
                     "bitline_settle_taus", "level_down_delay", "level_down_fanout_delay"):
            if getattr(self, name) < 0:
                raise ProfileValidationError(f"invariant violated: {name} >= 0 (got {getattr(self, name)})")

        if not 0 < self.read_bias <= 1:
            raise ProfileValidationError(f"invariant violated: 0 < read_bias <= 1 (got {self.read_bias})")
        if not 0 < self.write_threshold < 1:
            raise ProfileValidationError(
                f"invariant violated: 0 < write_threshold < 1 (got {self.write_threshold})"
            )
        if not 0 < self.read_low_threshold < self.read_high_threshold < 1:
            raise ProfileValidationError(
                "invariant violated: 0 < read_low_threshold < read_high_threshold < 1 "
                f"(got {self.read_low_threshold}, {self.read_high_threshold})"
            )
        if not 0 < self.lrs_ratio < 1:
            raise ProfileValidationError(f"invariant violated: 0 < lrs_ratio < 1 (got {self.lrs_ratio})")

    @property
    def lrs_resistance(self) -> float:
        """Resistance a successful write of 0 leaves in a cell."""
        return self.lrs_ratio * self.r_ref

    @property
    def hrs_resistance(self) -> float:
        """Resistance a successful write of 1 leaves in a cell."""
        return self.r_ref / self.lrs_ratio

    @property
    def r_ref_effective(self) -> float:
        """Reference cell resistance as seen by the sense amplifier at this corner."""
        return self.r_ref * self.ref_scale


@dataclass(frozen=True)
class CornerProfile:
    """
    Process corner as multipliers on behavioral resistances.

    Attributes:
        name (str): one of TT, FS, SF, FF
        nmos_strength (float): multiplier on NMOS-side resistances
        pmos_strength (float): multiplier on PMOS-side resistances
        sense_offset_extra (float): extra sense amplifier offset in volts
    """
    name: str
    nmos_strength: float = 1.0
    pmos_strength: float = 1.0
    sense_offset_extra: float = 0.0

    def __post_init__(self):
        if self.name not in CORNER_NAMES:
            raise ProfileValidationError(f"corner name must be one of {', '.join(CORNER_NAMES)}, got {self.name!r}")
        for attr in ("nmos_strength", "pmos_strength"):
            value = getattr(self, attr)
            if not 0.5 < value < 2.0:
                raise ProfileValidationError(
                    f"invariant violated: 0.5 < {attr} < 2.0 for corner {self.name} (got {value})"
                )
        if self.sense_offset_extra < 0:
            raise ProfileValidationError(
                f"invariant violated: sense_offset_extra >= 0 for corner {self.name}"
            )
        if self.name == "TT" and (self.nmos_strength, self.pmos_strength, self.sense_offset_extra) != (1.0, 1.0, 0.0):
            raise ProfileValidationError("invariant violated: TT corner must be the identity corner")


DEFAULT_CORNERS: Dict[str, CornerProfile] = {
    "TT": CornerProfile("TT", 1.0, 1.0, 0.0),
    "FS": CornerProfile("FS", 0.8, 1.25, 0.25),
    "SF": CornerProfile("SF", 1.25, 0.8, 0.0),
    "FF": CornerProfile("FF", 0.8, 0.8, 0.25),
}


@dataclass(frozen=True)
class CalibrationTargets:
    """
    Published outcomes the calibration solvers fit the profile to.

    Geometries are (M, N, B) triples. The reference layout is (M, N, B,
    width_m, height_m); the density anchor is (M, N, B, density_mb_mm2).
    """
    clock_hz: float = 12.5e6
    write_pass_geometries: Tuple[Tuple[int, int, int], ...] = ((128, 64, 4), (128, 64, 8), (128, 64, 16))
    write_fail_geometries: Tuple[Tuple[int, int, int], ...] = ((256, 64, 4), (256, 64, 8), (256, 64, 16))
    reference_layout: Tuple[int, int, int, float, float] = (64, 64, 8, 5.243e-4, 3.535e-4)
    density_anchor: Tuple[int, int, int, float] = (128, 64, 8, 0.024)


DEFAULT_PROVENANCE = (
    "r_ref = 32.5 kOhm, vddw = 3.3 V, lrs_ratio = 0.3 and the 0.7/0.83/0.16 thresholds are published values.",
    "vddl = 1.8 V and vddh = 3.3 V are assumed nominal core/IO rails of a 180 nm process.",
    "cell pitches and periphery sizes come from the floorplan fit (calibrate command) to a "
    "524.3 um x 353.5 um 64x64x8 layout and a 0.024 Mb/mm2 best density; square cells assumed.",
    "c_line_per_cell is back-solved (calibrate command) so the write-pass boundary at 12.5 MHz "
    "falls between the 8 kb and 16 kb arrays.",
    "r_driver, r_mux_on, r_on_access, r_line_per_cell, c_sense, read_bias and the level-down "
    "fan-out delay are engineering estimates, not published values.",
    "r_driver and r_mux_on are sized so a write of 1 overwrites an LRS cell at the far column of the 8 kb "
    "arrays at every corner.",
    "FS/FF sense_offset_extra is a calibration knob standing in for the sense output load "
    "imbalance; it is not a published value.",
)


@dataclass(frozen=True)
class ProfileBundle:
    """Everything one profile file carries."""
    technology: TechnologyProfile = field(default_factory=TechnologyProfile)
    corners: Mapping[str, CornerProfile] = field(default_factory=lambda: dict(DEFAULT_CORNERS))
    calibration: CalibrationTargets = field(default_factory=CalibrationTargets)
    provenance: Tuple[str, ...] = DEFAULT_PROVENANCE

    def corner(self, name: str) -> CornerProfile:
        try:
            return self.corners[name]
        except KeyError:
            raise ProfileValidationError(f"unknown corner {name!r}; profile defines {', '.join(self.corners)}")


def default_profile() -> TechnologyProfile:
    """
    Return the calibrated default technology profile.

    The values equal the committed profiles/default_profile.json.
    """
    return TechnologyProfile()


def ideal_profile() -> TechnologyProfile:
    """Default profile with near-zero parasitic resistances and capacitances."""
    return replace(
        TechnologyProfile(),
        r_on_access=1e-3,
        r_driver=1e-3,
        r_line_per_cell=1e-6,
        r_mux_on=1e-3,
        c_line_per_cell=1e-21,
        level_down_fanout_delay=0.0,
    )


def default_bundle() -> ProfileBundle:
    return ProfileBundle()


def corner_apply(p: TechnologyProfile, c: CornerProfile) -> TechnologyProfile:
    """
    Scale a profile to a process corner.

    NMOS-side elements (access transistor, reference transistor) scale with
    nmos_strength. The write driver pulls P up through a PMOS and N down
    through an NMOS, so its resistance scales with the mean of both
    multipliers. Transmission gates are an NMOS and a PMOS in parallel.

    Args:
        p (TechnologyProfile): nominal profile
        c (CornerProfile): corner to apply

    Returns:
        TechnologyProfile: the cornered profile
    """
    n, pm = c.nmos_strength, c.pmos_strength
    return replace(
        p,
        r_on_access=p.r_on_access * n,
        r_driver=p.r_driver * (n + pm) / 2.0,
        r_mux_on=p.r_mux_on * 2.0 * n * pm / (n + pm),
        ref_scale=p.ref_scale * n,
        sense_offset=p.sense_offset + c.sense_offset_extra,
    )


def apply_overrides(p: TechnologyProfile, overrides: List[str]) -> TechnologyProfile:
    """
    Apply "key=value" overrides to a profile and re-validate.

    Raises:
        ProfileParseError: If an override is malformed or names an unknown field
        ProfileValidationError: If the result violates an invariant
    """
    known = {f.name for f in fields(TechnologyProfile)}
    changes = {}
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ProfileParseError(f"override must look like key=value, got {item!r}")
        if key not in known:
            raise ProfileParseError(f"unknown technology field {key!r}", field=key)
        try:
            changes[key] = int(raw) if key in INT_FIELDS else float(raw)
        except ValueError:
            raise ProfileParseError(f"override {key}: {raw!r} is not a number", field=key)
    return replace(p, **changes)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def technology_to_dict(p: TechnologyProfile) -> Dict[str, float]:
    return {f.name: getattr(p, f.name) for f in fields(p)}


def bundle_to_dict(bundle: ProfileBundle) -> dict:
    cal = bundle.calibration
    return {
        "schema_version": SCHEMA_VERSION,
        "provenance": list(bundle.provenance),
        "technology": technology_to_dict(bundle.technology),
        "corners": {
            name: {
                "nmos_strength": c.nmos_strength,
                "pmos_strength": c.pmos_strength,
                "sense_offset_extra": c.sense_offset_extra,
            }
            for name, c in bundle.corners.items()
        },
        "calibration": {
            "clock_hz": cal.clock_hz,
            "write_pass_geometries": [list(g) for g in cal.write_pass_geometries],
            "write_fail_geometries": [list(g) for g in cal.write_fail_geometries],
            "reference_layout": dict(zip(("M", "N", "B", "width", "height"), cal.reference_layout)),
            "density_anchor": dict(zip(("M", "N", "B", "density_mb_mm2"), cal.density_anchor)),
        },
    }


def dumps_bundle(bundle: ProfileBundle) -> str:
    return json.dumps(bundle_to_dict(bundle), indent=2) + "\n"


def save_bundle(bundle: ProfileBundle, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_bundle(bundle), encoding="utf-8")
    logger.info(f"Profile written to {path}")
    return path


def save_profile(p: TechnologyProfile, path, bundle: Optional[ProfileBundle] = None) -> Path:
    """Save a technology profile, keeping corners and calibration from `bundle` (defaults otherwise)."""
    base = bundle or default_bundle()
    return save_bundle(replace(base, technology=p), path)
