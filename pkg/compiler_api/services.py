"""
Service layer for the RRAM compiler.

This module sits between the management commands / API views and the
framework-free compiler modules. It loads profiles, runs the compiler
operations, writes output files and logs what it did.

The service layer provides:
- Profile loading with command-line overrides
- Corner selection
- Netlist generation (structural, SPICE, statistics)
- Script and random-sequence simulation with VCD and run-log output
- Characterization sweeps with text and JSON reports
- Profile calibration

Output files are only ever written inside the requested output directory.

Classes:
    CompilerService: Handles all compiler operations
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from django.conf import settings

from compiler_modules.calibration import calibrate_bundle, verify_write_boundary
from compiler_modules.characterize import (
    CharacterizationReport,
    characterize_sweep,
    format_report_table,
    read_test_session,
    report_to_dict,
    report_to_json,
    write_test_session,
)
from compiler_modules.floorplan import estimate_area
from compiler_modules.geometry import MemoryGeometry
from compiler_modules.netlist import Netlist, elaborate, emit_spice, emit_structural, expected_counts, stats
from compiler_modules.script import ScriptOutcome, parse_script, run_script
from compiler_modules.selfcheck import SelfCheckResult, run_self_check
from compiler_modules.simulator import MemorySimulator, UniformFill, run_log_jsonl
from compiler_modules.technology import (
    CORNER_NAMES,
    CornerProfile,
    ProfileBundle,
    TechnologyProfile,
    apply_overrides,
    save_bundle,
)
from compiler_modules.waveform import export_vcd

from .profiles import load_bundle

logger = logging.getLogger(__name__)


def clock_label(clock_hz: float) -> str:
    return f"{clock_hz / 1e6:g}MHz"


class CompilerService:
    """
    Service class for handling compiler operations.

    Every method re-raises ValueError (and its subclasses from
    compiler_modules.exceptions) as-is and wraps anything unexpected into a
    ValueError with context.
    """

    @staticmethod
    def output_dir(out: Optional[str] = None) -> Path:
        return Path(out) if out else Path(settings.RRAM_OUTPUT_DIR)

    @staticmethod
    def _write(out_dir: Path, name: str, text: str) -> Path:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    @staticmethod
    def load_technology(
        profile_path: Optional[str] = None,
        overrides: Optional[Sequence[str]] = None,
    ) -> Tuple[ProfileBundle, TechnologyProfile]:
        """
        Load a profile file and apply key=value overrides to its technology section.

        Args:
            profile_path (str, optional): profile file; defaults to settings.RRAM_PROFILE_PATH
            overrides (list, optional): "key=value" strings

        Returns:
            tuple: (bundle as loaded, technology with overrides applied)

        Raises:
            ProfileError: If the file cannot be parsed or violates an invariant
        """
        path = Path(profile_path) if profile_path else Path(settings.RRAM_PROFILE_PATH)
        bundle = load_bundle(path)
        technology = apply_overrides(bundle.technology, list(overrides or []))
        logger.debug(f"Using profile {path} with {len(overrides or [])} overrides")
        return bundle, technology

    @staticmethod
    def resolve_corners(bundle: ProfileBundle, selection: str = "TT") -> List[CornerProfile]:
        """
        Corners named in a comma-separated selection, or every corner for "all".

        Raises:
            ProfileValidationError: If a name is not defined by the profile
        """
        if selection.strip().lower() == "all":
            names = [name for name in CORNER_NAMES if name in bundle.corners]
        else:
            names = [name.strip().upper() for name in selection.split(",") if name.strip()]
        if not names:
            raise ValueError("no corners selected")
        return [bundle.corner(name) for name in names]

    # -- generate -----------------------------------------------------------

    @staticmethod
    def generation_summary(
        g: MemoryGeometry,
        t: TechnologyProfile,
        include_netlist: bool = False,
        netlist: Optional[Netlist] = None,
    ) -> Dict:
        """Instance counts, closed-form expectations and area of one instance; elaborates unless given a netlist."""
        try:
            if netlist is None:
                netlist = elaborate(g, t)
            summary = {
                "design": netlist.design,
                "geometry": {"M": g.M, "N": g.N, "B": g.B, "X": g.X, "Y": g.Y},
                "counts": stats(netlist),
                "expected_counts": expected_counts(g),
                "area": estimate_area(g, t).as_dict(),
            }
            if include_netlist:
                summary["structural_netlist"] = emit_structural(netlist)
            logger.info(f"Generated {netlist.design}: {summary['counts']['instances']} instances")
            return summary
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error generating {g.label()}: {str(e)}")
            raise ValueError(f"Generation failed: {str(e)}")

    @staticmethod
    def generate(g: MemoryGeometry, t: TechnologyProfile, out: Optional[str] = None) -> Dict:
        """
        Write the structural netlist, SPICE deck and statistics of one instance.

        Returns:
            dict: the statistics summary plus the written paths
        """
        try:
            out_dir = CompilerService.output_dir(out)
            netlist = elaborate(g, t)
            summary = CompilerService.generation_summary(g, t, netlist=netlist)
            paths = [
                CompilerService._write(out_dir, f"{netlist.design}.netlist", emit_structural(netlist)),
                CompilerService._write(out_dir, f"{netlist.design}.sp", emit_spice(netlist, t)),
                CompilerService._write(out_dir, f"{netlist.design}.stats.json",
                                       json.dumps(summary, indent=2) + "\n"),
            ]
            summary["files"] = [str(p) for p in paths]
            return summary
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error writing netlists for {g.label()}: {str(e)}")
            raise ValueError(f"Generation failed: {str(e)}")

    # -- simulate -----------------------------------------------------------

    @staticmethod
    def _write_simulation(
        sim: MemorySimulator, out_dir: Path, stem: str, vcd: bool, header_only: bool = False
    ) -> List[Path]:
        paths = [CompilerService._write(out_dir, f"{stem}.runlog.jsonl",
                                        run_log_jsonl(sim.run_log_header(), sim.records))]
        if vcd:
            trace = sim.trace.empty_copy() if header_only else sim.trace
            paths.append(CompilerService._write(out_dir, f"{stem}.vcd", export_vcd(trace)))
        return paths

    @staticmethod
    def simulate_script(
        g: MemoryGeometry,
        t: TechnologyProfile,
        clock_hz: float,
        script_text: str,
        out: Optional[str] = None,
        stem: str = "simulation",
        vcd: bool = True,
    ) -> Tuple[ScriptOutcome, List[Path]]:
        """
        Run a simulation script and write its run-log and waveform.

        Raises:
            ScriptError: On a malformed line or an operation that cannot be issued
        """
        try:
            ops = parse_script(script_text, g)
            sim = MemorySimulator(g, t, clock_hz, UniformFill(1e6))
            outcome = run_script(sim, ops)
            paths = CompilerService._write_simulation(
                sim, CompilerService.output_dir(out), stem, vcd, header_only=not ops
            )
            if outcome.failures:
                line, message = outcome.failures[0]
                logger.warning(f"First failing check at line {line}: {message}")
            return outcome, paths
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error during simulation: {str(e)}")
            raise ValueError(f"Simulation failed: {str(e)}")

    @staticmethod
    def simulate_random(
        g: MemoryGeometry,
        t: TechnologyProfile,
        clock_hz: float,
        count: int,
        seed: int,
        out: Optional[str] = None,
        vcd: bool = True,
    ) -> Tuple[SelfCheckResult, List[Path]]:
        """Random write/read sequence checked against the word-array model."""
        try:
            sim = MemorySimulator(g, t, clock_hz, UniformFill(1e6))
            result = run_self_check(g, t, clock_hz, count, seed, sim=sim)
            stem = f"random_{g.label()}_seed{seed}"
            paths = CompilerService._write_simulation(sim, CompilerService.output_dir(out), stem, vcd)
            return result, paths
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error during random self-check: {str(e)}")
            raise ValueError(f"Random self-check failed: {str(e)}")

    # -- characterize -------------------------------------------------------

    @staticmethod
    def characterize(
        configs: Sequence[Tuple[MemoryGeometry, float]],
        t: TechnologyProfile,
        corners: Sequence[CornerProfile],
        ratio: float = 0.3,
        workers: int = 1,
        out: Optional[str] = None,
        vcd: bool = False,
    ) -> Tuple[CharacterizationReport, List[Path]]:
        """
        Run a characterization sweep and write report.txt, report.json and optional VCDs.

        The report is written even when tests fail.
        """
        try:
            report = characterize_sweep(configs, t, corners, ratio=ratio, workers=workers)
            out_dir = CompilerService.output_dir(out)
            paths = [
                CompilerService._write(out_dir, "report.txt", format_report_table(report)),
                CompilerService._write(out_dir, "report.json", report_to_json(report)),
            ]
            if vcd:
                vcd_dir = out_dir / "vcd"
                for g, clock_hz in configs:
                    for corner in corners:
                        stem = f"{g.label()}_{clock_label(clock_hz)}_{corner.name}"
                        _, w_sim = write_test_session(g, t, clock_hz, corner)
                        _, r_sim = read_test_session(g, t, clock_hz, corner, ratio)
                        paths.append(CompilerService._write(vcd_dir, f"{stem}_W.vcd", export_vcd(w_sim.trace)))
                        paths.append(CompilerService._write(vcd_dir, f"{stem}_R.vcd", export_vcd(r_sim.trace)))
            for row in report.failures():
                logger.warning(f"{row.test} failed for M{row.M}_N{row.N}_B{row.B} at "
                               f"{clock_label(row.clock_hz)}, corner {row.corner}"
                               + (f": {row.error}" if row.error else ""))
            return report, paths
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error during characterization: {str(e)}")
            raise ValueError(f"Characterization failed: {str(e)}")

    @staticmethod
    def characterization_summary(
        configs: Sequence[Tuple[MemoryGeometry, float]],
        t: TechnologyProfile,
        corners: Sequence[CornerProfile],
        ratio: float = 0.3,
    ) -> Dict:
        """Characterization report as a dict, without writing files."""
        try:
            return report_to_dict(characterize_sweep(configs, t, corners, ratio=ratio))
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error during characterization: {str(e)}")
            raise ValueError(f"Characterization failed: {str(e)}")

    # -- calibrate ----------------------------------------------------------

    @staticmethod
    def calibrate(bundle: ProfileBundle, out: Optional[str] = None, verify: bool = True) -> Dict:
        """
        Refit the profile's floorplan and write-boundary values and write the regenerated profile.

        Returns:
            dict: fitted values, verification rows and the written path
        """
        try:
            result = calibrate_bundle(bundle)
            path = save_bundle(result.bundle, CompilerService.output_dir(out) / "calibrated_profile.json")
            summary = {
                "cell_pitch": result.floorplan.cell_pitch,
                "periphery_width": result.floorplan.periphery_width,
                "periphery_height": result.floorplan.periphery_height,
                "c_line_per_cell": result.write_boundary.c_line_per_cell,
                "boundary_segments": result.write_boundary.boundary_segments,
                "profile": str(path),
                "verification": [],
            }
            if verify:
                for dims, corner, expected, passed in verify_write_boundary(result.bundle):
                    summary["verification"].append(
                        {"geometry": list(dims), "corner": corner, "expected_pass": expected, "passed": passed}
                    )
                    if expected != passed:
                        logger.warning(f"Calibrated profile: {dims} at {corner} "
                                       f"{'failed' if expected else 'passed'} W tests unexpectedly")
            logger.info(f"Calibration complete: c_line_per_cell={result.write_boundary.c_line_per_cell:.6g}, "
                        f"pitch={result.floorplan.cell_pitch:.6g}")
            return summary
        except ValueError:
            raise
        except Exception as e:
            logger.error(f"Unexpected error during calibration: {str(e)}")
            raise ValueError(f"Calibration failed: {str(e)}")
