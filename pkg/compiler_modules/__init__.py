"""
Compiler Modules Package

This package contains the framework-free core of the RRAM memory compiler:
geometry validation, technology profiles, netlist elaboration, the
controller FSM, behavioral analog models, the cycle-level simulator and the
characterization flow.

Modules:
    geometry: (M, N, B) validation and worst-case test addresses
    technology: Technology profiles, process corners and profile files
    netlist: Structural netlist elaboration, structural and SPICE emission
    controller: Controller FSM and cycle traces
    analog: Write settling and sense amplifier models
    simulator: Operation sequences against a memory instance
    waveform: Waveform traces and value change dumps
    floorplan: Area and density estimation
    characterize: W1/W2/R1/R2 tests and sweeps
    calibration: Back-solving the fitted profile values
    script: Simulation script parsing
    selfcheck: Random sequences against a word-array model

The modules can be used independently or through the Django management
commands and API endpoints.

Usage:
    from compiler_modules import validate_geometry, default_profile, elaborate, estimate_area

    g = validate_geometry(64, 64, 8)
    netlist = elaborate(g, default_profile())
    area = estimate_area(g, default_profile())
"""

__version__ = "1.0.0"

from .characterize import characterize_sweep, run_r_tests, run_w_tests
from .floorplan import estimate_area
from .geometry import validate_geometry, worst_case_read_address, worst_case_write_address
from .netlist import elaborate, emit_spice, emit_structural, parse_structural
from .simulator import MemorySimulator
from .technology import corner_apply, default_profile, save_profile
from .waveform import export_vcd

__all__ = [
    'validate_geometry',
    'worst_case_write_address',
    'worst_case_read_address',
    'default_profile',
    'save_profile',
    'corner_apply',
    'elaborate',
    'emit_structural',
    'parse_structural',
    'emit_spice',
    'MemorySimulator',
    'export_vcd',
    'estimate_area',
    'run_w_tests',
    'run_r_tests',
    'characterize_sweep',
]
