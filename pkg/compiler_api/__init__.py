"""
Compiler API Django App

This app exposes the RRAM compiler through:
- Management commands: generate, simulate, characterize, calibrate
- A stateless JSON API for generation statistics, area estimates and
  characterization sweeps
- A service layer shared by both, which owns profile loading, output
  files and logging

No database dependencies (stateless).
"""
