"""
Run a simulation script, or a random self-check, against one memory instance.

Usage:
    python manage.py simulate -M 32 -N 32 -B 4 --clock 25e6 --script scripts/read_corner_word.sim
    python manage.py simulate -M 8 -N 8 -B 2 --random 200 --seed 7 --ideal
"""

import logging
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from compiler_api.services import CompilerService
from compiler_modules.technology import ideal_profile

from ._options import (
    EXIT_TEST_FAILURE,
    add_geometry_arguments,
    add_profile_arguments,
    clock_from_text,
    geometries_from_options,
    usage_error,
)

logger = logging.getLogger(__name__)

_IDEAL_FIELDS = ("r_on_access", "r_driver", "r_line_per_cell", "r_mux_on", "c_line_per_cell",
                 "level_down_fanout_delay")


class Command(BaseCommand):
    help = 'Simulate reset/write/read sequences and write a VCD waveform and a JSON-lines run log'

    def add_arguments(self, parser):
        add_geometry_arguments(parser)
        add_profile_arguments(parser)
        parser.add_argument('--clock', default='25e6', help='Clock frequency in Hz (default 25e6)')
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--script', help='Simulation script file')
        source.add_argument('--random', type=int, metavar='COUNT',
                            help='Run COUNT random operations against a word-array model')
        parser.add_argument('--seed', type=int, default=0, help='Seed for --random (default 0)')
        parser.add_argument('--ideal', action='store_true',
                            help='Replace the parasitics with near-zero values before simulating')
        parser.add_argument('--no-vcd', action='store_true', help='Skip the waveform file')

    def handle(self, *args, **options):
        g = geometries_from_options(options)[0]
        clock_hz = clock_from_text(options['clock'])
        try:
            _, technology = CompilerService.load_technology(options['profile'], options['overrides'])
            if options['ideal']:
                ideal = ideal_profile()
                technology = replace(technology, **{name: getattr(ideal, name) for name in _IDEAL_FIELDS})

            if options['random'] is not None:
                if options['random'] < 0:
                    raise usage_error(f"--random needs a count >= 0, got {options['random']}")
                result, paths = CompilerService.simulate_random(
                    g, technology, clock_hz, options['random'], options['seed'],
                    out=options['out'], vcd=not options['no_vcd'],
                )
                for path in paths:
                    self.stdout.write(f"Wrote {path}")
                if not result.ok:
                    first = result.mismatches[0]
                    raise CommandError(
                        f"{len(result.mismatches)} of {result.operations} operations disagree with the "
                        f"word-array model; first: {first}",
                        returncode=EXIT_TEST_FAILURE,
                    )
                self.stdout.write(f"{result.operations} random operations match the word-array model")
                return

            script_path = Path(options['script'])
            try:
                text = script_path.read_text(encoding='utf-8')
            except OSError as e:
                raise usage_error(f"cannot read script {script_path}: {e.strerror}")
            outcome, paths = CompilerService.simulate_script(
                g, technology, clock_hz, text, out=options['out'], stem=script_path.stem,
                vcd=not options['no_vcd'],
            )
        except CommandError:
            raise
        except ValueError as e:
            raise usage_error(str(e))

        for path in paths:
            self.stdout.write(f"Wrote {path}")
        if not outcome.ok:
            line, message = outcome.failures[0]
            raise CommandError(
                f"{len(outcome.failures)} failed checks; first at line {line}: {message}",
                returncode=EXIT_TEST_FAILURE,
            )
        self.stdout.write(f"{outcome.writes} writes and {outcome.reads} reads completed, all checks passed")
