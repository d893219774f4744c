"""
Refit a profile's floorplan and write-boundary values from its calibration targets.

Usage:
    python manage.py calibrate --out build
    python manage.py calibrate --profile profiles/default_profile.json --no-verify
"""

import logging
from dataclasses import replace

from django.core.management.base import BaseCommand, CommandError

from compiler_api.services import CompilerService

from ._options import EXIT_TEST_FAILURE, add_profile_arguments, usage_error

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Back-solve cell pitch, periphery size and line capacitance and write calibrated_profile.json'

    def add_arguments(self, parser):
        add_profile_arguments(parser)
        parser.add_argument('--no-verify', action='store_true',
                            help='Skip re-running the W tests on the calibration targets')

    def handle(self, *args, **options):
        try:
            bundle, technology = CompilerService.load_technology(options['profile'], options['overrides'])
            bundle = replace(bundle, technology=technology)
            summary = CompilerService.calibrate(bundle, options['out'], verify=not options['no_verify'])
        except ValueError as e:
            raise usage_error(str(e))

        self.stdout.write(f"cell_pitch        {summary['cell_pitch']:.6g} m")
        self.stdout.write(f"periphery_width   {summary['periphery_width']:.6g} m")
        self.stdout.write(f"periphery_height  {summary['periphery_height']:.6g} m")
        self.stdout.write(f"c_line_per_cell   {summary['c_line_per_cell']:.6g} F")
        self.stdout.write(f"Wrote {summary['profile']}")

        unexpected = [row for row in summary['verification'] if row['expected_pass'] != row['passed']]
        if unexpected:
            raise CommandError(f"{len(unexpected)} calibration targets miss their expected W test outcome",
                               returncode=EXIT_TEST_FAILURE)
