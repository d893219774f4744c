"""
Characterize RRAM instances over sizes, clock frequencies and process corners.

Usage:
    python manage.py characterize -M 32 -N 32 -B 4 --clock 25e6 --corners TT
    python manage.py characterize --clock 12.5e6 --corners all --workers 4 --vcd
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from compiler_api.services import CompilerService
from compiler_modules.characterize import DEFAULT_SUITE

from ._options import (
    EXIT_TEST_FAILURE,
    add_geometry_arguments,
    add_profile_arguments,
    clock_from_text,
    geometries_from_options,
    usage_error,
)

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Run the W1/W2/R1/R2 tests over a size x clock x corner sweep and write report.txt and report.json'

    def add_arguments(self, parser):
        add_geometry_arguments(parser, multiple=True)
        add_profile_arguments(parser)
        parser.add_argument('--clock', action='append', default=[],
                            help='Clock frequency in Hz; repeatable (default 12.5e6)')
        parser.add_argument('--corners', default='all', help='Comma-separated corners or "all" (default all)')
        parser.add_argument('--ratio', type=float, default=0.3,
                            help='LRS/HRS resistance ratio for the read tests (default 0.3)')
        parser.add_argument('--workers', type=int, default=1, help='Worker processes (default 1)')
        parser.add_argument('--vcd', action='store_true', help='Also write the W and R test waveforms')

    def handle(self, *args, **options):
        geometries = geometries_from_options(options, default=DEFAULT_SUITE)
        clocks = [clock_from_text(text) for text in options['clock']] or [12.5e6]
        if options['workers'] < 1:
            raise usage_error(f"--workers must be >= 1, got {options['workers']}")
        if not 0 < options['ratio'] < 1:
            raise usage_error(f"--ratio must be between 0 and 1, got {options['ratio']}")

        try:
            bundle, technology = CompilerService.load_technology(options['profile'], options['overrides'])
            corners = CompilerService.resolve_corners(bundle, options['corners'])
            configs = [(g, clock_hz) for g in geometries for clock_hz in clocks]
            logger.info(f"Characterizing {len(configs)} configurations at corners "
                        f"{', '.join(c.name for c in corners)}")
            report, paths = CompilerService.characterize(
                configs, technology, corners, ratio=options['ratio'], workers=options['workers'],
                out=options['out'], vcd=options['vcd'],
            )
        except ValueError as e:
            raise usage_error(str(e))

        for path in paths:
            self.stdout.write(f"Wrote {path}")
        summary = report.summary()
        self.stdout.write(f"{summary['rows']} rows: {summary['passed']} passed, {summary['failed']} failed")
        if not report.all_passed:
            raise CommandError(f"{summary['failed']} characterization tests failed",
                               returncode=EXIT_TEST_FAILURE)
