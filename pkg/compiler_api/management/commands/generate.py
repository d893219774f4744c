"""
Generate the netlists of one or more memory instances.

Usage:
    python manage.py generate -M 64 -N 64 -B 8 --out build
    python manage.py generate --size 32x32x4 --size 128x64x16
"""

import logging

from django.core.management.base import BaseCommand

from compiler_api.services import CompilerService

from ._options import add_geometry_arguments, add_profile_arguments, geometries_from_options, usage_error

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Write the structural netlist, SPICE deck and instance statistics of RRAM instances'

    def add_arguments(self, parser):
        add_geometry_arguments(parser, multiple=True)
        add_profile_arguments(parser)

    def handle(self, *args, **options):
        geometries = geometries_from_options(options)
        try:
            _, technology = CompilerService.load_technology(options['profile'], options['overrides'])
            for g in geometries:
                summary = CompilerService.generate(g, technology, options['out'])
                counts = summary['counts']
                self.stdout.write(
                    f"{summary['design']}: {counts['MemCell1T1R']} cells, {counts['SenseAmp']} sense amps, "
                    f"{counts['instances']} instances, {summary['area']['area_mm2']:.4f} mm2"
                )
        except ValueError as e:
            raise usage_error(str(e))
