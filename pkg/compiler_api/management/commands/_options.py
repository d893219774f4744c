"""
Arguments shared by the compiler management commands.

Exit codes follow one contract across commands: 0 on success, 1 when a test
or scripted expectation fails, 2 on a usage or validation error.
"""

import logging

from django.core.management.base import CommandError

from compiler_modules.geometry import parse_size, validate_geometry

logger = logging.getLogger(__name__)

EXIT_TEST_FAILURE = 1
EXIT_USAGE = 2


def usage_error(message: str) -> CommandError:
    logger.error(message)
    return CommandError(message, returncode=EXIT_USAGE)


def add_geometry_arguments(parser, multiple: bool = False):
    parser.add_argument('-M', type=int, help='Number of rows (power of two >= 2)')
    parser.add_argument('-N', type=int, help='Number of columns (B times a power of two >= 2)')
    parser.add_argument('-B', type=int, help='Word width in bits (power of two)')
    if multiple:
        parser.add_argument('--size', action='append', default=[], metavar='MxNxB',
                            help='Geometry as MxNxB; repeat for several')


def add_profile_arguments(parser):
    parser.add_argument('--profile', help='Technology profile file (default: RRAM_PROFILE_PATH)')
    parser.add_argument('--set', action='append', default=[], dest='overrides', metavar='KEY=VALUE',
                        help='Override one technology field; repeatable')
    parser.add_argument('--out', help='Output directory (default: RRAM_OUTPUT_DIR)')


def geometries_from_options(options, default=()):
    """
    Geometries named by -M/-N/-B and any --size flags, in command-line order.

    Raises:
        CommandError: (exit 2) when a geometry is incomplete or invalid
    """
    dims = (options.get('M'), options.get('N'), options.get('B'))
    try:
        geometries = []
        if any(d is not None for d in dims):
            if any(d is None for d in dims):
                raise usage_error("-M, -N and -B must be given together")
            geometries.append(validate_geometry(*dims))
        geometries += [parse_size(text) for text in options.get('size') or []]
        if not geometries:
            geometries = [validate_geometry(*d) for d in default]
    except ValueError as e:
        raise usage_error(str(e))
    if not geometries:
        raise usage_error("a geometry is required: -M, -N and -B or --size MxNxB")
    return geometries


def clock_from_text(text: str) -> float:
    try:
        clock_hz = float(text)
    except ValueError:
        raise usage_error(f"clock must be a frequency in Hz, got {text!r}")
    if not clock_hz > 0:
        raise usage_error(f"clock must be > 0 Hz, got {text}")
    return clock_hz
