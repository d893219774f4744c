#!/usr/bin/env python
"""
Django's command-line utility for administrative tasks.

This script is the main entry point for the RRAM memory compiler: the
compiler commands and the API server both run through it.

Usage:
    python manage.py [command] [options]

Compiler commands:
    python manage.py generate -M 64 -N 64 -B 8        # Netlists and instance statistics
    python manage.py simulate ... --script FILE        # Scripted simulation, VCD and run log
    python manage.py characterize --clock 12.5e6       # W1/W2/R1/R2 sweep and reports
    python manage.py calibrate                         # Refit the profile's fitted values

Other commands:
    python manage.py runserver        # Start the API development server
    python manage.py test             # Run tests

For a complete list of commands, run:
    python manage.py help
"""

import os
import sys


def main():
    """Run administrative tasks."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'rram_compiler.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
