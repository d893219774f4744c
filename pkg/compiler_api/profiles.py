"""
Profile file loading.

Profile files are parsed as JSON and checked by ProfileSerializer; the
resulting ProfileBundle then enforces the value invariants itself.

Functions:
    loads_bundle: Parse profile file text
    load_bundle: Read and parse a profile file
    load_profile: Technology section of a profile file
"""

import json
import logging
from pathlib import Path
from typing import Mapping, Optional, Tuple

from rest_framework.settings import api_settings

from compiler_modules.exceptions import ProfileParseError
from compiler_modules.technology import ProfileBundle, TechnologyProfile

from .serializers import ProfileSerializer

logger = logging.getLogger(__name__)


def first_error(detail, path: Tuple[str, ...] = ()) -> Tuple[Optional[str], str]:
    """Dotted field path and message of the first error in a serializer error tree."""
    if isinstance(detail, Mapping):
        key, value = next(iter(detail.items()))
        if key != api_settings.NON_FIELD_ERRORS_KEY:
            path = path + (str(key),)
        return first_error(value, path)
    if isinstance(detail, list) and detail:
        return first_error(detail[0], path)
    return ".".join(path) or None, str(detail)


def loads_bundle(text: str) -> ProfileBundle:
    """
    Parse and validate profile file text.

    Raises:
        ProfileParseError: On JSON syntax errors (with line and column) and on
            missing, unknown or mistyped keys (with the dotted field path)
        ProfileValidationError: When a value violates a profile invariant
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProfileParseError(f"line {e.lineno}, column {e.colno}: {e.msg}", line=e.lineno, column=e.colno)

    serializer = ProfileSerializer(data=data)
    if not serializer.is_valid():
        field, message = first_error(serializer.errors)
        raise ProfileParseError(f"{field}: {message}" if field else message, field=field)
    return serializer.save()


def load_bundle(path) -> ProfileBundle:
    """
    Load and validate a whole profile file.

    Raises:
        ProfileParseError: On unreadable files and anything loads_bundle rejects
        ProfileValidationError: When a value violates a profile invariant
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ProfileParseError(f"cannot read profile {path}: {e.strerror}")
    bundle = loads_bundle(text)
    logger.debug(f"Loaded profile {path} with corners {', '.join(bundle.corners)}")
    return bundle


def load_profile(path) -> TechnologyProfile:
    """Load the technology section of a profile file."""
    return load_bundle(path).technology
