"""
Species file ingestion and serialization.

Built-in data lives in species/data/species.json; user files are merged over
it, so user entries shadow built-ins by key.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from django.conf import settings
from django.core.cache import cache
from rest_framework.renderers import JSONRenderer

from config.exceptions import SpeciesFileError

from .levels import SpeciesDb
from .serializers import SpeciesFileSerializer

logger = logging.getLogger(__name__)

BUILTIN_PATH = Path(__file__).resolve().parent / 'data' / 'species.json'
BUILTIN_CACHE_KEY = 'species_builtin'


def flatten_errors(errors, prefix='') -> list:
    """
    Turn nested serializer errors into 'path.to.field: message' strings.

    List positions come out as [i] whether DRF reports them as a list or as
    a dict keyed by index.
    """
    if isinstance(errors, dict):
        messages = []
        for key, value in errors.items():
            if isinstance(key, int):
                path = f'{prefix}[{key}]'
            else:
                path = f'{prefix}.{key}' if prefix else str(key)
            messages.extend(flatten_errors(value, path))
        return messages
    if isinstance(errors, list) and errors and all(isinstance(e, (dict, list)) for e in errors):
        messages = []
        for index, value in enumerate(errors):
            if value:
                messages.extend(flatten_errors(value, f'{prefix}[{index}]'))
        return messages
    if isinstance(errors, list):
        return [f'{prefix}: {" ".join(str(e) for e in errors)}']
    return [f'{prefix}: {errors}']


def read_json(path: Union[str, Path], error_class=SpeciesFileError) -> Optional[Any]:
    """Parse a UTF-8 JSON file; an empty file gives None"""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise error_class(f'{path}: {e.strerror or e}') from e
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise error_class(f'{path}: line {e.lineno} column {e.colno}: {e.msg}') from e


def parse_species(document: Dict[str, Any], strict: bool = True, origin: str = '<data>') -> SpeciesDb:
    """Validate a species document and build the SpeciesDb it describes"""
    if not isinstance(document, dict):
        raise SpeciesFileError(f'{origin}: top level must be a JSON object')
    serializer = SpeciesFileSerializer(data=document, context={'strict': strict})
    if not serializer.is_valid():
        details = '; '.join(flatten_errors(serializer.errors))
        raise SpeciesFileError(f'{origin}: {details}')
    return serializer.save()


def builtin_species() -> SpeciesDb:
    db = cache.get(BUILTIN_CACHE_KEY)
    if db is None:
        db = parse_species(read_json(BUILTIN_PATH), origin=str(BUILTIN_PATH))
        cache.set(BUILTIN_CACHE_KEY, db)
    return db


def load_species(path: Optional[Union[str, Path]] = None, strict: bool = True) -> SpeciesDb:
    """
    Load a species file merged over the built-ins.

    With no path, falls back to HFAVG['SPECIES_PATH'] and then to the built-ins
    alone.

    Raises:
        SpeciesFileError: unreadable file, malformed JSON (with line/column)
            or validation failure naming the offending field
    """
    builtins = builtin_species()
    path = path or settings.HFAVG.get('SPECIES_PATH')
    if not path:
        return builtins

    document = read_json(path)
    if document is None:
        logger.info(f'Species file {path} is empty, using built-ins only')
        return builtins

    user = parse_species(document, strict=strict, origin=str(path))
    shadowed = sorted(set(user.keys()) & set(builtins.keys()))
    if shadowed:
        logger.info(f'Species file {path} shadows built-in entries {shadowed}')
    logger.info(f'Loaded {len(user)} species from {path}')
    return builtins.merged(user)


def dump_species(db: SpeciesDb) -> Dict[str, Any]:
    return SpeciesFileSerializer(db).data


def dumps_species(db: SpeciesDb) -> str:
    rendered = JSONRenderer().render(dump_species(db), renderer_context={'indent': 2})
    return rendered.decode('utf-8')
