"""
Scheme file ingestion. A scheme file shares the species-file envelope:

    {"species": "lu175", "schemes": [{"name": ..., "delta_m_twice": ...,
      "transitions": [{"ground": ["1S0", 7, 5], "excited": [...], "weight": [1, 3]}]}]}

Level references are either "key/label" or a bare label resolved against
the file's "species" key. A label that itself holds a slash, such as "5S1/2",
is bare unless the text before the slash is a known species key.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from rest_framework.renderers import JSONRenderer

from config.exceptions import ConfigurationError, DomainError, SchemeFileError
from species.levels import SpeciesDb
from species.loader import builtin_species, flatten_errors, read_json
from zeeman.transitions import StateRef

from .schemes import BUILTIN_SCHEMES, AveragingScheme, builtin_scheme, make_scheme
from .serializers import SchemeFileSerializer, SchemeSerializer

logger = logging.getLogger(__name__)


def _state(db: SpeciesDb, species: Optional[str], data) -> StateRef:
    ref, two_f, two_mf = data
    key, sep, _ = ref.partition('/')
    if not sep or (species and key not in db):
        if not species:
            raise ConfigurationError(f'Level {ref!r} needs a "key/label" reference or a "species" key')
        ref = f'{species}/{ref}'
    return StateRef(db.level(ref), two_f, two_mf)


def parse_schemes(document: Dict[str, Any], db: Optional[SpeciesDb] = None, strict: bool = True,
                  origin: str = '<data>') -> List[AveragingScheme]:
    if not isinstance(document, dict):
        raise SchemeFileError(f'{origin}: top level must be a JSON object')
    serializer = SchemeFileSerializer(data=document, context={'strict': strict})
    if not serializer.is_valid():
        raise SchemeFileError(f'{origin}: {"; ".join(flatten_errors(serializer.errors))}')

    db = db or builtin_species()
    species = serializer.validated_data['species']
    schemes = []
    for index, data in enumerate(serializer.validated_data['schemes']):
        try:
            schemes.append(make_scheme(data['name'], [
                (_state(db, species, c['ground']), _state(db, species, c['excited']), c['weight'])
                for c in data['components']
            ], two_delta_m=data['two_delta_m']))
        except (ConfigurationError, DomainError) as e:
            raise SchemeFileError(f'{origin}: schemes[{index}]: {e}') from e
    return schemes


def load_schemes(path: Union[str, Path], db: Optional[SpeciesDb] = None,
                 strict: bool = True) -> List[AveragingScheme]:
    """
    Raises:
        SchemeFileError: unreadable or invalid file, unresolvable level, or
            a scheme that breaks the weight/delta m rules
    """
    document = read_json(path, SchemeFileError)
    if document is None:
        raise SchemeFileError(f'{path}: file is empty')
    schemes = parse_schemes(document, db, strict, origin=str(path))
    logger.info(f'Loaded {len(schemes)} schemes from {path}')
    return schemes


def resolve_scheme(source: str, db: Optional[SpeciesDb] = None, strict: bool = True) -> AveragingScheme:
    """
    A built-in key, a scheme file holding one scheme, or "path#name" for a
    file holding several.
    """
    if source in BUILTIN_SCHEMES:
        return builtin_scheme(source, db)
    path, _, name = source.partition('#')
    if not Path(path).exists():
        raise ConfigurationError(
            f'{source!r} is neither a built-in scheme {sorted(BUILTIN_SCHEMES)} nor a scheme file'
        )
    schemes = load_schemes(path, db, strict)
    if name:
        for scheme in schemes:
            if scheme.name == name:
                return scheme
        raise SchemeFileError(f'{path}: no scheme named {name!r}')
    if len(schemes) != 1:
        raise SchemeFileError(f'{path}: holds {len(schemes)} schemes; select one with {path}#<name>')
    return schemes[0]


def dump_scheme(scheme: AveragingScheme) -> Dict[str, Any]:
    return {'schemes': [SchemeSerializer(scheme).data]}


def dumps_scheme(scheme: AveragingScheme) -> str:
    return JSONRenderer().render(dump_scheme(scheme), renderer_context={'indent': 2}).decode('utf-8')
