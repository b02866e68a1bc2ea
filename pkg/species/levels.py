"""
Immutable data model for isotopes, fine-structure levels and trap geometry.

All quantum numbers are carried as twice-values (see angular.symbols), all
energies as frequencies in Hz.
"""

import hashlib
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

from angular.symbols import AngularMomentum
from config.exceptions import ConfigurationError, DomainError, QuantumNumberError


@dataclass(frozen=True)
class FinePartner:
    """Dominant fine-structure neighbour of a level"""

    omega_fs: float  # rad/s; positive when the partner lies above
    g_l: float
    g_s: float


@dataclass(frozen=True)
class LevelSpec:
    """
    One fine-structure level of one isotope.

    `g_i` is copied from the owning isotope so a level is self-contained.
    `key` is the isotope key, so `ref` gives the `key/label` name used by the
    command line and scheme files.
    """

    key: str
    label: str
    nuclear_spin: AngularMomentum
    j: AngularMomentum
    g_j: float
    g_i: float
    a_hf: float = 0.0
    b_hf: float = 0.0
    theta_q: float = 0.0
    fs_partner: Optional[FinePartner] = None
    provenance: Optional[str] = None

    def __post_init__(self):
        for name in ('nuclear_spin', 'j'):
            value = getattr(self, name)
            if isinstance(value, int) and not isinstance(value, bool):
                object.__setattr__(self, name, AngularMomentum(value))
            elif not isinstance(value, AngularMomentum):
                raise QuantumNumberError(f'{name} must be an AngularMomentum, got {value!r}')

    @property
    def ref(self) -> str:
        return f'{self.key}/{self.label}'

    @cached_property
    def fingerprint(self) -> str:
        """Digest of every field, for cache keys"""
        return hashlib.sha256(repr(self).encode('utf-8')).hexdigest()

    @property
    def two_i(self) -> int:
        return self.nuclear_spin.twice

    @property
    def two_j(self) -> int:
        return self.j.twice

    def f_values(self) -> Tuple[int, ...]:
        """Twice-values of F, ascending"""
        return tuple(range(abs(self.two_i - self.two_j), self.two_i + self.two_j + 1, 2))

    def block_basis(self, two_mf: int) -> Tuple[int, ...]:
        """Twice-values of the F that contain the projection mF, ascending"""
        self.check_mf(two_mf)
        return tuple(f for f in self.f_values() if abs(two_mf) <= f)

    def check_f(self, two_f: int):
        if two_f not in self.f_values():
            raise QuantumNumberError(
                f'F={AngularMomentum(abs(two_f))} is outside {self.ref} '
                f'(allowed {[str(AngularMomentum(f)) for f in self.f_values()]})'
            )

    def check_mf(self, two_mf: int):
        top = self.two_i + self.two_j
        if isinstance(two_mf, bool) or not isinstance(two_mf, int):
            raise QuantumNumberError(f'mF twice-value must be an integer, got {two_mf!r}')
        if abs(two_mf) > top or (top - two_mf) % 2:
            raise QuantumNumberError(f'2mF={two_mf} is not a valid projection for {self.ref}')

    def spans_all_f(self, two_mf: int) -> bool:
        """True when I >= J and |mF| <= I - J, so the block holds all 2J+1 F values"""
        return self.two_i >= self.two_j and abs(two_mf) <= self.two_i - self.two_j

    def with_constants(self, **changes) -> 'LevelSpec':
        return replace(self, **changes)

    def __str__(self):
        return self.ref


@dataclass(frozen=True)
class Isotope:
    key: str
    g_i: float
    levels: Tuple[LevelSpec, ...]

    def level(self, label: str) -> LevelSpec:
        for level in self.levels:
            if level.label == label:
                return level
        raise ConfigurationError(
            f'Unknown level {label!r} for {self.key} (have {[lv.label for lv in self.levels]})'
        )

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(level.label for level in self.levels)


@dataclass(frozen=True)
class SpeciesDb:
    """Species key -> Isotope. Immutable once built."""

    entries: Mapping[str, Isotope] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'entries', MappingProxyType(dict(self.entries)))

    def __getitem__(self, key: str) -> Isotope:
        try:
            return self.entries[key]
        except KeyError:
            raise ConfigurationError(
                f'Unknown species {key!r} (have {sorted(self.entries)})'
            ) from None

    def __contains__(self, key):
        return key in self.entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, SpeciesDb):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __reduce__(self):
        return (SpeciesDb, (dict(self.entries),))

    def keys(self):
        return self.entries.keys()

    def level(self, ref: str) -> LevelSpec:
        """Resolve a `key/label` reference such as `lu176/3D1`"""
        key, sep, label = ref.partition('/')
        if not sep or not label:
            raise ConfigurationError(f'Level reference {ref!r} must look like "key/label"')
        return self[key].level(label)

    def merged(self, other: 'SpeciesDb') -> 'SpeciesDb':
        """Entries of `other` shadow ours by key"""
        return SpeciesDb({**self.entries, **other.entries})


@dataclass(frozen=True)
class TrapGeometry:
    """
    Quadrupole potential A[x² + y² - 2z² + ε(x² - y²)] in its principal axes,
    rotated onto the quantization axis by Euler angles alpha and beta.
    """

    a_grad: float  # V/m²
    epsilon: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if abs(self.epsilon) > 1.0:
            raise DomainError(f'|epsilon| must not exceed 1, got {self.epsilon}')

    def scaled(self, factor: float) -> 'TrapGeometry':
        return replace(self, a_grad=self.a_grad * factor)
