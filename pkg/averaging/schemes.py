"""
Averaging schemes: weighted sets of (ground, excited) transitions whose mean
frequency is the clock reference.

Weights are exact Fractions that must sum to one. Projections are twice-values
throughout, including the scheme's effective delta m.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from config.exceptions import ConfigurationError
from species.levels import SpeciesDb
from species.loader import builtin_species
from zeeman.transitions import StateRef, Transition


@dataclass(frozen=True)
class WeightedTransition:
    transition: Transition
    weight: Fraction

    @property
    def ground(self) -> StateRef:
        return self.transition.ground

    @property
    def excited(self) -> StateRef:
        return self.transition.excited


@dataclass(frozen=True)
class Completeness:
    excited: bool
    ground: bool

    @property
    def complete(self) -> bool:
        return self.excited and self.ground


def infer_delta_m(components: Iterable[WeightedTransition]) -> Fraction:
    """sum of w (2mF' - 2mF), i.e. twice the effective delta m"""
    return sum((c.weight * (c.excited.two_mf - c.ground.two_mf) for c in components), Fraction(0))


@dataclass(frozen=True)
class AveragingScheme:
    name: str
    components: Tuple[WeightedTransition, ...]
    two_delta_m: int

    def __post_init__(self):
        object.__setattr__(self, 'components', tuple(self.components))
        if not self.components:
            raise ConfigurationError(f'Scheme {self.name!r} has no transitions')
        for component in self.components:
            if component.weight <= 0:
                raise ConfigurationError(
                    f'Scheme {self.name!r}: weight of {component.transition} must be positive'
                )
        total = sum((c.weight for c in self.components), Fraction(0))
        if total != 1:
            raise ConfigurationError(f'Scheme {self.name!r}: weights sum to {total}, not 1')
        pairs = [(c.ground, c.excited) for c in self.components]
        if len(set(pairs)) != len(pairs):
            raise ConfigurationError(f'Scheme {self.name!r} lists the same transition twice')
        inferred = infer_delta_m(self.components)
        if inferred != self.two_delta_m:
            raise ConfigurationError(
                f'Scheme {self.name!r}: declared 2*delta_m={self.two_delta_m} '
                f'but the transitions give {inferred}'
            )

    @property
    def delta_m(self) -> Fraction:
        return Fraction(self.two_delta_m, 2)

    @property
    def transitions(self) -> Tuple[Transition, ...]:
        return tuple(c.transition for c in self.components)

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return tuple(c.weight for c in self.components)

    @property
    def levels(self):
        seen = []
        for component in self.components:
            for level in (component.ground.level, component.excited.level):
                if level not in seen:
                    seen.append(level)
        return seen

    @property
    def g_i(self) -> float:
        return self.components[0].excited.level.g_i

    def with_weights(self, weights: Sequence[Fraction]) -> 'AveragingScheme':
        return make_scheme(self.name, [
            (c.ground, c.excited, weight) for c, weight in zip(self.components, weights, strict=True)
        ])

    def __str__(self):
        return self.name


def side_weights(scheme: AveragingScheme, side: str) -> Dict[StateRef, Fraction]:
    """Total weight carried by each distinct ground or excited state"""
    weights: Dict[StateRef, Fraction] = defaultdict(Fraction)
    for component in scheme.components:
        weights[getattr(component, side)] += component.weight
    return dict(weights)


def _side_complete(weights: Dict[StateRef, Fraction]) -> bool:
    groups = defaultdict(dict)
    for state, weight in weights.items():
        groups[(state.level, state.two_mf)][state.two_f] = weight
    for (level, two_mf), by_f in groups.items():
        if not level.spans_all_f(two_mf):
            return False
        if set(by_f) != set(level.f_values()):
            return False
        if len(set(by_f.values())) != 1:
            return False
    return True


def completeness(scheme: AveragingScheme) -> Completeness:
    """
    A side is complete when, for every (level, mF) it touches, it covers all
    2J+1 values of F with equal weight, and I >= J, |mF| <= I - J.
    """
    return Completeness(
        excited=_side_complete(side_weights(scheme, 'excited')),
        ground=_side_complete(side_weights(scheme, 'ground')),
    )


def make_scheme(name: str, entries: Iterable[Tuple[StateRef, StateRef, Fraction]],
                two_delta_m: Optional[int] = None) -> AveragingScheme:
    components = tuple(
        WeightedTransition(Transition(ground, excited), Fraction(weight))
        for ground, excited, weight in entries
    )
    if two_delta_m is None:
        inferred = infer_delta_m(components)
        if inferred.denominator != 1:
            raise ConfigurationError(f'Scheme {name!r}: effective 2*delta_m {inferred} is not an integer')
        two_delta_m = int(inferred)
    return AveragingScheme(name=name, components=components, two_delta_m=two_delta_m)


def _lu176_m0(db: SpeciesDb) -> AveragingScheme:
    ground = db.level('lu176/1S0')
    excited = db.level('lu176/3D1')
    third = Fraction(1, 3)
    return make_scheme('lu176_m0', [
        (StateRef(ground, 14, 0), StateRef(excited, two_f, 0), third) for two_f in (12, 14, 16)
    ], two_delta_m=0)


def _lu176_forbidden_m0(db: SpeciesDb) -> AveragingScheme:
    ground = db.level('lu176/1S0')
    excited = db.level('lu176/3D1')
    third, sixth = Fraction(1, 3), Fraction(1, 6)
    return make_scheme('lu176_forbidden_m0', [
        (StateRef(ground, 14, 0), StateRef(excited, 12, 0), third),
        (StateRef(ground, 14, 2), StateRef(excited, 14, 0), sixth),
        (StateRef(ground, 14, -2), StateRef(excited, 14, 0), sixth),
        (StateRef(ground, 14, 0), StateRef(excited, 16, 0), third),
    ], two_delta_m=0)


def _lu175_fip(db: SpeciesDb) -> AveragingScheme:
    ground = db.level('lu175/1S0')
    excited = db.level('lu175/3D1')
    third = Fraction(1, 3)
    return make_scheme('lu175_fip', [
        (StateRef(ground, 7, 5), StateRef(excited, two_f, 3), third) for two_f in (5, 7, 9)
    ], two_delta_m=-2)


def _sr87_m0(db: SpeciesDb) -> AveragingScheme:
    ground = db.level('sr87/5S1/2')
    excited = db.level('sr87/4D5/2')
    sixth = Fraction(1, 6)
    entries = []
    for k in (1, 2, 3):
        entries.append((StateRef(ground, 8, 0), StateRef(excited, 4 * k, 0), sixth))
        entries.append((StateRef(ground, 10, 0), StateRef(excited, 4 * k + 2, 0), sixth))
    return make_scheme('sr87_m0', entries, two_delta_m=0)


def _sr88_zeeman6(db: SpeciesDb) -> AveragingScheme:
    """
    Six Zeeman components reaching every D5/2 projection once. I = 0, so this
    cancels through the mF sum alone and is reported incomplete.
    """
    ground = db.level('sr88/5S1/2')
    excited = db.level('sr88/4D5/2')
    sixth = Fraction(1, 6)
    return make_scheme('sr88_zeeman6', [
        (StateRef(ground, 1, sign), StateRef(excited, 5, sign * two_m), sixth)
        for sign in (1, -1) for two_m in (5, 3, 1)
    ], two_delta_m=0)


BUILTIN_SCHEMES = {
    'lu176_m0': _lu176_m0,
    'lu176_forbidden_m0': _lu176_forbidden_m0,
    'lu175_fip': _lu175_fip,
    'sr87_m0': _sr87_m0,
    'sr88_zeeman6': _sr88_zeeman6,
}


def builtin_scheme(key: str, db: Optional[SpeciesDb] = None) -> AveragingScheme:
    """
    One of the named schemes, built against `db` (the built-in species by default).

    Raises:
        ConfigurationError: unknown key
    """
    try:
        factory = BUILTIN_SCHEMES[key]
    except KeyError:
        raise ConfigurationError(
            f'Unknown scheme {key!r} (built-ins: {sorted(BUILTIN_SCHEMES)})'
        ) from None
    return factory(db or builtin_species())
