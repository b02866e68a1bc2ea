"""
Exact angular-momentum algebra.

Half-integers are carried as twice-values (j = 7/2 is stored as 7) so that
parity and triangle checks are exact integer tests. Racah sums are evaluated
over Fractions built from integer factorials and converted to float once,
at the very end.

Sign conventions: Condon-Shortley for Clebsch-Gordan coefficients,
<j1 m1; j2 m2 | j m> = (-1)^(j1 - j2 + m) sqrt(2j + 1) (j1 j2 j; m1 m2 -m).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Tuple, TypeAlias, Union

from django.core.cache import cache

from config.exceptions import QuantumNumberError

CouplingCoefficient: TypeAlias = float


@dataclass(frozen=True, order=True)
class AngularMomentum:
    """Angular momentum quantum number j stored as the integer 2j"""

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, bool) or not isinstance(self.twice, int):
            raise QuantumNumberError(f'twice-value must be an integer, got {self.twice!r}')
        if self.twice < 0:
            raise QuantumNumberError(f'twice-value must be non-negative, got {self.twice}')

    @classmethod
    def from_value(cls, value) -> 'AngularMomentum':
        """Build from j itself (int, Fraction, '7/2' or 3.5)"""
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise QuantumNumberError(f'{value} is not an integer or half-integer')
        return cls(int(doubled))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def dimension(self) -> int:
        return self.twice + 1

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def projections(self) -> range:
        """All allowed twice-values of m, ascending"""
        return range(-self.twice, self.twice + 1, 2)

    def allows(self, two_m: int) -> bool:
        return abs(two_m) <= self.twice and (self.twice - two_m) % 2 == 0

    def couplings(self, other: 'AngularMomentum') -> Tuple['AngularMomentum', ...]:
        """Resultants |j1 - j2| .. j1 + j2 of coupling with another angular momentum"""
        lo = abs(self.twice - other.twice)
        hi = self.twice + other.twice
        return tuple(AngularMomentum(t) for t in range(lo, hi + 1, 2))

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f'{self.twice}/2'


TwiceValue = Union[int, AngularMomentum]


def twice_of(x: TwiceValue) -> int:
    """Twice-value of an AngularMomentum or a raw twice-value integer"""
    if isinstance(x, AngularMomentum):
        return x.twice
    if isinstance(x, bool) or not isinstance(x, int):
        raise QuantumNumberError(f'expected a twice-value integer, got {x!r}')
    return x


def parity_sign(twice_exponent: int) -> int:
    """(-1)**(twice_exponent / 2); the exponent must be an integer"""
    if twice_exponent % 2:
        raise QuantumNumberError(f'phase exponent {twice_exponent}/2 is not an integer')
    return -1 if (twice_exponent // 2) % 2 else 1


def triangle(a: int, b: int, c: int) -> bool:
    """Triangle rule on twice-values, including integer perimeter"""
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def _check_pair(two_j: int, two_m: int):
    if two_j < 0:
        raise QuantumNumberError(f'negative angular momentum 2j={two_j}')
    if (two_j - two_m) % 2:
        raise QuantumNumberError(f'2j={two_j} and 2m={two_m} have different parity')


def _triad_delta(x: int, y: int, z: int) -> Fraction:
    """Triangle coefficient for a triad of twice-values with integer perimeter"""
    return Fraction(
        factorial((x + y - z) // 2) * factorial((x - y + z) // 2) * factorial((-x + y + z) // 2),
        factorial((x + y + z) // 2 + 1),
    )


def _signed_sqrt(square: Fraction, sign: int) -> float:
    return math.copysign(math.sqrt(square), sign) if square else 0.0


def _racah_3j(j1, j2, j3, m1, m2, m3) -> float:
    # All arguments are twice-values that already passed the selection rules
    a = (j1 + j2 - j3) // 2
    t_min = max(0, (j2 - j3 - m1) // 2, (j1 - j3 + m2) // 2)
    t_max = min(a, (j1 - m1) // 2, (j2 + m2) // 2)
    series = Fraction(0)
    for t in range(t_min, t_max + 1):
        denominator = (
            factorial(t)
            * factorial((j3 - j2 + m1) // 2 + t)
            * factorial((j3 - j1 - m2) // 2 + t)
            * factorial(a - t)
            * factorial((j1 - m1) // 2 - t)
            * factorial((j2 + m2) // 2 - t)
        )
        series += Fraction(-1 if t % 2 else 1, denominator)
    if not series:
        return 0.0
    prefactor = _triad_delta(j1, j2, j3)
    for two_j, two_m in ((j1, m1), (j2, m2), (j3, m3)):
        prefactor *= factorial((two_j + two_m) // 2) * factorial((two_j - two_m) // 2)
    sign = parity_sign(j1 - j2 - m3) * (1 if series > 0 else -1)
    return _signed_sqrt(series * series * prefactor, sign)


def wigner3j(j1: TwiceValue, j2: TwiceValue, j3: TwiceValue,
             m1: int, m2: int, m3: int) -> float:
    """
    Wigner 3j symbol (j1 j2 j3; m1 m2 m3) from twice-valued arguments.

    Returns exactly 0.0 when a triangle, projection-range or m1 + m2 + m3 = 0
    selection rule fails.

    Raises:
        QuantumNumberError: negative j or a j/m pair of different parity
    """
    j1, j2, j3 = twice_of(j1), twice_of(j2), twice_of(j3)
    for two_j, two_m in ((j1, m1), (j2, m2), (j3, m3)):
        _check_pair(two_j, two_m)

    if m1 + m2 + m3 != 0 or not triangle(j1, j2, j3):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0

    cache_key = f'w3j_{j1}_{j2}_{j3}_{m1}_{m2}_{m3}'
    cached = cache.get(cache_key)
    if cached is not None:
        return cached
    value = _racah_3j(j1, j2, j3, m1, m2, m3)
    cache.set(cache_key, value)
    return value


def wigner6j(j1: TwiceValue, j2: TwiceValue, j3: TwiceValue,
             j4: TwiceValue, j5: TwiceValue, j6: TwiceValue) -> float:
    """
    Wigner 6j symbol {j1 j2 j3; j4 j5 j6} from twice-valued arguments.

    Returns exactly 0.0 when any of the triads (j1 j2 j3), (j1 j5 j6),
    (j4 j2 j6), (j4 j5 j3) violates the triangle rule.

    Raises:
        QuantumNumberError: negative arguments
    """
    args = tuple(twice_of(j) for j in (j1, j2, j3, j4, j5, j6))
    if any(j < 0 for j in args):
        raise QuantumNumberError(f'negative angular momentum in 6j arguments {args}')
    j1, j2, j3, j4, j5, j6 = args
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(triangle(*triad) for triad in triads):
        return 0.0

    cache_key = f'w6j_{j1}_{j2}_{j3}_{j4}_{j5}_{j6}'
    cached = cache.get(cache_key)
    if cached is not None:
        return cached

    a_terms = [sum(triad) // 2 for triad in triads]
    b_terms = [(j1 + j2 + j4 + j5) // 2, (j2 + j3 + j5 + j6) // 2, (j3 + j1 + j6 + j4) // 2]

    prefactor = Fraction(1)
    for triad in triads:
        prefactor *= _triad_delta(*triad)

    series = Fraction(0)
    for t in range(max(a_terms), min(b_terms) + 1):
        denominator = 1
        for a in a_terms:
            denominator *= factorial(t - a)
        for b in b_terms:
            denominator *= factorial(b - t)
        series += Fraction((-1 if t % 2 else 1) * factorial(t + 1), denominator)

    value = _signed_sqrt(series * series * prefactor, 1 if series > 0 else -1)
    cache.set(cache_key, value)
    return value


def clebsch_gordan(j1: TwiceValue, j2: TwiceValue, j: TwiceValue,
                   m1: int, m2: int, m: int) -> CouplingCoefficient:
    """
    Condon-Shortley coefficient <j1 m1; j2 m2 | j m> from twice-values.

    For the hyperfine basis call it as clebsch_gordan(I, J, F, mI, mJ, mF),
    giving C_{F,mJ} of |F mF> = sum_mJ C_{F,mJ} |I, J, mF - mJ, mJ>.
    Selection-rule failures give 0.0; invalid quantum numbers raise.
    """
    j1, j2, j = twice_of(j1), twice_of(j2), twice_of(j)
    for two_j, two_m in ((j1, m1), (j2, m2), (j, m)):
        _check_pair(two_j, two_m)
    if m1 + m2 != m:
        return 0.0
    symbol = wigner3j(j1, j2, j, m1, m2, -m)
    if not symbol:
        return 0.0
    return parity_sign(j1 - j2 + m) * math.sqrt(j + 1) * symbol


def coupled_basis(j1: TwiceValue, j2: TwiceValue, m: int) -> Iterator[int]:
    """Twice-values of the resultants j that contain projection m, ascending"""
    j1, j2 = twice_of(j1), twice_of(j2)
    for j in range(abs(j1 - j2), j1 + j2 + 1, 2):
        if abs(m) <= j:
            yield j
