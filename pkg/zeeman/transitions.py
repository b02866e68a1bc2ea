"""
Transition frequencies between dressed states and their field derivatives.

Frequencies are E_excited(B) - E_ground(B) with each level's energy measured
from its own hyperfine centroid; the optical offset is not modeled.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

from django.conf import settings

from angular.symbols import AngularMomentum
from config.exceptions import PreconditionError, QuantumNumberError
from fieldpoint.residual import residual_quadratic, residual_quadratic_coefficient
from species.levels import LevelSpec

from .hamiltonian import dressed_state, state_energy, zeeman_operator

logger = logging.getLogger(__name__)

RESOLUTION_HZ = 1.0e-6


@dataclass(frozen=True)
class StateRef:
    """|level, F, mF> with F and mF as twice-values"""

    level: LevelSpec
    two_f: int
    two_mf: int

    def __post_init__(self):
        self.level.check_f(self.two_f)
        self.level.check_mf(self.two_mf)
        if abs(self.two_mf) > self.two_f:
            raise QuantumNumberError(
                f'mF={_signed(self.two_mf)} is outside F={AngularMomentum(self.two_f)} of {self.level.ref}'
            )

    @property
    def name(self) -> str:
        return f'{self.level.ref}_F{self.two_f}_mF{self.two_mf}'

    def energy(self, field_gauss: float, fine_structure: bool = False) -> float:
        energy = state_energy(self.level, self.two_f, self.two_mf, field_gauss)
        if fine_structure and self.level.fs_partner is not None:
            energy += residual_quadratic(self.level, field_gauss)
        return energy

    def slope(self, field_gauss: float, fine_structure: bool = False) -> float:
        state = dressed_state(self.level, self.two_f, self.two_mf, field_gauss)
        slope = state.slope(zeeman_operator(self.level, self.two_mf))
        if fine_structure and self.level.fs_partner is not None:
            slope += 2 * residual_quadratic_coefficient(self.level) * field_gauss
        return slope

    def __str__(self):
        return f'|{self.level.ref}, {AngularMomentum(self.two_f)}, {_signed(self.two_mf)}>'


def _signed(two_m: int) -> str:
    text = str(AngularMomentum(abs(two_m)))
    return f'-{text}' if two_m < 0 else text


@dataclass(frozen=True)
class Transition:
    ground: StateRef
    excited: StateRef

    def __post_init__(self):
        if self.ground.level.g_i != self.excited.level.g_i:
            raise PreconditionError(
                f'{self.ground.level.ref} and {self.excited.level.ref} have different gI'
            )

    @property
    def name(self) -> str:
        return f'{self.ground.name}->{self.excited.name}'

    def frequency(self, field_gauss: float, fine_structure: bool = False) -> float:
        return (
            self.excited.energy(field_gauss, fine_structure)
            - self.ground.energy(field_gauss, fine_structure)
        )

    def slope(self, field_gauss: float, fine_structure: bool = False) -> float:
        """Hellmann–Feynman dnu/dB in Hz/G"""
        return (
            self.excited.slope(field_gauss, fine_structure)
            - self.ground.slope(field_gauss, fine_structure)
        )

    def __str__(self):
        return f'{self.ground} -> {self.excited}'


def transition_frequency(ground: StateRef, excited: StateRef, field_gauss: float,
                         fine_structure: bool = False) -> float:
    return Transition(ground, excited).frequency(field_gauss, fine_structure)


def transition_slope(ground: StateRef, excited: StateRef, field_gauss: float,
                     fine_structure: bool = False) -> float:
    return Transition(ground, excited).slope(field_gauss, fine_structure)


@dataclass(frozen=True)
class Derivative:
    """Five-point estimate with a further Richardson level as its error bar"""

    value: float
    richardson: float
    error: float
    step: float
    resolved: bool


def default_step(field_gauss: float) -> float:
    config = settings.HFAVG
    return max(config['RELATIVE_STEP'] * field_gauss, config['MIN_STEP_GAUSS'])


def central_derivative(func: Callable[[float], float], field_gauss: float,
                       step: Optional[float] = None) -> Derivative:
    """
    df/dB at B from central differences at B ± h, B ± h/2 and B ± h/4.

    Raises:
        PreconditionError: B - h < 0
    """
    step = default_step(field_gauss) if step is None else step
    if step <= 0:
        raise PreconditionError(f'Step must be positive, got {step} G')
    if field_gauss - step < 0:
        raise PreconditionError(f'B - h must be non-negative (B={field_gauss} G, h={step} G)')

    differences = {}
    for divisor in (1, 2, 4):
        s = step / divisor
        differences[divisor] = func(field_gauss + s) - func(field_gauss - s)

    def central(divisor):
        return differences[divisor] / (2 * step / divisor)

    five_point = (4 * central(2) - central(1)) / 3
    five_point_half = (4 * central(4) - central(2)) / 3
    richardson = (16 * five_point_half - five_point) / 15
    resolved = min(abs(d) for d in differences.values()) >= RESOLUTION_HZ
    if not resolved:
        logger.warning(f'Finite difference at {field_gauss} G with h={step} G is below 1e-6 Hz resolution')
    return Derivative(
        value=five_point,
        richardson=richardson,
        error=abs(richardson - five_point),
        step=step,
        resolved=resolved,
    )


def second_derivative(func: Callable[[float], float], field_gauss: float, step: float) -> float:
    if field_gauss - step < 0:
        raise PreconditionError(f'B - h must be non-negative (B={field_gauss} G, h={step} G)')
    return (func(field_gauss + step) - 2 * func(field_gauss) + func(field_gauss - step)) / step ** 2


def dnu_dB(transition: Transition, field_gauss: float, step: Optional[float] = None,
           fine_structure: bool = False) -> Derivative:
    return central_derivative(
        lambda b: transition.frequency(b, fine_structure), field_gauss, step,
    )


def d2nu_dB2(transition: Transition, field_gauss: float, step: float = 1.0,
             fine_structure: bool = False) -> float:
    return second_derivative(
        lambda b: transition.frequency(b, fine_structure), field_gauss, step,
    )
