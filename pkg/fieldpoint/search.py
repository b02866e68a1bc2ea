"""
Field-independent points of an averaged frequency.

Two routes are kept apart: the closed-form model (linear nuclear Zeeman term
plus the rigid fine-structure quadratic) and a numeric search on the fully
diagonalized average.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from django.conf import settings
from scipy.optimize import brentq

from averaging.evaluation import (
    avg_derivative, avg_frequency, avg_slope, component_slopes, expected_linear_slope,
)
from averaging.schemes import AveragingScheme
from config.exceptions import DerivativeNoiseError, NoFieldIndependentPointError, PreconditionError
from species.levels import LevelSpec
from zeeman.transitions import default_step, second_derivative

from .residual import residual_quadratic_coefficient

logger = logging.getLogger(__name__)

ANALYTIC = 'analytic'
NUMERIC = 'numeric'


@dataclass(frozen=True)
class FieldIndependentPoint:
    B_star: float  # G
    curvature: float  # Hz/G², second derivative of the average
    component_slopes: Dict[str, float] = field(default_factory=dict)  # Hz/G
    method: str = ANALYTIC
    bracket: Optional[Tuple[float, float]] = None
    residual_slope: float = 0.0  # Hz/G


def fine_structure_coefficient(scheme: AveragingScheme, level: Optional[LevelSpec] = None) -> float:
    """
    Quadratic coefficient (Hz/G²) of the averaged frequency. With a level,
    that level's partner alone; otherwise the weighted excited-minus-ground
    sum over every level of the scheme that has a partner.
    """
    if level is not None:
        return residual_quadratic_coefficient(level)

    total = 0.0
    found = False
    for component in scheme.components:
        for state, sign in ((component.excited, 1), (component.ground, -1)):
            if state.level.fs_partner is not None:
                found = True
                total += sign * float(component.weight) * residual_quadratic_coefficient(state.level)
    if not found:
        raise PreconditionError(f'No level of scheme {scheme.name} has a fine-structure partner')
    return total


def fie_model(scheme: AveragingScheme, level: Optional[LevelSpec], field_gauss: float) -> float:
    """Closed-form averaged shift from B = 0, in Hz"""
    return (
        expected_linear_slope(scheme) * field_gauss
        + fine_structure_coefficient(scheme, level) * field_gauss ** 2
    )


def analytic_fip(scheme: AveragingScheme, level: Optional[LevelSpec] = None) -> FieldIndependentPoint:
    """
    Stationary point of fie_model.

    Raises:
        NoFieldIndependentPointError: the linear term and the curvature do not
            give a root at positive field
    """
    linear = expected_linear_slope(scheme)
    quadratic = fine_structure_coefficient(scheme, level)
    if linear == 0:
        b_star = 0.0
    elif quadratic == 0:
        raise NoFieldIndependentPointError(
            f'Scheme {scheme.name} has no quadratic term to balance its linear slope {linear} Hz/G'
        )
    else:
        b_star = -linear / (2 * quadratic)
        if b_star < 0:
            raise NoFieldIndependentPointError(
                f'No field-independent point for this delta m sign (scheme {scheme.name}, '
                f'linear slope {linear} Hz/G, curvature {2 * quadratic} Hz/G²)'
            )
    return FieldIndependentPoint(B_star=b_star, curvature=2 * quadratic, method=ANALYTIC)


def _stable_slope(scheme: AveragingScheme, field_gauss: float) -> float:
    """d(avg)/dB with fine structure, widening the step until Richardson agrees"""
    config = settings.HFAVG
    tolerance = config['FIP_SLOPE_TOLERANCE']
    step = default_step(field_gauss)
    if field_gauss < step:
        return avg_slope(scheme, field_gauss, fine_structure=True)
    while True:
        derivative = avg_derivative(scheme, field_gauss, step, fine_structure=True)
        if derivative.error <= 0.1 * max(abs(derivative.value), tolerance):
            return derivative.value
        wider = 2 * step
        if wider > config['FIP_MAX_STEP'] or field_gauss - wider < 0:
            raise DerivativeNoiseError(
                f'Derivative at {field_gauss} G stays noisy up to h={step} G '
                f'(estimate {derivative.value}, error {derivative.error})'
            )
        logger.info(f'Widening finite-difference step at {field_gauss} G to {wider} G')
        step = wider


def _scan(scheme: AveragingScheme, b_lo: float, b_hi: float) -> Tuple[float, float]:
    grid = np.linspace(b_lo, b_hi, settings.HFAVG['FIP_SCAN_STEPS'])
    slopes = [_stable_slope(scheme, float(b)) for b in grid]
    for (a, slope_a), (b, slope_b) in zip(zip(grid, slopes), zip(grid[1:], slopes[1:])):
        if slope_a * slope_b <= 0:
            return float(a), float(b)
    raise NoFieldIndependentPointError(
        f'd(avg)/dB of scheme {scheme.name} does not change sign on [{b_lo}, {b_hi}] G'
    )


def find_fip(scheme: AveragingScheme, b_lo: Optional[float] = None,
             b_hi: Optional[float] = None) -> FieldIndependentPoint:
    """
    Numeric field-independent point of the averaged frequency, fine-structure
    shift included.

    Raises:
        PreconditionError: b_lo < 0 or b_lo >= b_hi
        NoFieldIndependentPointError: no sign change on the interval
        DerivativeNoiseError: finite differences too noisy near the root;
            carries the best bracket found
    """
    config = settings.HFAVG
    default_lo, default_hi = config['FIP_SEARCH_RANGE']
    b_lo = default_lo if b_lo is None else b_lo
    b_hi = default_hi if b_hi is None else b_hi
    if b_lo < 0 or b_lo >= b_hi:
        raise PreconditionError(f'Search interval [{b_lo}, {b_hi}] G must satisfy 0 <= lo < hi')

    lo, hi = _scan(scheme, b_lo, b_hi)
    logger.info(f'Scheme {scheme.name}: d(avg)/dB changes sign on [{lo}, {hi}] G')

    objective = lambda b: _stable_slope(scheme, b)  # noqa: E731
    try:
        if objective(lo) == 0:
            b_star = lo
        elif objective(hi) == 0:
            b_star = hi
        else:
            b_star = brentq(objective, lo, hi, xtol=1e-6)
    except DerivativeNoiseError as e:
        raise DerivativeNoiseError(str(e), bracket=(lo, hi)) from e

    quarter = config['FIP_BRACKET_WIDTH'] / 4
    bracket = (max(b_star - quarter, 0.0), b_star + quarter)
    if objective(bracket[0]) * objective(bracket[1]) > 0:
        raise DerivativeNoiseError(
            f'No sign change across {bracket} G around the refined root {b_star} G', bracket=(lo, hi),
        )

    residual = objective(b_star)
    if abs(residual) >= config['FIP_SLOPE_TOLERANCE']:
        logger.warning(f'Scheme {scheme.name}: |d(avg)/dB| = {abs(residual)} Hz/G at B* = {b_star} G')

    if b_star > 0:
        curvature = second_derivative(
            lambda b: avg_frequency(scheme, b, fine_structure=True), b_star, min(config['FIP_MAX_STEP'], b_star),
        )
    else:
        curvature = 2 * fine_structure_coefficient(scheme)

    return FieldIndependentPoint(
        B_star=b_star,
        curvature=curvature,
        component_slopes=component_slopes(scheme, b_star, fine_structure=True),
        method=NUMERIC,
        bracket=bracket,
        residual_slope=residual,
    )
