"""
Evaluation of averaging schemes: the averaged frequency, its field
sensitivity, and the verification report for the two cancellation theorems
(linear Zeeman and quadrupole).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from django.conf import settings

from quadrupole.shifts import quad_average_over_F, quad_average_over_mF, quad_shift
from species.constants import CONSTANTS
from species.hyperfine import g_factor
from species.levels import LevelSpec, TrapGeometry
from zeeman.hamiltonian import zeeman_operator
from zeeman.transitions import Derivative, central_derivative

from .schemes import AveragingScheme, completeness, side_weights

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    measured: float
    threshold: Optional[float]
    detail: Optional[Dict[str, Any]] = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS


def check(name: str, measured: float, threshold: Optional[float], detail=None) -> Check:
    """A check passes when there is no threshold or measured <= threshold"""
    passed = threshold is None or measured <= threshold
    return Check(name, PASS if passed else FAIL, float(measured), threshold, detail)


@dataclass(frozen=True)
class SchemeReport:
    scheme: str
    checks: List[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def gF_average(level: LevelSpec) -> float:
    """Mean Landé g_F over the level's F values; equals gI when I > J"""
    values = [g_factor(level, two_f) for two_f in level.f_values()]
    return sum(values) / len(values)


def avg_frequency(scheme: AveragingScheme, field_gauss: float, fine_structure: bool = False) -> float:
    """Weighted mean transition frequency in Hz"""
    return sum(
        float(c.weight) * c.transition.frequency(field_gauss, fine_structure)
        for c in scheme.components
    )


def avg_slope(scheme: AveragingScheme, field_gauss: float, fine_structure: bool = False) -> float:
    """Hellmann–Feynman d(avg)/dB in Hz/G"""
    return sum(
        float(c.weight) * c.transition.slope(field_gauss, fine_structure)
        for c in scheme.components
    )


def avg_derivative(scheme: AveragingScheme, field_gauss: float, step: Optional[float] = None,
                   fine_structure: bool = False) -> Derivative:
    return central_derivative(
        lambda b: avg_frequency(scheme, b, fine_structure), field_gauss, step,
    )


def component_slopes(scheme: AveragingScheme, field_gauss: float,
                     fine_structure: bool = False) -> Dict[str, float]:
    return {
        c.transition.name: c.transition.slope(field_gauss, fine_structure)
        for c in scheme.components
    }


def expected_linear_slope(scheme: AveragingScheme) -> float:
    """sum w (mF' gI' - mF gI) mu_B/h"""
    return sum(
        float(c.weight) * (c.excited.two_mf * c.excited.level.g_i - c.ground.two_mf * c.ground.level.g_i) / 2
        for c in scheme.components
    ) * CONSTANTS.mu_b_hz_per_gauss


def quadrupole_residual(scheme: AveragingScheme, geom: TrapGeometry, side: str = 'excited'):
    """(sum w q, max |q|) over the distinct states on one side of the scheme"""
    residual = 0.0
    scale = 0.0
    for state, weight in side_weights(scheme, side).items():
        shift = quad_shift(state.level, state.two_f, state.two_mf, geom).value
        residual += float(weight) * shift
        scale = max(scale, abs(shift))
    return residual, scale


def _zeeman_scale(scheme: AveragingScheme) -> float:
    blocks = {(s.level, s.two_mf) for c in scheme.components for s in (c.ground, c.excited)}
    return max(float(np.max(np.abs(zeeman_operator(level, two_mf)))) for level, two_mf in blocks)


def verify_scheme(scheme: AveragingScheme, geom: TrapGeometry,
                  b_grid: Iterable[float] = ()) -> SchemeReport:
    """
    Run the cancellation checks on a scheme. Failures are report entries,
    never exceptions.
    """
    config = settings.HFAVG
    tolerance = config['THEOREM_TOLERANCE']
    checks = []

    flags = completeness(scheme)
    checks.append(check(
        'completeness', 0.0 if flags.complete else 1.0, 0.0,
        {'excited': flags.excited, 'ground': flags.ground},
    ))

    probe = config['SLOPE_PROBE_GAUSS']
    slope = avg_slope(scheme, probe)
    expected = expected_linear_slope(scheme)
    checks.append(check(
        'zeeman_slope', abs(slope - expected), tolerance * _zeeman_scale(scheme),
        {'slope': slope, 'expected': expected, 'field_gauss': probe},
    ))

    for side, name in (('excited', 'quadrupole_residual'), ('ground', 'ground_quadrupole_residual')):
        residual, scale = quadrupole_residual(scheme, geom, side)
        checks.append(check(name, abs(residual), tolerance * scale, {'residual': residual}))

    for b in b_grid:
        slopes = component_slopes(scheme, b)
        checks.append(check(
            f'component_sensitivity[{b!r}]',
            max(abs(s) for s in slopes.values()), None, slopes,
        ))

    report = SchemeReport(scheme.name, checks)
    if not report.passed:
        failed = [c.name for c in checks if not c.passed]
        logger.info(f'Scheme {scheme.name} failed checks {failed}')
    return report


def quadrupole_sum_rule_checks(level: LevelSpec, geom: TrapGeometry, suffix: str = '') -> List[Check]:
    """mF-sum check for the level and, when I >= J, the F-sum check"""
    tolerance = settings.HFAVG['THEOREM_TOLERANCE']
    scale = max(
        abs(quad_shift(level, f, m, geom).value)
        for f in level.f_values() for m in range(-f, f + 1, 2)
    )
    mf_residual = max(abs(quad_average_over_mF(level, f, geom)) for f in level.f_values())
    checks = [check(f'mf_sum[{level.ref}]{suffix}', mf_residual, tolerance * scale)]
    if level.two_j >= 2 and level.two_i >= level.two_j:
        projections = range(-(level.two_i - level.two_j), level.two_i - level.two_j + 1, 2)
        f_residual = max(abs(quad_average_over_F(level, m, geom)) for m in projections)
        checks.append(check(f'f_sum[{level.ref}]{suffix}', f_residual, tolerance * scale))
    return checks
