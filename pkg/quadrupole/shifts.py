"""
Electric-quadrupole shift of hyperfine states in a trap field gradient.

Every matrix element factors into a unit-free angular coefficient times the
scalar Theta(J) * A * geometry_factor * e a0² / h (Hz). The angular part is

    (-1)^(F + F' - mF + I + J) sqrt((2F+1)(2F'+1))
        * (F' 2 F; -mF 0 mF) {F' 2 F; J I J} / (J 2 J; -J 0 J)

which for F = F' is the familiar low-field diagonal shift. Sign convention
follows that expression as written.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.core.cache import cache

from angular.symbols import AngularMomentum, clebsch_gordan, parity_sign, wigner3j, wigner6j
from config.exceptions import PreconditionError
from species.constants import CONSTANTS
from species.levels import LevelSpec, TrapGeometry
from zeeman.hamiltonian import build_block, eigenstates

logger = logging.getLogger(__name__)


def geometry_factor(geom: TrapGeometry) -> float:
    """3cos²β - 1 + ε sin²β (cos²α - sin²α), without A"""
    cos_b, sin_b = math.cos(geom.beta), math.sin(geom.beta)
    cos_a, sin_a = math.cos(geom.alpha), math.sin(geom.alpha)
    return 3 * cos_b ** 2 - 1 + geom.epsilon * sin_b ** 2 * (cos_a ** 2 - sin_a ** 2)


def _stretched_3j(two_j: int) -> float:
    return wigner3j(two_j, 4, two_j, -two_j, 0, two_j)


def relative_coefficient(level: LevelSpec, two_f_row: int, two_f_col: int, two_mf: int) -> float:
    """Unit-free angular factor of <F_row mF|H_Q|F_col mF>; zero for J < 1"""
    two_i, two_j = level.two_i, level.two_j
    if two_j < 2:
        return 0.0
    symbol = wigner3j(two_f_row, 4, two_f_col, -two_mf, 0, two_mf)
    if not symbol:
        return 0.0
    phase = parity_sign(two_f_row + two_f_col - two_mf + two_i + two_j)
    return (
        phase
        * math.sqrt((two_f_row + 1) * (two_f_col + 1))
        * symbol
        * wigner6j(two_f_row, 4, two_f_col, two_j, two_i, two_j)
        / _stretched_3j(two_j)
    )


def quad_scalar(level: LevelSpec, geom: TrapGeometry) -> float:
    """
    Theta(J) A geometry_factor e a0²/h in Hz.

    Raises:
        PreconditionError: J < 1 with a non-zero quadrupole moment
    """
    if level.two_j < 2:
        if level.theta_q:
            raise PreconditionError(
                f'{level.ref} has J={level.j} < 1 but a non-zero quadrupole moment {level.theta_q}'
            )
        return 0.0
    return level.theta_q * geom.a_grad * geometry_factor(geom) * CONSTANTS.quad_hz_per_unit


@dataclass(frozen=True)
class QuadShift:
    """Low-field diagonal shift; value = coefficient * scalar"""

    value: float  # Hz
    two_f: int
    two_mf: int
    coefficient: float
    scalar: float  # Hz

    @property
    def state(self):
        return AngularMomentum(self.two_f), self.two_mf


def quad_shift(level: LevelSpec, two_f: int, two_mf: int, geom: TrapGeometry) -> QuadShift:
    level.check_f(two_f)
    level.check_mf(two_mf)
    scalar = quad_scalar(level, geom)
    coefficient = relative_coefficient(level, two_f, two_f, two_mf) if abs(two_mf) <= two_f else 0.0
    return QuadShift(
        value=coefficient * scalar,
        two_f=two_f,
        two_mf=two_mf,
        coefficient=coefficient,
        scalar=scalar,
    )


def quad_mj_shift(level: LevelSpec, two_mj: int, geom: TrapGeometry) -> float:
    """<J mJ|H_Q|J mJ> in Hz"""
    two_j = level.two_j
    if two_j < 2:
        quad_scalar(level, geom)
        return 0.0
    coefficient = (
        parity_sign(two_j - two_mj)
        * wigner3j(two_j, 4, two_j, -two_mj, 0, two_mj)
        / _stretched_3j(two_j)
    )
    return coefficient * quad_scalar(level, geom)


def quad_shift_via_mj(level: LevelSpec, two_f: int, two_mf: int, geom: TrapGeometry) -> float:
    """Diagonal shift rebuilt as sum over mJ of C²_{F,mJ} <J mJ|H_Q|J mJ>"""
    level.check_f(two_f)
    total = 0.0
    for two_mj in range(-level.two_j, level.two_j + 1, 2):
        two_mi = two_mf - two_mj
        if abs(two_mi) > level.two_i:
            continue
        weight = clebsch_gordan(level.two_i, level.two_j, two_f, two_mi, two_mj, two_mf) ** 2
        if weight:
            total += weight * quad_mj_shift(level, two_mj, geom)
    return total


def _coefficient_matrix(level: LevelSpec, two_mf: int) -> np.ndarray:
    cache_key = f'quad_op_{level.fingerprint}_{two_mf}'
    cached = cache.get(cache_key)
    if cached is not None:
        return cached
    basis = level.block_basis(two_mf)
    matrix = np.array([
        [relative_coefficient(level, row, col, two_mf) for col in basis]
        for row in basis
    ])
    cache.set(cache_key, matrix)
    return matrix


def quad_matrix(level: LevelSpec, two_mf: int, geom: TrapGeometry) -> np.ndarray:
    """Full H_Q over the F basis of the mF block, in Hz"""
    return _coefficient_matrix(level, two_mf) * quad_scalar(level, geom)


def _require_complete_block(level: LevelSpec, two_mf: int):
    level.check_mf(two_mf)
    if level.two_j < 2:
        raise PreconditionError(
            f'{level.ref} has J={level.j} < 1; there is no quadrupole shift to average'
        )
    if not level.spans_all_f(two_mf):
        raise PreconditionError(
            f'Averaging over F cancels the quadrupole shift only when I >= J and |mF| <= I - J; '
            f'{level.ref} has I={level.nuclear_spin}, J={level.j}, 2mF={two_mf}'
        )


def quad_average_over_F(level: LevelSpec, two_mf: int, geom: TrapGeometry) -> float:
    """Mean of the diagonal shift over all 2J+1 values of F at fixed mF"""
    _require_complete_block(level, two_mf)
    shifts = [quad_shift(level, f, two_mf, geom).value for f in level.block_basis(two_mf)]
    return sum(shifts) / len(shifts)


def quad_average_over_mF(level: LevelSpec, two_f: int, geom: TrapGeometry) -> float:
    """Mean of the diagonal shift over all 2F+1 projections of one F"""
    level.check_f(two_f)
    shifts = [quad_shift(level, two_f, m, geom).value for m in range(-two_f, two_f + 1, 2)]
    return sum(shifts) / len(shifts)


def quad_trace_mixed(level: LevelSpec, two_mf: int, field_gauss: float, geom: TrapGeometry) -> float:
    """Sum over the dressed states of the block at B of <state|H_Q|state>"""
    _require_complete_block(level, two_mf)
    matrix = quad_matrix(level, two_mf, geom)
    states = eigenstates(build_block(level, two_mf, field_gauss))
    total = sum(float(s.amplitudes @ matrix @ s.amplitudes) for s in states)
    logger.debug(f'Quadrupole trace for {level.ref} 2mF={two_mf} at {field_gauss} G: {total} Hz')
    return total
