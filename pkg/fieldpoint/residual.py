"""
Second-order Zeeman coupling to the dominant fine-structure partner.

h dnu = -[mu_B B (gL - gS)]² / (2 hbar omega_FS), applied as a rigid shift to
every hyperfine state of the level.
"""

import math

from config.exceptions import PreconditionError
from species.constants import CONSTANTS
from species.levels import LevelSpec


def residual_quadratic_coefficient(level: LevelSpec) -> float:
    """Coefficient of B² in Hz/G²; negative when the partner lies above"""
    partner = level.fs_partner
    if partner is None:
        raise PreconditionError(f'{level.ref} has no fine-structure partner')
    nu_fs = partner.omega_fs / (2 * math.pi)
    coupling = CONSTANTS.mu_b_hz_per_gauss * (partner.g_l - partner.g_s)
    return -coupling ** 2 / (2 * nu_fs)


def residual_quadratic(level: LevelSpec, field_gauss: float) -> float:
    """Rigid fine-structure shift of the level at B, in Hz"""
    return residual_quadratic_coefficient(level) * field_gauss ** 2
