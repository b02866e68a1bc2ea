"""
Physical constants used for unit conversion.

Everything is expressed as a frequency (E/h in Hz); fields are in gauss.
"""

from dataclasses import dataclass

from scipy import constants as codata

GAUSS_PER_TESLA = 1.0e4


@dataclass(frozen=True)
class PhysicalConstants:
    h: float
    hbar: float
    e: float
    a0: float
    mu_b_hz_per_gauss: float

    @property
    def quad_hz_per_unit(self) -> float:
        """e·a0²/h: Hz per (V/m²)·(e·a0²)"""
        return self.e * self.a0 ** 2 / self.h

    @property
    def mu_b_hz_per_tesla(self) -> float:
        return self.mu_b_hz_per_gauss * GAUSS_PER_TESLA


CONSTANTS = PhysicalConstants(
    h=codata.h,
    hbar=codata.hbar,
    e=codata.e,
    a0=codata.physical_constants['Bohr radius'][0],
    # Fixed rather than taken from the installed CODATA table
    mu_b_hz_per_gauss=1.399624604e6,
)
