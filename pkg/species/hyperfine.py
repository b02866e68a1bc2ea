"""
Zero-field hyperfine structure of a level: magnetic-dipole (A) plus
electric-quadrupole (B) Casimir form, and the two-term Landé g_F.

The Casimir form is centroid-referenced: sum_F (2F+1) E_F = 0.
"""

from fractions import Fraction

from .levels import LevelSpec


def casimir(level: LevelSpec, two_f: int) -> Fraction:
    """K = F(F+1) - I(I+1) - J(J+1)"""
    i, j = level.two_i, level.two_j
    return Fraction(two_f * (two_f + 2) - i * (i + 2) - j * (j + 2), 4)


def has_quadrupole_hyperfine(level: LevelSpec) -> bool:
    return level.two_i >= 2 and level.two_j >= 2


def hyperfine_energy(level: LevelSpec, two_f: int) -> float:
    """
    E_F in Hz for the level's A_hf and B_hf.

    Raises:
        QuantumNumberError: F outside |I-J|..I+J
    """
    level.check_f(two_f)
    k = casimir(level, two_f)
    energy = level.a_hf * float(k / 2)
    if has_quadrupole_hyperfine(level) and level.b_hf:
        i, j = level.two_i, level.two_j
        ii = Fraction(i * (i + 2), 4)
        jj = Fraction(j * (j + 2), 4)
        numerator = Fraction(3, 2) * k * (k + 1) - 2 * ii * jj
        denominator = i * (i - 1) * j * (j - 1)
        energy += level.b_hf * float(numerator / denominator)
    return energy


def hyperfine_centroid(level: LevelSpec) -> float:
    """Weighted mean sum (2F+1) E_F / sum (2F+1)"""
    weights = [(two_f + 1, hyperfine_energy(level, two_f)) for two_f in level.f_values()]
    return sum(w * e for w, e in weights) / sum(w for w, _ in weights)


def g_factor(level: LevelSpec, two_f: int) -> float:
    """Two-term Landé g_F; zero for F = 0"""
    level.check_f(two_f)
    if two_f == 0:
        return 0.0
    ff = Fraction(two_f * (two_f + 2), 4)
    ii = Fraction(level.two_i * (level.two_i + 2), 4)
    jj = Fraction(level.two_j * (level.two_j + 2), 4)
    electronic = (ff + jj - ii) / (2 * ff)
    nuclear = (ff + ii - jj) / (2 * ff)
    return level.g_j * float(electronic) + level.g_i * float(nuclear)
