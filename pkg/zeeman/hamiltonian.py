"""
Per-mF Hamiltonian block in the coupled |F, mF> basis.

block(B) = diag(E_F) + B * Z, where Z is the field-independent Zeeman operator
mu_B (gJ Jz + gI Iz) / h in Hz/G. Its diagonal is the Landé g_F mF mu_B/h and
its only off-diagonal entries couple F and F ± 1, evaluated by expanding both
states over the uncoupled |mI, mJ> basis.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from django.conf import settings
from django.core.cache import cache

from angular.symbols import AngularMomentum, clebsch_gordan
from config.exceptions import PreconditionError, QuantumNumberError
from species.constants import CONSTANTS
from species.hyperfine import g_factor, hyperfine_energy
from species.levels import LevelSpec

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _coupled_element(level: LevelSpec, two_f_row: int, two_f_col: int, two_mf: int) -> float:
    """<F_row mF| gJ Jz + gI Iz |F_col mF> by expansion over mJ"""
    two_i, two_j = level.two_i, level.two_j
    total = 0.0
    for two_mj in range(-two_j, two_j + 1, 2):
        two_mi = two_mf - two_mj
        if abs(two_mi) > two_i:
            continue
        row = clebsch_gordan(two_i, two_j, two_f_row, two_mi, two_mj, two_mf)
        col = clebsch_gordan(two_i, two_j, two_f_col, two_mi, two_mj, two_mf)
        total += row * col * (level.g_j * two_mj + level.g_i * two_mi) / 2
    return total


def hyperfine_diagonal(level: LevelSpec, two_mf: int) -> np.ndarray:
    return np.array([hyperfine_energy(level, f) for f in level.block_basis(two_mf)])


def zeeman_operator(level: LevelSpec, two_mf: int) -> np.ndarray:
    """Field-independent Zeeman matrix Z of the mF block, in Hz/G"""
    cache_key = f'zeeman_op_{level.fingerprint}_{two_mf}'
    cached = cache.get(cache_key)
    if cached is not None:
        return _frozen(cached)

    basis = level.block_basis(two_mf)
    mu = CONSTANTS.mu_b_hz_per_gauss
    operator = np.zeros((len(basis), len(basis)))
    for row, two_f in enumerate(basis):
        operator[row, row] = g_factor(level, two_f) * two_mf / 2 * mu
        if row + 1 < len(basis):
            element = _coupled_element(level, basis[row + 1], two_f, two_mf) * mu
            operator[row, row + 1] = operator[row + 1, row] = element

    cache.set(cache_key, operator)
    return _frozen(operator)


@dataclass(frozen=True)
class ZeemanBlock:
    level: LevelSpec
    two_mf: int
    field_gauss: float
    matrix: np.ndarray = field(repr=False, compare=False)
    basis_f: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis_f)

    @property
    def operator(self) -> np.ndarray:
        return zeeman_operator(self.level, self.two_mf)

    def index_of(self, two_f: int) -> int:
        try:
            return self.basis_f.index(two_f)
        except ValueError:
            raise QuantumNumberError(
                f'F={AngularMomentum(two_f)} has no mF={AngularMomentum(abs(self.two_mf))} '
                f'state in {self.level.ref}'
            ) from None


@dataclass(frozen=True)
class DressedState:
    energy: float  # Hz
    two_f: int  # adiabatic zero-field label
    two_mf: int
    amplitudes: np.ndarray = field(repr=False, compare=False)

    @property
    def f_label(self) -> AngularMomentum:
        return AngularMomentum(self.two_f)

    def slope(self, operator: np.ndarray) -> float:
        """Hellmann–Feynman dE/dB = v^T Z v"""
        return float(self.amplitudes @ operator @ self.amplitudes)


def build_block(level: LevelSpec, two_mf: int, field_gauss: float) -> ZeemanBlock:
    """
    Hyperfine plus Zeeman block for one mF at field B (gauss).

    Raises:
        QuantumNumberError: invalid mF for the level
        PreconditionError: negative field
    """
    if field_gauss < 0:
        raise PreconditionError(f'Field must be non-negative, got {field_gauss} G')
    basis = level.block_basis(two_mf)
    matrix = np.diag(hyperfine_diagonal(level, two_mf)) + field_gauss * zeeman_operator(level, two_mf)
    return ZeemanBlock(
        level=level,
        two_mf=two_mf,
        field_gauss=float(field_gauss),
        matrix=_frozen(matrix),
        basis_f=basis,
    )


def _assign_labels(vectors: np.ndarray) -> List[int]:
    """Column k -> basis index, greedy on |overlap|; ties go to the lower-energy column"""
    n = vectors.shape[0]
    overlaps = np.abs(vectors)
    candidates = sorted(
        ((-overlaps[i, k], k, i) for i in range(n) for k in range(n)),
    )
    labels = [-1] * n
    taken = set()
    for _, k, i in candidates:
        if labels[k] < 0 and i not in taken:
            labels[k] = i
            taken.add(i)
    return labels


def eigenstates(block: ZeemanBlock) -> List[DressedState]:
    """
    Dressed states of a block, ordered like block.basis_f.

    Each eigenvector is labeled with the zero-field F it overlaps most; the
    amplitude on that F is made positive.
    """
    matrix = block.matrix
    off_diagonal = matrix - np.diag(np.diag(matrix))
    if not off_diagonal.any():
        energies = np.diag(matrix).copy()
        vectors = np.eye(block.dimension)
    else:
        energies, vectors = np.linalg.eigh(matrix)

    trace = float(np.trace(matrix))
    scale = max(float(np.max(np.abs(matrix))), 1.0)
    if abs(float(np.sum(energies)) - trace) > settings.HFAVG['THEOREM_TOLERANCE'] * scale * block.dimension:
        logger.warning(
            f'Eigenvalue sum {np.sum(energies)} differs from trace {trace} '
            f'for {block.level.ref} 2mF={block.two_mf} at {block.field_gauss} G'
        )

    labels = _assign_labels(vectors)
    states = []
    for k, index in enumerate(labels):
        vector = vectors[:, k].copy()
        if vector[index] < 0:
            vector = -vector
        states.append(DressedState(
            energy=float(energies[k]),
            two_f=block.basis_f[index],
            two_mf=block.two_mf,
            amplitudes=_frozen(vector),
        ))
    return sorted(states, key=lambda state: state.two_f)


def dressed_state(level: LevelSpec, two_f: int, two_mf: int, field_gauss: float) -> DressedState:
    block = build_block(level, two_mf, field_gauss)
    block.index_of(two_f)
    for state in eigenstates(block):
        if state.two_f == two_f:
            return state
    raise QuantumNumberError(f'No dressed state labeled F={AngularMomentum(two_f)} at {field_gauss} G')


def state_energy(level: LevelSpec, two_f: int, two_mf: int, field_gauss: float) -> float:
    return dressed_state(level, two_f, two_mf, field_gauss).energy


def state_slope(level: LevelSpec, two_f: int, two_mf: int, field_gauss: float) -> float:
    """dE/dB of a dressed state in Hz/G"""
    state = dressed_state(level, two_f, two_mf, field_gauss)
    return state.slope(zeeman_operator(level, two_mf))


def second_order_coefficients(level: LevelSpec, two_mf: int) -> Dict[int, float]:
    """Perturbative c_F in E_F(B) = E_F + Z_FF B + c_F B² + O(B³), Hz/G²"""
    basis = level.block_basis(two_mf)
    operator = zeeman_operator(level, two_mf)
    energies = hyperfine_diagonal(level, two_mf)
    coefficients = {}
    for n, two_f in enumerate(basis):
        total = 0.0
        for m in range(len(basis)):
            if m != n and operator[n, m]:
                total += operator[n, m] ** 2 / (energies[n] - energies[m])
        coefficients[two_f] = total
    return coefficients


def quadratic_coefficient(level: LevelSpec, two_f: int, two_mf: int, step: float = 1.0) -> float:
    """
    Numeric c in delta E = c B² from a central second difference.

    Uses E_mF(-B) = E_-mF(B), so only non-negative fields are evaluated.
    """
    e_zero = state_energy(level, two_f, two_mf, 0.0)
    e_plus = state_energy(level, two_f, two_mf, step)
    e_minus = state_energy(level, two_f, -two_mf, step)
    return (e_plus + e_minus - 2 * e_zero) / (2 * step ** 2)
