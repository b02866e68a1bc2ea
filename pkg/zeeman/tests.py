import numpy as np
from django.test import SimpleTestCase

from angular.symbols import clebsch_gordan
from config.exceptions import PreconditionError, QuantumNumberError
from species.constants import CONSTANTS
from species.hyperfine import g_factor, hyperfine_energy
from species.levels import LevelSpec
from species.loader import builtin_species

from .hamiltonian import (
    build_block, eigenstates, quadratic_coefficient, second_order_coefficients,
    state_energy, state_slope, zeeman_operator,
)
from .transitions import StateRef, Transition, d2nu_dB2, dnu_dB, transition_frequency

MU = CONSTANTS.mu_b_hz_per_gauss


def lu176(label='3D1'):
    return builtin_species().level(f'lu176/{label}')


def lu175(label='3D1'):
    return builtin_species().level(f'lu175/{label}')


def toy_level(two_i, two_j, g_j=1.0, g_i=0.0, a_hf=0.0, label='X'):
    return LevelSpec(key='toy', label=label, nuclear_spin=two_i, j=two_j, g_j=g_j, g_i=g_i, a_hf=a_hf)


def nuclear_slope(level, two_f, two_mf):
    ff, ii, jj = (x * (x + 2) / 4 for x in (two_f, level.two_i, level.two_j))
    return level.g_i * (ff + ii - jj) / (2 * ff) * two_mf / 2 * MU


def uncoupled_operator(level, two_mf):
    """Z rebuilt as U diag(gJ mJ + gI mI) U^T over the |mI, mJ> basis"""
    basis = level.block_basis(two_mf)
    pairs = [
        (two_mf - mj, mj) for mj in range(-level.two_j, level.two_j + 1, 2)
        if abs(two_mf - mj) <= level.two_i
    ]
    u = np.array([
        [clebsch_gordan(level.two_i, level.two_j, f, mi, mj, two_mf) for mi, mj in pairs]
        for f in basis
    ])
    diagonal = np.diag([(level.g_j * mj + level.g_i * mi) / 2 * MU for mi, mj in pairs])
    return u @ diagonal @ u.T


class BuildBlockTests(SimpleTestCase):

    def test_zero_field_is_diagonal(self):
        level = lu176()
        block = build_block(level, 0, 0.0)
        self.assertEqual(block.basis_f, (12, 14, 16))
        np.testing.assert_array_equal(block.matrix, np.diag(np.diag(block.matrix)))
        states = eigenstates(block)
        for state, two_f in zip(states, (12, 14, 16)):
            self.assertEqual(state.two_f, two_f)
            self.assertEqual(state.energy, hyperfine_energy(level, two_f))
            self.assertEqual(np.count_nonzero(state.amplitudes), 1)

    def test_symmetric(self):
        for level in (lu176(), lu175()):
            for two_mf in range(-level.two_i, level.two_i + 1, 2):
                matrix = build_block(level, two_mf, 4750.0).matrix
                np.testing.assert_allclose(matrix, matrix.T, rtol=1e-12, atol=0)

    def test_dimension(self):
        level = lu176()
        self.assertEqual(build_block(level, 0, 1.0).dimension, 3)
        self.assertEqual(build_block(level, 12, 1.0).dimension, 3)
        self.assertEqual(build_block(level, 14, 1.0).dimension, 2)
        self.assertEqual(build_block(level, -16, 1.0).dimension, 1)

    def test_invalid_projection(self):
        with self.assertRaises(QuantumNumberError):
            build_block(lu176(), 1, 1.0)
        with self.assertRaises(QuantumNumberError):
            build_block(lu176(), 18, 1.0)

    def test_negative_field(self):
        with self.assertRaises(PreconditionError):
            build_block(lu176(), 0, -1.0)

    def test_operator_matches_uncoupled_basis(self):
        for level in (lu176(), lu175(), builtin_species().level('sr87/4D5/2')):
            for two_mf in range(-(level.two_i + level.two_j), level.two_i + level.two_j + 1, 2):
                np.testing.assert_allclose(
                    zeeman_operator(level, two_mf), uncoupled_operator(level, two_mf),
                    rtol=0, atol=1e-9 * MU,
                )

    def test_operator_couples_neighbouring_f_only(self):
        operator = zeeman_operator(lu176(), 0)
        self.assertEqual(operator[0, 2], 0.0)
        self.assertNotEqual(operator[0, 1], 0.0)

    def test_diagonal_is_lande(self):
        level = lu175()
        operator = zeeman_operator(level, 3)
        for index, two_f in enumerate((5, 7, 9)):
            self.assertAlmostEqual(operator[index, index], g_factor(level, two_f) * 1.5 * MU, places=6)

    def test_operator_cache_is_per_level(self):
        level = lu175()
        nuclear_free = level.with_constants(g_i=0.0)
        full = zeeman_operator(level, 3)
        electronic = zeeman_operator(nuclear_free, 3)
        self.assertNotEqual(full[1, 1], electronic[1, 1])
        self.assertAlmostEqual(full[1, 1] - electronic[1, 1], nuclear_slope(level, 7, 3), delta=1e-6)

    def test_mean_g_factor_is_nuclear(self):
        for level in (lu176(), lu175()):
            for two_mf in range(-(level.two_i - level.two_j), level.two_i - level.two_j + 1, 2):
                diagonal_mean = np.mean(np.diag(zeeman_operator(level, two_mf)))
                expected = two_mf / 2 * level.g_i * MU
                self.assertLessEqual(abs(diagonal_mean - expected), 1e-12 * MU)

    def test_lu175_low_field_slopes(self):
        level = lu175()
        for two_f, expected in ((5, -300e3), (7, 66.7e3), (9, 233.3e3)):
            electronic = state_slope(level.with_constants(g_i=0.0), two_f, 3, 1e-3)
            self.assertLess(abs(electronic - expected), 0.005 * abs(expected))
            slope = state_slope(level, two_f, 3, 1e-3)
            self.assertAlmostEqual(slope - electronic, nuclear_slope(level, two_f, 3), delta=1.0)


class TraceTheoremTests(SimpleTestCase):

    def test_mean_eigenvalue_shift_is_linear_in_field(self):
        fields = np.logspace(-3, 4, 50)
        for level in (lu176(), lu175()):
            mean_zero_field = np.mean([hyperfine_energy(level, f) for f in level.f_values()])
            for two_mf in range(-(level.two_i - level.two_j), level.two_i - level.two_j + 1, 2):
                for b in fields:
                    block = build_block(level, two_mf, b)
                    energies = [state.energy for state in eigenstates(block)]
                    measured = np.mean(energies) - mean_zero_field
                    expected = two_mf / 2 * level.g_i * MU * b
                    scale = np.max(np.abs(block.matrix))
                    self.assertLessEqual(abs(measured - expected), 1e-9 * scale)

    def test_fails_outside_complete_blocks(self):
        level = lu176()
        block = build_block(level, 14, 1000.0)
        energies = [state.energy for state in eigenstates(block)]
        mean_zero_field = np.mean([hyperfine_energy(level, f) for f in block.basis_f])
        self.assertGreater(abs(np.mean(energies) - mean_zero_field - 7 * level.g_i * MU * 1000.0), 1.0)


class EigenstateTests(SimpleTestCase):

    def test_single_state_block(self):
        level = lu176()
        block = build_block(level, 16, 10.0)
        (state,) = eigenstates(block)
        self.assertEqual(state.energy, block.matrix[0, 0])
        self.assertEqual(state.two_f, 16)

    def test_trace_and_normalization(self):
        block = build_block(lu175(), 3, 4750.0)
        states = eigenstates(block)
        self.assertAlmostEqual(
            sum(s.energy for s in states) / np.trace(block.matrix), 1.0, places=9,
        )
        for state in states:
            self.assertAlmostEqual(float(np.linalg.norm(state.amplitudes)), 1.0, places=12)
            self.assertGreater(state.amplitudes[block.index_of(state.two_f)], 0)

    def test_labels_are_unique(self):
        for b in (0.0, 100.0, 4750.0, 1e4):
            labels = [s.two_f for s in eigenstates(build_block(lu175(), 3, b))]
            self.assertEqual(labels, [5, 7, 9])

    def test_energies_continuous_in_field(self):
        level = lu175()
        for two_f in (5, 7, 9):
            previous = state_energy(level, two_f, 3, 0.0)
            for b in range(1, 51):
                current = state_energy(level, two_f, 3, float(b))
                bound = 10 * max(abs(state_slope(level, two_f, 3, b - 1.0)), abs(state_slope(level, two_f, 3, float(b))))
                self.assertLess(abs(current - previous), bound)
                previous = current


class QuadraticCoefficientTests(SimpleTestCase):

    def test_lu176_m0_coefficients(self):
        level = lu176()
        coefficients = [quadratic_coefficient(level, f, 0) for f in (12, 14, 16)]
        for measured, expected in zip(coefficients, (23.2, -1.5, -21.7)):
            self.assertLess(abs(measured - expected), 0.1 * abs(expected))
        self.assertLess(abs(sum(coefficients)), 1e-3)

    def test_perturbative_coefficients_match_numeric(self):
        level = lu176()
        perturbative = second_order_coefficients(level, 0)
        for two_f in (12, 14, 16):
            self.assertAlmostEqual(
                perturbative[two_f], quadratic_coefficient(level, two_f, 0), delta=1e-3,
            )

    def test_perturbation_theory_matches_eigenvalues(self):
        level = lu176()
        coefficients = second_order_coefficients(level, 0)
        for two_f in (12, 14, 16):
            expected = hyperfine_energy(level, two_f) + coefficients[two_f] * 100.0
            self.assertAlmostEqual(state_energy(level, two_f, 0, 10.0), expected, delta=0.05)

    def test_perturbation_theory_with_linear_terms(self):
        level = lu175()
        coefficients = second_order_coefficients(level, 3)
        operator = zeeman_operator(level, 3)
        for index, two_f in enumerate((5, 7, 9)):
            expected = hyperfine_energy(level, two_f) + operator[index, index] + coefficients[two_f]
            self.assertAlmostEqual(state_energy(level, two_f, 3, 1.0), expected, delta=0.05)


class TransitionTests(SimpleTestCase):

    def test_zero_field_is_hyperfine_difference(self):
        ground = StateRef(lu176('1S0'), 14, 0)
        for two_f in (12, 14, 16):
            excited = StateRef(lu176(), two_f, 0)
            self.assertEqual(
                transition_frequency(ground, excited, 0.0),
                hyperfine_energy(lu176(), two_f),
            )

    def test_synthesized_forbidden_components(self):
        excited = StateRef(lu176(), 14, 0)
        plus = Transition(StateRef(lu176('1S0'), 14, 2), excited)
        minus = Transition(StateRef(lu176('1S0'), 14, -2), excited)
        nuclear = -lu176().g_i * MU
        self.assertAlmostEqual(nuclear, 344.3, delta=0.1)
        self.assertLess(abs(plus.slope(1e-4) - nuclear), 0.02 * nuclear)
        self.assertLess(abs(minus.slope(1e-4) + nuclear), 0.02 * nuclear)
        self.assertLess(abs((plus.slope(1e-4) + minus.slope(1e-4)) / 2), 1e-3)

    def test_m0_components_below_five_hertz_per_gauss(self):
        ground = StateRef(lu176('1S0'), 14, 0)
        for two_f in (12, 14, 16):
            slope = Transition(ground, StateRef(lu176(), two_f, 0)).slope(0.1)
            self.assertLess(abs(slope), 5.0)

    def test_linear_only_level(self):
        excited = StateRef(toy_level(0, 2, g_j=1.5, label='P'), 2, 2)
        ground = StateRef(toy_level(0, 0, label='S'), 0, 0)
        derivative = dnu_dB(Transition(ground, excited), 5.0)
        self.assertAlmostEqual(derivative.value / (1.5 * MU), 1.0, places=9)
        self.assertAlmostEqual(derivative.richardson / (1.5 * MU), 1.0, places=9)
        self.assertTrue(derivative.resolved)

    def test_finite_difference_matches_hellmann_feynman(self):
        transition = Transition(StateRef(lu175('1S0'), 7, 5), StateRef(lu175(), 7, 3))
        derivative = dnu_dB(transition, 100.0)
        self.assertLess(abs(derivative.value - transition.slope(100.0)), 1e-3 * abs(transition.slope(100.0)))
        self.assertLess(derivative.error, 1e-3 * abs(derivative.value))

    def test_step_must_not_cross_zero_field(self):
        transition = Transition(StateRef(lu176('1S0'), 14, 0), StateRef(lu176(), 14, 0))
        with self.assertRaises(PreconditionError):
            dnu_dB(transition, 0.5, step=1.0)

    def test_unresolved_step_is_reported(self):
        level = toy_level(0, 0, label='S')
        transition = Transition(StateRef(level, 0, 0), StateRef(level, 0, 0))
        self.assertFalse(dnu_dB(transition, 1.0).resolved)

    def test_curvature(self):
        level = lu176()
        transition = Transition(StateRef(lu176('1S0'), 14, 0), StateRef(level, 12, 0))
        curvature = d2nu_dB2(transition, 10.0, step=1.0)
        self.assertAlmostEqual(curvature / (2 * quadratic_coefficient(level, 12, 0)), 1.0, places=3)

    def test_states_must_share_nuclear_g_factor(self):
        with self.assertRaises(PreconditionError):
            Transition(StateRef(lu176('1S0'), 14, 0), StateRef(lu175(), 7, 1))

    def test_projection_outside_f(self):
        with self.assertRaises(QuantumNumberError):
            StateRef(lu176(), 12, 14)
