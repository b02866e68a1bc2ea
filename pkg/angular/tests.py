import math
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st
from sympy import Rational
from sympy.physics import wigner as oracle

from config.exceptions import QuantumNumberError

from .symbols import (
    AngularMomentum, clebsch_gordan, coupled_basis, parity_sign, triangle,
    wigner3j, wigner6j,
)


def half(twice):
    return Rational(twice, 2)


def oracle_3j(j1, j2, j3, m1, m2, m3):
    return float(oracle.wigner_3j(*(half(x) for x in (j1, j2, j3, m1, m2, m3))))


def oracle_6j(*args):
    return float(oracle.wigner_6j(*(half(x) for x in args)))


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * max(abs(a), abs(b)) + 1e-15


@st.composite
def valid_3j(draw, max_twice=12):
    j1 = draw(st.integers(0, max_twice))
    j2 = draw(st.integers(0, max_twice))
    j3 = draw(st.sampled_from([j for j in range(abs(j1 - j2), j1 + j2 + 1, 2) if j <= max_twice]))
    m1 = draw(st.sampled_from(list(range(-j1, j1 + 1, 2))))
    m2 = draw(st.sampled_from([m for m in range(-j2, j2 + 1, 2) if abs(m1 + m) <= j3]))
    return j1, j2, j3, m1, m2, -m1 - m2


@st.composite
def valid_6j(draw, max_twice=12):
    j1 = draw(st.integers(0, max_twice))
    j2 = draw(st.integers(0, max_twice))
    j3 = draw(st.sampled_from(list(range(abs(j1 - j2), j1 + j2 + 1, 2))))
    j5 = draw(st.integers(0, max_twice))
    j6 = draw(st.sampled_from(list(range(abs(j1 - j5), j1 + j5 + 1, 2))))
    candidates = [
        j4 for j4 in range(0, max_twice + 1)
        if triangle(j4, j2, j6) and triangle(j4, j5, j3)
    ]
    j4 = draw(st.sampled_from(candidates)) if candidates else None
    return j1, j2, j3, j4, j5, j6


class AngularMomentumTests(SimpleTestCase):

    def test_from_value_accepts_half_integers(self):
        self.assertEqual(AngularMomentum.from_value('7/2').twice, 7)
        self.assertEqual(AngularMomentum.from_value(3).twice, 6)
        self.assertEqual(AngularMomentum.from_value(Fraction(5, 2)).value, Fraction(5, 2))
        self.assertEqual(str(AngularMomentum(7)), '7/2')
        self.assertEqual(str(AngularMomentum(14)), '7')

    def test_rejects_negative_and_non_half_integer(self):
        with self.assertRaises(QuantumNumberError):
            AngularMomentum(-1)
        with self.assertRaises(QuantumNumberError):
            AngularMomentum.from_value('1/3')

    def test_projections_and_couplings(self):
        j = AngularMomentum(3)
        self.assertEqual(list(j.projections()), [-3, -1, 1, 3])
        self.assertTrue(j.allows(-1))
        self.assertFalse(j.allows(2))
        self.assertFalse(j.allows(5))
        resultants = AngularMomentum(14).couplings(AngularMomentum(2))
        self.assertEqual([f.twice for f in resultants], [12, 14, 16])
        self.assertEqual(list(coupled_basis(14, 2, 14)), [14, 16])

    def test_parity_sign(self):
        self.assertEqual(parity_sign(0), 1)
        self.assertEqual(parity_sign(2), -1)
        self.assertEqual(parity_sign(-4), 1)
        with self.assertRaises(QuantumNumberError):
            parity_sign(1)


class Wigner3jTests(SimpleTestCase):

    def test_closed_form_j2_zero(self):
        self.assertAlmostEqual(wigner3j(1, 0, 1, 1, 0, -1), -1 / math.sqrt(2), places=14)
        self.assertTrue(close(wigner3j(1, 0, 1, 1, 0, -1), oracle_3j(1, 0, 1, 1, 0, -1)))

    def test_triangle_violation_is_zero(self):
        self.assertEqual(wigner3j(2, 2, 6, 0, 0, 0), 0.0)

    def test_projection_sum_violation_is_zero(self):
        self.assertEqual(wigner3j(2, 2, 2, 2, 0, 0), 0.0)

    def test_projection_out_of_range_is_zero(self):
        self.assertEqual(wigner3j(2, 2, 2, 4, -2, -2), 0.0)

    def test_racah_sum_matches_oracle(self):
        self.assertTrue(close(wigner3j(2, 4, 2, -2, 0, 2), oracle_3j(2, 4, 2, -2, 0, 2)))

    def test_rejects_negative_and_parity_mix(self):
        with self.assertRaises(QuantumNumberError):
            wigner3j(-2, 2, 2, 0, 0, 0)
        with self.assertRaises(QuantumNumberError):
            wigner3j(1, 2, 1, 0, 0, 0)

    def test_accepts_angular_momentum_arguments(self):
        j = AngularMomentum(2)
        self.assertEqual(wigner3j(j, j, j, 0, 0, 0), wigner3j(2, 2, 2, 0, 0, 0))

    def test_orthogonality_exhaustive(self):
        for j1 in range(0, 9):
            for j2 in range(0, 9):
                for j3 in range(abs(j1 - j2), j1 + j2 + 1, 2):
                    for m3 in range(-j3, j3 + 1, 2):
                        total = 0.0
                        for m1 in range(-j1, j1 + 1, 2):
                            m2 = -m1 - m3
                            if abs(m2) <= j2:
                                total += (j3 + 1) * wigner3j(j1, j2, j3, m1, m2, m3) ** 2
                        self.assertAlmostEqual(total, 1.0, places=12, msg=(j1, j2, j3, m3))

    def test_oracle_exhaustive_small(self):
        for j1 in range(0, 7):
            for j2 in range(0, 7):
                for j3 in range(abs(j1 - j2), min(j1 + j2, 6) + 1, 2):
                    for m1 in range(-j1, j1 + 1, 2):
                        for m2 in range(-j2, j2 + 1, 2):
                            m3 = -m1 - m2
                            if abs(m3) > j3:
                                continue
                            args = (j1, j2, j3, m1, m2, m3)
                            self.assertTrue(close(wigner3j(*args), oracle_3j(*args)), args)

    @settings(deadline=None, max_examples=300)
    @given(valid_3j())
    def test_oracle_sampled(self, args):
        self.assertTrue(close(wigner3j(*args), oracle_3j(*args)), args)

    @settings(deadline=None, max_examples=200)
    @given(valid_3j())
    def test_column_permutation_symmetry(self, args):
        j1, j2, j3, m1, m2, m3 = args
        value = wigner3j(*args)
        odd = parity_sign(j1 + j2 + j3)
        self.assertTrue(close(wigner3j(j2, j3, j1, m2, m3, m1), value))
        self.assertTrue(close(wigner3j(j3, j1, j2, m3, m1, m2), value))
        self.assertTrue(close(wigner3j(j2, j1, j3, m2, m1, m3), odd * value))
        self.assertTrue(close(wigner3j(j1, j3, j2, m1, m3, m2), odd * value))
        self.assertTrue(close(wigner3j(j1, j2, j3, -m1, -m2, -m3), odd * value))


class Wigner6jTests(SimpleTestCase):

    def test_all_ones(self):
        self.assertAlmostEqual(wigner6j(2, 2, 2, 2, 2, 2), 1 / 6, places=14)

    def test_triad_violation_is_zero(self):
        self.assertEqual(wigner6j(2, 4, 6, 8, 10, 20), 0.0)

    def test_hyperfine_quadrupole_symbol(self):
        # {F 2 F; J I J} for F = 8, I = 7, J = 1
        value = wigner6j(16, 4, 16, 2, 14, 2)
        self.assertNotEqual(value, 0.0)
        self.assertTrue(close(value, oracle_6j(16, 4, 16, 2, 14, 2)))

    def test_rejects_negative(self):
        with self.assertRaises(QuantumNumberError):
            wigner6j(2, 2, 2, 2, 2, -2)

    def test_oracle_exhaustive_small(self):
        rng = range(0, 5)
        for j1 in rng:
            for j2 in rng:
                for j3 in rng:
                    for j4 in rng:
                        for j5 in rng:
                            for j6 in rng:
                                args = (j1, j2, j3, j4, j5, j6)
                                triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
                                if not all(triangle(*t) for t in triads):
                                    self.assertEqual(wigner6j(*args), 0.0)
                                    continue
                                self.assertTrue(close(wigner6j(*args), oracle_6j(*args)), args)

    @settings(deadline=None, max_examples=200)
    @given(valid_6j())
    def test_oracle_sampled(self, args):
        assume(args[3] is not None)
        self.assertTrue(close(wigner6j(*args), oracle_6j(*args)), args)

    @settings(deadline=None, max_examples=200)
    @given(valid_6j())
    def test_tetrahedral_symmetry(self, args):
        assume(args[3] is not None)
        j1, j2, j3, j4, j5, j6 = args
        value = wigner6j(*args)
        self.assertTrue(close(wigner6j(j2, j1, j3, j5, j4, j6), value))
        self.assertTrue(close(wigner6j(j3, j2, j1, j6, j5, j4), value))
        self.assertTrue(close(wigner6j(j2, j3, j1, j5, j6, j4), value))
        self.assertTrue(close(wigner6j(j4, j5, j3, j1, j2, j6), value))
        self.assertTrue(close(wigner6j(j1, j5, j6, j4, j2, j3), value))


class ClebschGordanTests(SimpleTestCase):

    def test_singlet(self):
        self.assertAlmostEqual(clebsch_gordan(1, 1, 0, 1, -1, 0), 1 / math.sqrt(2), places=14)

    def test_selection_failure_is_zero(self):
        self.assertEqual(clebsch_gordan(2, 2, 2, 2, 0, 0), 0.0)
        self.assertEqual(clebsch_gordan(2, 2, 6, 0, 0, 0), 0.0)

    def test_invalid_quantum_numbers_raise(self):
        with self.assertRaises(QuantumNumberError):
            clebsch_gordan(2, 1, 2, 0, 0, 0)

    def test_stretched_state(self):
        self.assertAlmostEqual(clebsch_gordan(14, 2, 16, 14, 2, 16), 1.0, places=14)

    def test_matches_oracle_for_lu176(self):
        for two_f in (12, 14, 16):
            for two_mj in (-2, 0, 2):
                expected = float(oracle.clebsch_gordan(7, 1, half(two_f), half(-two_mj), half(two_mj), 0))
                self.assertTrue(close(clebsch_gordan(14, 2, two_f, -two_mj, two_mj, 0), expected))

    def test_completeness_exhaustive(self):
        for two_i in range(0, 9):
            for two_j in range(0, 9):
                for m_i in range(-two_i, two_i + 1, 2):
                    for m_j in range(-two_j, two_j + 1, 2):
                        total = sum(
                            clebsch_gordan(two_i, two_j, two_f, m_i, m_j, m_i + m_j) ** 2
                            for two_f in range(abs(two_i - two_j), two_i + two_j + 1, 2)
                        )
                        self.assertAlmostEqual(total, 1.0, places=12)

    @settings(deadline=None, max_examples=150)
    @given(st.integers(0, 16), st.integers(0, 16), st.data())
    def test_completeness_sampled(self, two_i, two_j, data):
        m_i = data.draw(st.sampled_from(list(range(-two_i, two_i + 1, 2))))
        m_j = data.draw(st.sampled_from(list(range(-two_j, two_j + 1, 2))))
        total = sum(
            clebsch_gordan(two_i, two_j, two_f, m_i, m_j, m_i + m_j) ** 2
            for two_f in range(abs(two_i - two_j), two_i + two_j + 1, 2)
        )
        self.assertAlmostEqual(total, 1.0, places=12)
