import math
import unittest

import numpy as np

from szx.errors import NotPure, TypeMismatch, UnknownName
from szx.prop import HBox, Spider, discard, empty, generator, green_spider, identity, red_spider, star
from szx.semantics import (Tolerance, build_gate, build_state, direct_arachnid_matrix, equal_semantics,
                           interp_cpm, interp_pure, is_completely_positive, outcome_probability)

SQ = 1 / math.sqrt(2)


class TestGates(unittest.TestCase):

    def assertMatrix(self, diagram, expected):
        np.testing.assert_allclose(interp_pure(diagram).value(), expected, atol=1e-12)

    def test_hadamard(self):
        self.assertMatrix(build_gate('H'), [[SQ, SQ], [SQ, -SQ]])

    def test_pauli(self):
        self.assertMatrix(build_gate('Not'), [[0, 1], [1, 0]])
        self.assertMatrix(build_gate('Z'), [[1, 0], [0, -1]])

    def test_cnot_controls_on_the_first_qubit(self):
        self.assertMatrix(build_gate('CNot'), np.eye(4)[[0, 1, 3, 2]])

    def test_cz(self):
        self.assertMatrix(build_gate('CZ'), np.diag([1, 1, 1, -1]))

    def test_toffoli(self):
        self.assertMatrix(build_gate('Toffoli'), np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]])

    def test_states(self):
        self.assertMatrix(build_state('0'), [[1], [0]])
        self.assertMatrix(build_state('1'), [[0], [1]])
        self.assertMatrix(build_state('+'), [[SQ], [SQ]])
        self.assertMatrix(build_state('-'), [[SQ], [-SQ]])

    def test_unknown_gate(self):
        with self.assertRaises(UnknownName):
            build_gate('Fredkin')


class TestScalars(unittest.TestCase):

    def test_empty_diagram_is_one(self):
        np.testing.assert_allclose(interp_pure(empty()).value(), [[1]])

    def test_star(self):
        self.assertAlmostEqual(interp_pure(star()).value()[0, 0].real, 2 ** -0.25)
        self.assertAlmostEqual(interp_cpm(star()).value()[0, 0].real, SQ)

    def test_quarter_power_exponent(self):
        value = interp_pure(green_spider(1, 0, 1)).value()
        np.testing.assert_allclose(value.reshape(-1), [2 ** -0.25, 2 ** -0.25], atol=1e-12)


class TestMixedMaps(unittest.TestCase):

    def test_discard_is_not_pure(self):
        with self.assertRaises(NotPure):
            interp_pure(discard(1))

    def test_discard_is_the_trace(self):
        np.testing.assert_allclose(interp_cpm(discard(1)).value(), [[1, 0, 0, 1]])

    def test_discarding_half_a_bell_pair(self):
        product = build_state('0') @ build_state('+')
        state = (build_state('+') @ build_state('0')) >> build_gate('CNot')
        rho = interp_cpm(state >> (identity([1]) @ discard(1))).density()
        np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)
        self.assertFalse(equal_semantics(product >> (identity([1]) @ discard(1)),
                                         state >> (identity([1]) @ discard(1))))

    def test_superoperators_are_completely_positive(self):
        self.assertTrue(is_completely_positive(interp_cpm(discard(1)), 1))
        self.assertTrue(is_completely_positive(interp_cpm(build_gate('H')), 1))


class TestEquality(unittest.TestCase):

    def test_global_phase_is_ignored(self):
        flipped = build_state('1') >> build_gate('Z')
        self.assertTrue(equal_semantics(flipped, build_state('1')))

    def test_relative_phase_is_not_ignored(self):
        self.assertFalse(equal_semantics(build_state('+') >> build_gate('Z'), build_state('+')))

    def test_different_basis_states(self):
        self.assertFalse(equal_semantics(build_state('0'), build_state('1')))

    def test_boundaries_must_match(self):
        with self.assertRaises(TypeMismatch):
            equal_semantics(identity([1]), identity([2]))

    def test_tolerance_must_be_positive(self):
        with self.assertRaises(ValueError):
            Tolerance(0, 1e-9)


class TestArachnids(unittest.TestCase):

    def test_stripped_interpretation_matches_closed_form(self):
        generators = [
            Spider('green', 2, 1, 2, (0.3, 1.9)),
            Spider('red', 2, 2, 1, (math.pi, 0.5)),
            Spider('green', 3, 0, 1, (0.0, math.pi, 0.25)),
            HBox(2, 1, 1, (-1, 0.5j)),
            HBox(1, 2, 1, (3,)),
        ]
        for g in generators:
            with self.subTest(g=g):
                direct = direct_arachnid_matrix(g)
                contracted = interp_pure(generator(g))
                np.testing.assert_allclose(contracted.value(), direct.value(), atol=1e-12)

    def test_red_spider_copies_in_the_x_basis(self):
        np.testing.assert_allclose(interp_pure(red_spider(1, 0, 1) @ star()).value(), [[1], [0]], atol=1e-12)


class TestMeasurement(unittest.TestCase):

    def test_outcome_probability(self):
        self.assertAlmostEqual(outcome_probability(build_state('+'), '0'), 0.5)
        self.assertAlmostEqual(outcome_probability(build_state('1'), [1]), 1.0)

    def test_outcome_probability_width_check(self):
        with self.assertRaises(TypeMismatch):
            outcome_probability(build_state('0'), '01')


if __name__ == '__main__':
    unittest.main()
