import itertools
import unittest

import numpy as np

from szx.errors import NotBoolean, TypeMismatch
from szx.gf2 import BoolSemiringMatrix
from szx.oracles import (BooleanFunction, basis_state, diagonal_from_oracle, diagonal_oracle,
                         function_arrow, function_from_oracle, graphical_promise_holds, oracle_matrix,
                         quantum_oracle, red_matrix_arrow, yellow_matrix_arrow)
from szx.prop import chain, identity
from szx.semantics import build_gate, equal_semantics, interp_pure


def all_functions(n, m):
    for table in itertools.product(range(2 ** m), repeat=2 ** n):
        yield BooleanFunction(n, m, table)


class TestBooleanFunction(unittest.TestCase):

    def test_table_length_is_checked(self):
        with self.assertRaises(TypeMismatch):
            BooleanFunction(2, 1, (0, 1, 1))

    def test_values_must_fit(self):
        with self.assertRaises(TypeMismatch):
            BooleanFunction(1, 1, (0, 2))

    def test_linear(self):
        self.assertEqual(BooleanFunction.linear('101').table, (0, 1, 0, 1, 1, 0, 1, 0))
        self.assertEqual(BooleanFunction.linear(5, 3), BooleanFunction.linear('101'))

    def test_point_and_and_gate(self):
        self.assertEqual(BooleanFunction.point(2, 2).table, (0, 0, 1, 0))
        self.assertEqual(BooleanFunction.and_gate(2), BooleanFunction.point(2, 3))

    def test_predicates(self):
        self.assertTrue(BooleanFunction(2, 1, (0, 1, 1, 0)).is_balanced())
        self.assertFalse(BooleanFunction(2, 1, (0, 1, 1, 1)).is_balanced())
        self.assertTrue(BooleanFunction.constant(3, 1).is_constant())
        self.assertTrue(BooleanFunction.identity(2).is_injective())
        self.assertFalse(BooleanFunction(2, 2, (0, 1, 1, 3)).is_injective())

    def test_from_matrix(self):
        f = BooleanFunction.from_matrix([[1, 1]])
        self.assertEqual(f.table, (0, 1, 1, 0))


class TestArrows(unittest.TestCase):

    def test_function_arrow_maps_basis_states(self):
        f = BooleanFunction(2, 2, (1, 3, 0, 2))
        for x in range(4):
            with self.subTest(x=x):
                self.assertTrue(equal_semantics(basis_state(2, x) >> function_arrow(f), basis_state(2, f(x))))

    def test_red_matrix_arrow_is_parity(self):
        f = BooleanFunction.linear('11')
        self.assertTrue(equal_semantics(red_matrix_arrow([[1, 1]]), function_arrow(f)))

    def test_yellow_all_ones_arrow_is_and(self):
        self.assertTrue(equal_semantics(yellow_matrix_arrow(rows=1, cols=2),
                                        function_arrow(BooleanFunction.and_gate(2))))

    def test_yellow_arrow_from_semiring_matrix(self):
        a = BoolSemiringMatrix.from_lists([[1, 1, 0], [0, 0, 0], [1, 0, 1]])
        arrow = yellow_matrix_arrow(a)
        for x in range(8):
            with self.subTest(x=x):
                self.assertTrue(equal_semantics(basis_state(3, x) >> arrow, basis_state(3, a.apply(x))))


class TestOracles(unittest.TestCase):

    def test_oracle_matrix_exact(self):
        for f in all_functions(1, 2):
            with self.subTest(table=f.table):
                np.testing.assert_allclose(interp_pure(quantum_oracle(f)).value(), oracle_matrix(f), atol=1e-12)

    def test_oracle_is_an_involution(self):
        f = BooleanFunction(2, 2, (1, 3, 0, 2))
        u = quantum_oracle(f)
        self.assertTrue(equal_semantics(chain(u, u), identity([2, 2])))

    def test_cnot_is_the_identity_oracle(self):
        self.assertTrue(equal_semantics(quantum_oracle(BooleanFunction.identity(1)), build_gate('CNot')))

    def test_diagonal_oracle(self):
        f = BooleanFunction(2, 1, (0, 1, 1, 0))
        np.testing.assert_allclose(interp_pure(diagonal_oracle(f)).value(), np.diag([1, -1, -1, 1]), atol=1e-12)

    def test_diagonal_oracle_needs_one_output(self):
        with self.assertRaises(NotBoolean):
            diagonal_oracle(BooleanFunction.identity(2))

    def test_ancilla_constructions(self):
        for f in all_functions(2, 1):
            with self.subTest(table=f.table):
                self.assertTrue(equal_semantics(diagonal_from_oracle(f), diagonal_oracle(f)))
                self.assertTrue(equal_semantics(function_from_oracle(f), function_arrow(f)))


class TestGraphicalPromises(unittest.TestCase):

    def test_balanced_characterisation(self):
        for n, m in ((1, 1), (2, 1), (2, 2)):
            for f in all_functions(n, m):
                with self.subTest(table=f.table):
                    self.assertEqual(graphical_promise_holds(f, 'balanced'), f.is_balanced())

    def test_injective_characterisation(self):
        for n, m in ((1, 1), (2, 2)):
            for f in all_functions(n, m):
                with self.subTest(table=f.table):
                    self.assertEqual(graphical_promise_holds(f, 'injective'), f.is_injective())


if __name__ == '__main__':
    unittest.main()
