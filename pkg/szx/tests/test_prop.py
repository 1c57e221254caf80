import itertools
import math
import unittest

import numpy as np

from szx.errors import SizeMismatch, TypeMismatch
from szx.prop import (Diagram, Port, Spider, Swap, TypeList, Wire, cap, chain, compose, cup, gather,
                      generator, green_spider, h_box, hadamard, identity, inp, iterate, normalize_phase,
                      ones, outp, parallel, permute, red_spider, rewire, scalar, star, strip, swap,
                      tensor, thicken, transpose, unroll, validate)
from szx.rewrite import structurally_equal
from szx.semantics import build_gate, equal_semantics, interp_pure


def random_types(rng, size):
    """A random composition of ``size`` into at most three wires."""
    cuts = sorted(rng.choice(np.arange(1, size), size=min(size - 1, int(rng.integers(0, 3))), replace=False))
    bounds = [0, *cuts, size]
    return TypeList(tuple(int(b - a) for a, b in zip(bounds, bounds[1:])))


def random_wire_map(rng, width):
    choice = int(rng.integers(5 if width > 1 else 4))
    if choice == 0:
        return green_spider(width, 1, 1, rng.uniform(0, 2 * math.pi, width))
    if choice == 1:
        return red_spider(width, 1, 1, rng.uniform(0, 2 * math.pi, width))
    if choice == 2:
        return hadamard(width)
    if choice == 3:
        return h_box(width, 1, 1, rng.uniform(-1, 1, width) + 1j * rng.uniform(-1, 1, width))
    return chain(rewire([width], [1, width - 1]),
                 tensor(hadamard(1), green_spider(width - 1, 1, 1, rng.uniform(0, 2 * math.pi, width - 1))),
                 rewire([1, width - 1], [width]))


def random_layer(rng, types):
    layer = parallel(*[random_wire_map(rng, w) for w in types])
    size = types.size
    if size > 1 and rng.random() < 0.5:
        entangle = chain(rewire(types, ones(size)),
                         parallel(build_gate('CNot'), identity(ones(size - 2))),
                         rewire(ones(size), types))
        layer = compose(layer, entangle)
    if len(types) > 1 and rng.random() < 0.3:
        a, b = types[0], types[1]
        crossing = chain(parallel(generator(Swap(a, b)), identity(types[2:])),
                         parallel(swap([b], [a]), identity(types[2:])))
        layer = compose(layer, crossing)
    if rng.random() < 0.2:
        layer = tensor(layer, star())
    return layer


def random_diagram(rng, types, depth=2):
    """A random pure endomorphism of ``types`` built from spiders, H-boxes and wiring."""
    types = TypeList.of(types)
    return chain(*[random_layer(rng, types) for _ in range(depth)])


def compositions(size, longest=3, largest=4):
    for length in range(1, longest + 1):
        for widths in itertools.product(range(1, largest + 1), repeat=length):
            if sum(widths) == size:
                yield TypeList(widths)


class TestTypes(unittest.TestCase):

    def test_typelist_size_and_concat(self):
        types = TypeList((2, 1)) + [3]
        self.assertEqual(types.widths, (2, 1, 3))
        self.assertEqual(types.size, 6)
        self.assertEqual(str(types), '[2,1,3]')

    def test_typelist_rejects_empty_wire(self):
        with self.assertRaises(ValueError):
            TypeList((1, 0))

    def test_normalize_phase(self):
        self.assertAlmostEqual(normalize_phase(3 * math.pi), math.pi)
        self.assertAlmostEqual(normalize_phase(-math.pi / 2), 3 * math.pi / 2)


class TestComposition(unittest.TestCase):

    def test_compose_checks_types(self):
        with self.assertRaises(TypeMismatch):
            compose(identity([1]), identity([2]))

    def test_compose_with_identity_is_unchanged(self):
        h = hadamard(2)
        self.assertEqual(compose(identity([2]), h), h)
        self.assertEqual(compose(h, identity([2])), h)

    def test_tensor_concatenates_boundaries(self):
        d = tensor(green_spider(1, 1, 2), red_spider(2, 0, 1))
        self.assertEqual(d.inputs.widths, (1,))
        self.assertEqual(d.outputs.widths, (1, 1, 2))
        self.assertEqual(validate(d), [])

    def test_operators(self):
        d = (hadamard(1) @ identity([1])) >> build_gate('CNot')
        self.assertEqual(d.inputs.widths, (1, 1))
        self.assertEqual(len(d.nodes), 3)

    def test_parallel_of_nothing_is_empty(self):
        d = parallel()
        self.assertEqual(len(d.inputs), 0)
        self.assertEqual(len(d.outputs), 0)
        self.assertEqual(d.nodes, {})

    def test_swap_exchanges_wires(self):
        d = swap([1], [2])
        self.assertEqual(d.outputs.widths, (2, 1))
        self.assertEqual(validate(d), [])


class TestValidate(unittest.TestCase):

    def test_well_formed_generators(self):
        for d in (green_spider(3, 2, 1), hadamard(2), star(), gather(3), identity([1, 2])):
            self.assertEqual(validate(d), [])

    def test_dangling_port(self):
        d = Diagram([1], [1], {0: Spider('green', 1, 1, 1)}, (Wire(inp(0), Port(0, 'in', 0), 1),))
        kinds = {v.kind for v in validate(d)}
        self.assertIn('DanglingPort', kinds)

    def test_width_mismatch(self):
        g = Spider('green', 2, 1, 1)
        wires = (Wire(inp(0), Port(0, 'in', 0), 1), Wire(Port(0, 'out', 0), outp(0), 1))
        d = Diagram([1], [1], {0: g}, wires)
        self.assertIn('WidthMismatch', {v.kind for v in validate(d)})

    def test_bad_phase_vector(self):
        d = generator(Spider('red', 2, 1, 1, (0.0,)))
        self.assertIn('BadGenerator', {v.kind for v in validate(d)})


class TestScalableNotation(unittest.TestCase):

    def test_rewire_round_trip(self):
        there = rewire([3], [1, 2])
        back = rewire([1, 2], [3])
        self.assertTrue(equal_semantics(there >> back, identity([3])))

    def test_rewire_size_mismatch(self):
        with self.assertRaises(SizeMismatch):
            rewire([2], [3])

    def test_thicken_spider_repeats_phases(self):
        thick = thicken(green_spider(1, 1, 1, (0.3,)), 2)
        self.assertEqual(thick, green_spider(2, 1, 1, (0.3, 0.3)))

    def test_thicken_star_gives_k_stars(self):
        thick = thicken(star(), 3)
        self.assertEqual(len(thick.nodes), 3)

    def test_thicken_is_semantically_parallel_copies(self):
        body = build_gate('CNot')
        self.assertTrue(equal_semantics(thicken(body, 2),
                                        chain(rewire([2, 2], [1, 1, 1, 1]),
                                              permute([1, 1, 1, 1], [0, 2, 1, 3]),
                                              parallel(body, body),
                                              permute([1, 1, 1, 1], [0, 2, 1, 3]),
                                              rewire([1, 1, 1, 1], [2, 2]))))

    def test_strip_makes_width_one_nodes(self):
        stripped = strip(red_spider(3, 1, 2, (0.1, 0.2, 0.3)))
        self.assertEqual(len(stripped.nodes), 3)
        self.assertTrue(all(w.width == 1 for w in stripped.wires))
        self.assertTrue(equal_semantics(stripped, rewire([1, 1, 1], [3]) >> red_spider(3, 1, 2, (0.1, 0.2, 0.3))
                                        >> parallel(rewire([3], [1, 1, 1]), rewire([3], [1, 1, 1]))))

    def test_iterate_matches_unroll(self):
        bodies = [build_gate('CNot'), hadamard(1) >> green_spider(1, 1, 1, (0.7,)), green_spider(2, 1, 1, (0.2, 1.1))]
        for body in bodies:
            for k in range(4):
                with self.subTest(body=repr(body), k=k):
                    self.assertTrue(equal_semantics(iterate(body, k), unroll(body, k)))

    def test_iterate_zero_is_the_body(self):
        body = build_gate('CNot')
        self.assertTrue(equal_semantics(iterate(body, 0), body))

    def test_iterate_needs_endomorphism(self):
        with self.assertRaises(TypeMismatch):
            iterate(green_spider(1, 1, 2), 1)


class TestDerivedConstructions(unittest.TestCase):

    def test_transpose_twice(self):
        d = green_spider(1, 1, 2, (0.4,))
        self.assertTrue(equal_semantics(transpose(transpose(d)), d))

    def test_permute_rejects_non_permutation(self):
        with self.assertRaises(ValueError):
            permute([1, 1], [0, 0])

    def test_scalar_values(self):
        for power in (-3, -1, 0, 2, 5):
            with self.subTest(power=power):
                value = interp_pure(scalar(power)).value()
                self.assertAlmostEqual(abs(value[0, 0]), 2 ** (power / 4))


class TestLaws(unittest.TestCase):
    """Seeded randomized checks of the algebraic laws of diagrams."""

    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def random_pair(self, size=None):
        size = size or int(self.rng.integers(1, 4))
        types = random_types(self.rng, size)
        return random_diagram(self.rng, types), random_diagram(self.rng, types)

    def test_composition_is_matrix_product(self):
        for trial in range(10):
            f, g = self.random_pair()
            with self.subTest(trial=trial):
                expected = interp_pure(g).value() @ interp_pure(f).value()
                np.testing.assert_allclose(interp_pure(compose(f, g)).value(), expected, atol=1e-8)

    def test_tensor_is_kronecker_product(self):
        for trial in range(10):
            f, _ = self.random_pair(int(self.rng.integers(1, 3)))
            g, _ = self.random_pair(int(self.rng.integers(1, 3)))
            with self.subTest(trial=trial):
                expected = np.kron(interp_pure(f).value(), interp_pure(g).value())
                np.testing.assert_allclose(interp_pure(tensor(f, g)).value(), expected, atol=1e-8)

    def test_composition_is_associative_and_unital(self):
        for trial in range(8):
            f, g = self.random_pair()
            h = random_diagram(self.rng, f.inputs)
            with self.subTest(trial=trial):
                self.assertTrue(equal_semantics(compose(compose(f, g), h), compose(f, compose(g, h))))
                self.assertTrue(structurally_equal(compose(identity(f.inputs), f), f))
                self.assertTrue(structurally_equal(compose(f, identity(f.outputs)), f))

    def test_interchange(self):
        for trial in range(6):
            f1, f2 = self.random_pair(int(self.rng.integers(1, 3)))
            g1, g2 = self.random_pair(int(self.rng.integers(1, 3)))
            with self.subTest(trial=trial):
                self.assertTrue(equal_semantics(compose(tensor(f1, g1), tensor(f2, g2)),
                                                tensor(compose(f1, f2), compose(g1, g2))))

    def test_rewire_coherence_on_small_types(self):
        for size in range(1, 5):
            shapes = list(compositions(size))
            for a, b, c in itertools.product(shapes, repeat=3):
                with self.subTest(a=str(a), b=str(b), c=str(c)):
                    self.assertTrue(equal_semantics(compose(rewire(a, b), rewire(b, c)), rewire(a, c)))

    def test_rewire_coherence_on_random_types(self):
        for trial in range(12):
            size = int(self.rng.integers(5, 9))
            a, b, c = (random_types(self.rng, size) for _ in range(3))
            with self.subTest(a=str(a), b=str(b), c=str(c)):
                self.assertTrue(equal_semantics(compose(rewire(a, b), rewire(b, c)), rewire(a, c)))

    def test_stripping_normal_form(self):
        for trial in range(10):
            d, _ = self.random_pair(int(self.rng.integers(1, 5)))
            n = d.inputs.size
            stripped = strip(d)
            with self.subTest(trial=trial, types=str(d.inputs)):
                self.assertTrue(all(w.width == 1 for w in stripped.wires))
                self.assertTrue(equal_semantics(d, chain(rewire(d.inputs, ones(n)), stripped,
                                                         rewire(ones(n), d.outputs))))
                self.assertTrue(structurally_equal(strip(stripped), stripped))

    def test_thickening_composes(self):
        for k, l in itertools.product(range(1, 4), repeat=2):
            narrow = random_diagram(self.rng, [1])
            with self.subTest(k=k, l=l, types='[1]'):
                self.assertTrue(equal_semantics(thicken(thicken(narrow, k), l), thicken(narrow, k * l)))
            if k * l <= 4:
                d = random_diagram(self.rng, random_types(self.rng, 2))
                with self.subTest(k=k, l=l, types=str(d.inputs)):
                    self.assertTrue(equal_semantics(thicken(thicken(d, k), l), thicken(d, k * l)))

    def test_thickening_a_divider_twice(self):
        d = chain(rewire([3], [1, 2]), tensor(hadamard(1), green_spider(2, 1, 1, (0.4, 1.3))), rewire([1, 2], [3]))
        self.assertTrue(equal_semantics(thicken(thicken(d, 2), 2), thicken(d, 4)))

    def test_snake_equations(self):
        for n in range(1, 4):
            left = chain(tensor(identity([n]), cup(n)), tensor(cap(n), identity([n])))
            right = chain(tensor(cup(n), identity([n])), tensor(identity([n]), cap(n)))
            with self.subTest(n=n):
                self.assertTrue(equal_semantics(left, identity([n])))
                self.assertTrue(equal_semantics(right, identity([n])))
                self.assertTrue(structurally_equal(left, identity([n])))

    def test_swap_naturality(self):
        for a, b in itertools.product(range(1, 4), repeat=2):
            f, g = random_diagram(self.rng, [a], 1), random_diagram(self.rng, [b], 1)
            with self.subTest(a=a, b=b):
                self.assertTrue(equal_semantics(compose(swap([a], [b]), tensor(g, f)),
                                                compose(tensor(f, g), swap([a], [b]))))
                self.assertTrue(equal_semantics(compose(generator(Swap(a, b)), tensor(g, f)),
                                                compose(tensor(f, g), generator(Swap(a, b)))))


if __name__ == '__main__':
    unittest.main()
