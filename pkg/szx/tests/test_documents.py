import json
import math
import unittest
from pathlib import Path

import numpy as np

from szx import documents, scripts
from szx.algorithms import AlgorithmInstance
from szx.errors import DocumentError
from szx.oracles import BooleanFunction, function_arrow, quantum_oracle, yellow_matrix_arrow
from szx.prop import (compose, discard, green_spider, h_box, identity, iterate, ones, parallel, red_spider,
                      rewire, star)
from szx.rewrite import check_proof, structurally_equal
from szx.semantics import build_gate, equal_semantics, interp_cpm, interp_pure

ASSETS = Path(__file__).resolve().parent.parent / 'assets'


def round_trip(d):
    return documents.loads(documents.dumps(documents.diagram_to_dict(d)))


def random_phases(rng, width):
    if rng.random() < 0.5:
        return tuple(int(q) * math.pi / 8 for q in rng.integers(0, 16, width))
    return tuple(rng.uniform(0, 2 * math.pi, width))


def random_part(rng):
    kind = int(rng.integers(6))
    width = int(rng.integers(1, 3))
    legs = 2 if width == 1 else 1
    n_in, n_out = (int(x) for x in rng.integers(0, legs + 1, 2))
    if kind == 0:
        return green_spider(width, n_in, n_out, random_phases(rng, width))
    if kind == 1:
        return red_spider(width, n_in, n_out, random_phases(rng, width))
    if kind == 2:
        return h_box(width, n_in, n_out, rng.uniform(-2, 2, width) + 1j * rng.integers(-1, 2, width))
    if kind == 3:
        return star()
    if kind == 4:
        return discard(width)
    return yellow_matrix_arrow(rng.integers(0, 2, (2, 2)).tolist())


def random_document_diagram(rng):
    """Two or three random generators side by side, outputs divided into single wires."""
    d = parallel(*[random_part(rng) for _ in range(int(rng.integers(2, 4)))])
    while d.inputs.size > 4 or d.outputs.size > 4:
        d = parallel(*[random_part(rng) for _ in range(2)])
    return compose(d, rewire(d.outputs, ones(d.outputs.size)))


class TestPhases(unittest.TestCase):

    def test_exact_multiples_of_pi(self):
        self.assertEqual(documents.format_phase(math.pi / 2), '1/2')
        self.assertEqual(documents.format_phase(math.pi), '1')
        self.assertEqual(documents.format_phase(0.0), '0')
        self.assertEqual(documents.format_phase(3 * math.pi / 4), '3/4')

    def test_other_angles_are_floats(self):
        value = documents.format_phase(1.0)
        self.assertIsInstance(value, float)
        self.assertAlmostEqual(documents.parse_phase(value), 1.0)

    def test_parse(self):
        self.assertAlmostEqual(documents.parse_phase('1/2'), math.pi / 2)
        self.assertAlmostEqual(documents.parse_phase(0.25), math.pi / 4)
        with self.assertRaises(DocumentError):
            documents.parse_phase('half')


class TestDiagramDocuments(unittest.TestCase):

    def test_round_trip_exact(self):
        for d in (build_gate('CNot'), build_gate('Toffoli'), green_spider(2, 1, 1, (math.pi / 2, math.pi)),
                  star() @ discard(2), identity([1, 3]), quantum_oracle(BooleanFunction(2, 2, (1, 3, 0, 2))),
                  yellow_matrix_arrow([[1, 0], [1, 1]])):
            with self.subTest(d=repr(d)):
                self.assertEqual(round_trip(d), d)

    def test_round_trip_labels_and_floats(self):
        for d in (h_box(2, 1, 2, (0.5j, -2)), green_spider(1, 2, 0, (0.3,)),
                  iterate(build_gate('CNot'), 2), function_arrow(BooleanFunction.identity(2), copies=3)):
            with self.subTest(d=repr(d)):
                back = round_trip(d)
                self.assertTrue(structurally_equal(back, d))
                self.assertTrue(equal_semantics(back, d))

    def test_round_trip_random_diagrams(self):
        rng = np.random.default_rng(11)
        for trial in range(15):
            d = random_document_diagram(rng)
            with self.subTest(trial=trial, d=repr(d)):
                back = round_trip(d)
                self.assertEqual(back.inputs, d.inputs)
                self.assertEqual(back.outputs, d.outputs)
                self.assertTrue(structurally_equal(back, d))
                self.assertTrue(equal_semantics(back, d))

    def test_wire_ends(self):
        data = documents.diagram_to_dict(identity([2]))
        self.assertEqual(data['wires'], [{'a': [None, 'in', 0], 'b': [None, 'out', 0], 'width': 2}])
        self.assertEqual(data['format'], 'szx-diagram/1')

    def test_malformed_documents(self):
        bad = [
            'not json',
            json.dumps({'format': 'szx-diagram/9'}),
            json.dumps([1, 2]),
            json.dumps({'format': 'szx-diagram/1', 'inputs': [1], 'outputs': [1], 'nodes': [], 'wires': []}),
            json.dumps({'format': 'szx-diagram/1', 'nodes': [{'id': 0, 'kind': 'green'}], 'wires': []}),
            json.dumps({'format': 'szx-diagram/1', 'nodes': [{'id': 0, 'kind': 'teapot'}], 'wires': []}),
            json.dumps({'format': 'szx-diagram/1', 'inputs': [1], 'outputs': [1], 'nodes': [],
                        'wires': [{'a': [None, 'in', 0], 'b': [None, 'sideways', 0], 'width': 1}]}),
        ]
        for text in bad:
            with self.subTest(text=text):
                with self.assertRaises(DocumentError):
                    documents.loads(text)

    def test_expected_format(self):
        text = documents.dumps(documents.diagram_to_dict(identity([1])))
        with self.assertRaises(DocumentError):
            documents.loads(text, documents.PROOF_FORMAT)


class TestProofDocuments(unittest.TestCase):

    def test_bundled_proofs_survive_serialisation(self):
        for name in scripts.BUNDLED:
            with self.subTest(proof=name):
                text = documents.dumps(documents.proof_to_dict(scripts.bundled(name)))
                script = documents.loads(text, documents.PROOF_FORMAT)
                self.assertEqual(script.name, name)
                self.assertTrue(check_proof(script).passed)

    def test_missing_steps(self):
        data = documents.proof_to_dict(scripts.bundled('iteration'))
        del data['steps']
        with self.assertRaises(DocumentError):
            documents.proof_from_dict(data)


class TestInstanceDocuments(unittest.TestCase):

    def test_round_trip(self):
        for instance in (AlgorithmInstance.build('bv', n=3, s='101'),
                         AlgorithmInstance.build('grover', n=2, x='11', k=1)):
            with self.subTest(kind=instance.kind):
                data = json.loads(documents.dumps(documents.instance_to_dict(instance)))
                self.assertEqual(documents.instance_from_dict(data), instance)

    def test_missing_n(self):
        with self.assertRaises(DocumentError):
            documents.instance_from_dict({'format': 'szx-instance/1', 'algorithm': 'bv', 's': '1'})


class TestAssets(unittest.TestCase):

    def read(self, *parts):
        return documents.read(ASSETS.joinpath(*parts))

    def test_every_asset_parses(self):
        for path in sorted(ASSETS.glob('*/*.json')):
            with self.subTest(path=path.name):
                documents.read(path)

    def test_gate_assets(self):
        np.testing.assert_allclose(interp_pure(self.read('diagrams', 'hadamard.json')).value(),
                                   np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-12)
        self.assertTrue(equal_semantics(self.read('diagrams', 'cnot.json'), build_gate('CNot')))
        self.assertTrue(equal_semantics(self.read('diagrams', 'divider-gatherer.json'),
                                        self.read('diagrams', 'identity.json')))
        self.assertFalse(equal_semantics(self.read('diagrams', 'ket0.json'), self.read('diagrams', 'ket1.json')))

    def test_scalar_assets(self):
        self.assertAlmostEqual(interp_cpm(self.read('diagrams', 'star.json')).value()[0, 0].real, 1 / math.sqrt(2))
        self.assertAlmostEqual(interp_pure(self.read('diagrams', 'empty.json')).value()[0, 0].real, 1.0)

    def test_instance_assets(self):
        kinds = {self.read('instances', f'{kind}.json').kind for kind in ('bv', 'dj', 'simon', 'grover')}
        self.assertEqual(kinds, {'bv', 'dj', 'simon', 'grover'})


class TestExport(unittest.TestCase):

    def test_dot_identity(self):
        dot = documents.to_dot(identity([2]))
        self.assertTrue(dot.startswith('graph diagram {'))
        self.assertIn('in0 -- out0 [label="2"];', dot)
        self.assertEqual(dot.count(' -- '), 1)

    def test_dot_cnot(self):
        dot = documents.to_dot(build_gate('CNot'))
        self.assertIn('n0 [label="1"', dot)
        self.assertIn('n1 [label="1"', dot)
        self.assertIn('n0 -- n1;', dot)
        self.assertEqual(dot, documents.to_dot(build_gate('CNot')))

    def test_tikz(self):
        tikz = documents.to_tikz(build_gate('CNot'))
        self.assertTrue(tikz.startswith(r'\begin{tikzpicture}'))
        self.assertIn(r'\node[gn] (n0) at (1, 0)', tikz)
        self.assertIn(r'\node[rn] (n1) at (2, 0)', tikz)
        self.assertIn(r'\draw (n0) to (n1);', tikz)


if __name__ == '__main__':
    unittest.main()
