import json
import os
import tempfile
from io import StringIO
from pathlib import Path

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'szx_project.settings')
django.setup()

from django.core.management import call_command  # noqa: E402
from django.core.management.base import CommandError  # noqa: E402
from django.test import TestCase  # noqa: E402

from szx.models import VerificationRun  # noqa: E402
from szx.services import DocumentService, ProofService  # noqa: E402

DIAGRAMS = DocumentService.asset('diagrams')
INSTANCES = DocumentService.asset('instances')


class CommandTestCase(TestCase):

    def run_command(self, *args, **kwargs):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO(), **kwargs)
        return out.getvalue()

    def assertExitCode(self, code, *args, **kwargs):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args, **kwargs)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class TestInterpret(CommandTestCase):

    def test_hadamard_json(self):
        data = json.loads(self.run_command('interpret', str(DIAGRAMS / 'hadamard.json'), '--json'))
        self.assertEqual(data['mode'], 'pure')
        self.assertEqual(data['shape'], [2, 2])
        self.assertAlmostEqual(data['real'][1][1], -0.707106781187)

    def test_star_is_one_over_root_two(self):
        out = self.run_command('interpret', str(DIAGRAMS / 'star.json'), '--cpm')
        self.assertIn('0.70710678', out)

    def test_empty_diagram_is_one(self):
        data = json.loads(self.run_command('interpret', str(DIAGRAMS / 'empty.json'), '--json'))
        self.assertEqual(data['real'], [[1.0]])

    def test_discard_defaults_to_cpm(self):
        data = json.loads(self.run_command('interpret', str(DIAGRAMS / 'discard.json'), '--json'))
        self.assertEqual(data['mode'], 'cpm')
        self.assertEqual(data['real'], [[1.0, 0.0, 0.0, 1.0]])

    def test_discard_is_not_pure(self):
        self.assertExitCode(2, 'interpret', str(DIAGRAMS / 'discard.json'), '--pure')

    def test_stdin(self):
        text = (DIAGRAMS / 'cnot.json').read_text()
        data = json.loads(self.run_command('interpret', '-', '--json', stdin=StringIO(text)))
        self.assertEqual(data['real'][2], [0.0, 0.0, 0.0, 1.0])

    def test_missing_file(self):
        self.assertExitCode(2, 'interpret', str(DIAGRAMS / 'nowhere.json'))

    def test_malformed_document(self):
        self.assertExitCode(2, 'interpret', '-', stdin=StringIO('{"format": "szx-diagram/1", "inputs": [1]}'))


class TestCheckEq(CommandTestCase):

    def test_equal(self):
        out = self.run_command('check_eq', str(DIAGRAMS / 'divider-gatherer.json'), str(DIAGRAMS / 'identity.json'))
        self.assertIn('equal', out)

    def test_not_equal(self):
        self.assertExitCode(1, 'check_eq', str(DIAGRAMS / 'ket0.json'), str(DIAGRAMS / 'ket1.json'))

    def test_boundaries_must_match(self):
        self.assertExitCode(2, 'check_eq', str(DIAGRAMS / 'hadamard.json'), str(DIAGRAMS / 'identity.json'))

    def test_json(self):
        out = self.run_command('check_eq', str(DIAGRAMS / 'cnot.json'), str(DIAGRAMS / 'cnot.json'), '--json')
        self.assertTrue(json.loads(out[:out.rindex('}') + 1])['equal'])


class TestVerify(CommandTestCase):

    def test_bv_from_flags(self):
        out = self.run_command('verify', 'bv', '--n', '3', '--s', '101')
        self.assertIn('verified', out)

    def test_grover_json(self):
        out = self.run_command('verify', 'grover', '--n', '2', '--k', '1', '--json')
        data = json.loads(out[:out.rindex('}') + 1])
        self.assertTrue(data['passed'])
        check = next(c for c in data['checks'] if c['name'] == 'P(x)')
        self.assertAlmostEqual(check['measured'], 1.0)

    def test_instance_files(self):
        for kind in ('bv', 'dj', 'simon', 'grover'):
            with self.subTest(kind=kind):
                self.run_command('verify', kind, str(INSTANCES / f'{kind}.json'))

    def test_seed_drives_sampling(self):
        def sampled(seed):
            out = self.run_command('verify', 'simon', '--n', '3', '--s', '101', '--seed', str(seed), '--json')
            data = json.loads(out[:out.rindex('}') + 1])
            return next(c for c in data['checks'] if c['name'] == 'samples lie in s⊥')['measured']

        self.assertEqual(sampled(5), sampled(5))
        self.assertNotEqual(sampled(5), sampled(6))

    def test_promise_violation(self):
        error = self.assertExitCode(2, 'verify', 'simon', '--n', '2', '--s', '01', '--table', '0,1,2,3')
        self.assertIn('PromiseViolated', str(error))

    def test_needs_an_instance(self):
        self.assertExitCode(2, 'verify', 'bv')

    def test_bad_word(self):
        self.assertExitCode(2, 'verify', 'bv', '--n', '3', '--s', '1z1')

    def test_save_records_the_run(self):
        self.run_command('verify', 'dj', '--n', '2', '--table', '0,1,1,0', '--save')
        run = VerificationRun.objects.get()
        self.assertEqual(run.command, 'verify')
        self.assertTrue(run.passed)
        self.assertEqual(run.report['algorithm'], 'dj')
        self.assertTrue(run.target.startswith('dj'))


class TestCheckProof(CommandTestCase):

    def setUp(self):
        ProofService.invalidate_cache()

    def test_bundled(self):
        out = self.run_command('check_proof', '--bundled', 'oracle-involution')
        self.assertIn('end matches', out)

    def test_all_bundled(self):
        out = self.run_command('check_proof', '--bundled', 'all', '--json')
        reports = json.loads(out[:out.rindex(']') + 1])
        self.assertEqual({r['name'] for r in reports}, set(ProofService.bundled_names()))
        self.assertTrue(all(r['passed'] for r in reports))

    def test_unknown_bundled(self):
        self.assertExitCode(2, 'check_proof', '--bundled', 'fermat')

    def test_needs_a_script(self):
        self.assertExitCode(2, 'check_proof')

    def test_dump_and_replay(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'iteration.json'
            self.run_command('check_proof', '--bundled', 'iteration', '--dump', str(path))
            self.assertEqual(json.loads(path.read_text())['format'], 'szx-proof/1')
            out = self.run_command('check_proof', str(path))
            self.assertIn('1 proof(s) replayed', out)

    def test_corrupted_script_names_the_failing_step(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bv.json'
            self.run_command('check_proof', '--bundled', 'bv', '--dump', str(path))
            data = json.loads(path.read_text())
            data['oracle_axioms'] = []
            path.write_text(json.dumps(data))
            out = StringIO()
            with self.assertRaises(CommandError) as ctx:
                call_command('check_proof', str(path), stdout=out)
            self.assertEqual(ctx.exception.returncode, 1)
            self.assertIn('promise.linear (forward) not-admitted', out.getvalue())

    def test_save(self):
        self.run_command('check_proof', '--bundled', 'diagonal-oracle', '--save')
        self.assertEqual(VerificationRun.objects.filter(command='check_proof', passed=True).count(), 1)


class TestSuite(CommandTestCase):

    def test_gates(self):
        out = self.run_command('suite', '--filter', 'gates')
        self.assertIn('suite passed', out)

    def test_deterministic_json(self):
        first = self.run_command('suite', '--filter', 'meta', '--seed', '3', '--json')
        second = self.run_command('suite', '--filter', 'meta', '--seed', '3', '--json')
        self.assertEqual(first, second)
        data = json.loads(first[:first.rindex('}') + 1])
        self.assertEqual(list(data['sections']), ['meta'])
        self.assertEqual(data['seed'], 3)

    def test_save_and_list(self):
        self.run_command('suite', '--filter', 'gates', '--save')
        out = self.run_command('list_runs', '--detailed')
        self.assertIn('Recorded runs: 1', out)
        self.assertIn('suite', out)


class TestListRuns(CommandTestCase):

    def test_empty(self):
        self.assertIn('Recorded runs: 0', self.run_command('list_runs'))

    def test_failing_checks_are_listed(self):
        VerificationRun.objects.create(command='verify', target='bv n=1 s=1', seed=0, passed=False,
                                       report={'checks': [{'name': 'P(s)', 'passed': False}]}, duration=0.1)
        out = self.run_command('list_runs', '--detailed', '--command', 'verify')
        self.assertIn('P(s)', out)
        self.assertIn('bv n=1 s=1', out)


class TestExport(CommandTestCase):

    def test_dot(self):
        out = self.run_command('export', str(DIAGRAMS / 'identity.json'), '--dot')
        self.assertIn('in0 -- out0', out)

    def test_tikz(self):
        out = self.run_command('export', str(DIAGRAMS / 'cnot.json'), '--tikz')
        self.assertIn(r'\begin{tikzpicture}', out)
        self.assertIn(r'\end{tikzpicture}', out)


class TestRules(CommandTestCase):

    def test_catalogue(self):
        out = self.run_command('rules')
        self.assertIn('fusion.green', out)
        self.assertIn('[promise]', out)

    def test_catalogue_json(self):
        catalogue = json.loads(self.run_command('rules', '--json'))
        self.assertIn('promise.linear', {entry['name'] for entry in catalogue})

    def test_check(self):
        out = self.run_command('rules', 'fusion.red', 'hopf', '--check', '--trials', '5')
        self.assertIn('2 rules sound', out)

    def test_unknown_rule(self):
        self.assertExitCode(2, 'rules', 'fusion.purple', '--check')
