import dataclasses
import unittest

import numpy as np

from szx import rules, scripts  # noqa: F401
from szx.errors import AnchorMismatch, SideConditionFailed, UnknownName, UnknownRule
from szx.prop import green_spider, hadamard, identity, red_spider, unroll
from szx.rewrite import (REGISTRY, RewriteRule, RuleRegistry, apply_rule, check_proof, check_rule_soundness,
                         list_rules, structurally_equal)
from szx.semantics import build_state, equal_semantics


def two_green(a=0.3, b=0.4):
    return green_spider(1, 1, 1, (a,)) >> green_spider(1, 1, 1, (b,))


FUSE = {'w': 1, 'n1': 1, 'm1': 1, 'n2': 1, 'm2': 1, 'alpha': [0.3], 'beta': [0.4]}


class TestApplyRule(unittest.TestCase):

    def test_fusion_adds_phases(self):
        d = two_green()
        result = apply_rule(d, 'fusion.green', FUSE, {0: 0, 1: 1})
        self.assertEqual(len(result.nodes), 1)
        self.assertTrue(structurally_equal(result, green_spider(1, 1, 1, (0.7,))))
        self.assertTrue(equal_semantics(d, result))

    def test_fusion_backward_splits(self):
        d = green_spider(1, 1, 1, (0.7,))
        result = apply_rule(d, 'fusion.green', FUSE, {0: 0}, direction='backward')
        self.assertTrue(structurally_equal(result, two_green()))

    def test_anchor_must_cover_the_rule(self):
        with self.assertRaises(AnchorMismatch):
            apply_rule(two_green(), 'fusion.green', FUSE, {0: 0})

    def test_anchor_must_match_the_generators(self):
        d = green_spider(1, 1, 1, (0.3,)) >> red_spider(1, 1, 1, (0.4,))
        with self.assertRaises(AnchorMismatch):
            apply_rule(d, 'fusion.green', FUSE, {0: 0, 1: 1})

    def test_side_condition(self):
        params = dict(FUSE, m1=0)
        with self.assertRaises(SideConditionFailed):
            apply_rule(two_green(), 'fusion.green', params, {0: 0, 1: 1})

    def test_bad_direction(self):
        with self.assertRaises(ValueError):
            apply_rule(two_green(), 'fusion.green', FUSE, {0: 0, 1: 1}, direction='sideways')

    def test_unknown_rule(self):
        with self.assertRaises(UnknownRule):
            apply_rule(two_green(), 'fusion.purple', FUSE, {0: 0, 1: 1})


class TestRegistry(unittest.TestCase):

    def test_catalogue(self):
        names = {entry['name'] for entry in list_rules()}
        for name in ('fusion.green', 'fusion.red', 'hopf', 'red.meta', 'swap.wires', 'promise.linear'):
            self.assertIn(name, names)

    def test_promises_are_conditional(self):
        for name in ('promise.linear', 'promise.constant', 'promise.point', 'fn.balanced', 'fn.injective'):
            self.assertTrue(REGISTRY.get(name).conditional, name)
        self.assertFalse(REGISTRY.get('fusion.green').conditional)

    def test_registering_twice(self):
        registry = RuleRegistry()
        rule = RewriteRule('same', lambda p: identity([1]), lambda p: identity([1]))
        registry.register(rule)
        with self.assertRaises(ValueError):
            registry.register(rule)


class TestSoundness(unittest.TestCase):

    def test_sampled_rules_are_sound(self):
        for name in ('fusion.green', 'fusion.red', 'bialgebra.red-green', 'hopf', 'fn.copy', 'legbend'):
            with self.subTest(rule=name):
                report = check_rule_soundness(name, trials=10, rng=np.random.default_rng(1))
                self.assertTrue(report.sound, report.as_dict())
                self.assertGreater(report.checked, 0)

    def test_unsound_rule_is_caught(self):
        bogus = RewriteRule('bogus', lambda p: build_state('0'), lambda p: build_state('1'),
                            sampler=lambda rng: {})
        report = check_rule_soundness(bogus, trials=3)
        self.assertFalse(report.sound)
        self.assertEqual(len(report.failures), 3)


class TestProofs(unittest.TestCase):

    def test_bundled_proofs_replay(self):
        for name in scripts.BUNDLED:
            with self.subTest(proof=name):
                report = check_proof(scripts.bundled(name))
                self.assertTrue(report.passed, report.as_dict())

    def test_longer_iteration_unfolds(self):
        self.assertTrue(check_proof(scripts.iteration_induction(k=3)).passed)

    def test_iteration_uses_only_structural_rules(self):
        script = scripts.iteration_induction()
        used = {step.rule for step in script.steps}
        self.assertIn('thicken.dist', used)
        self.assertLessEqual(used, {'thicken.dist', 'swap.wires', 'gath-div.inverse', 'div-gath.inverse'})

    def test_iteration_dissolves_all_wiring(self):
        script = scripts.iteration_induction(body='H', k=2)
        current = script.start
        for step in script.steps:
            current = apply_rule(current, step.rule, step.params, step.anchor, step.direction)
        self.assertEqual([g.kind for g in current.nodes.values()], ['hbox'] * 3)

    def test_iteration_with_the_wrong_count_is_caught(self):
        script = scripts.iteration_induction(body='H', k=2)
        report = check_proof(dataclasses.replace(script, end=unroll(hadamard(1), 1)))
        self.assertFalse(report.end_matches)

    def test_wrong_promise_is_caught(self):
        report = check_proof(scripts.bv_derivation('101', claimed='110'))
        self.assertFalse(report.passed)
        self.assertEqual(report.first_failure().rule, 'promise.linear')

    def test_promise_must_be_admitted(self):
        script = dataclasses.replace(scripts.bv_derivation(), oracle_axioms=())
        failure = check_proof(script).first_failure()
        self.assertEqual(failure.status, 'not-admitted')
        self.assertEqual(failure.rule, 'promise.linear')

    def test_missing_step_is_reported(self):
        script = scripts.oracle_involution()
        broken = dataclasses.replace(script, steps=script.steps[1:])
        report = check_proof(broken)
        self.assertFalse(report.passed)
        self.assertEqual(report.first_failure().status, 'failed')

    def test_wrong_end_diagram(self):
        script = dataclasses.replace(scripts.oracle_involution(), end=hadamard(2) @ identity([2]))
        report = check_proof(script)
        self.assertTrue(all(step.status == 'ok' for step in report.steps))
        self.assertFalse(report.end_matches)
        self.assertFalse(report.passed)

    def test_unknown_bundled_name(self):
        with self.assertRaises(UnknownName):
            scripts.bundled('fermat')


if __name__ == '__main__':
    unittest.main()
