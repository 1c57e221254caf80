"""
The acceptance suite: named sections of checks over gates, rules, the
iteration construction, oracles and the four algorithms. Every section
draws from its own generator seeded by (seed, section index), so a filtered
run reproduces the same checks as a full one.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import algorithms, scripts
from .algorithms import AlgorithmReport, optimal_k
from .errors import SZXError
from .gf2 import F2Matrix, meta_rule_condition
from .oracles import (BooleanFunction, diagonal_from_oracle, diagonal_oracle, function_arrow,
                      function_from_oracle, graphical_promise_holds, oracle_matrix, quantum_oracle)
from .prop import chain, divide, gather, green_spider, identity, iterate, parallel, unroll
from .rewrite import REGISTRY, check_proof, check_rule_soundness
from .semantics import GATES, Tolerance, build_gate, build_state, equal_semantics, interp_pure

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 256
PROMISE_SAMPLES = 500
ORACLE_SAMPLES = 64
SHAPES = ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2))

_SQ = 1 / math.sqrt(2)

GATE_TABLES = {
    'H': [[_SQ, _SQ], [_SQ, -_SQ]],
    'Not': [[0, 1], [1, 0]],
    'Z': [[1, 0], [0, -1]],
    'Swap': [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    'CNot': [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    'CZ': np.diag([1, 1, 1, -1]),
    'Toffoli': np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]],
}

STATE_TABLES = {
    '0': [[1], [0]],
    '1': [[0], [1]],
    '+': [[_SQ], [_SQ]],
    '-': [[_SQ], [-_SQ]],
}


@dataclass
class SuiteReport:
    seed: int
    sections: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.sections.values())

    def as_dict(self):
        return {'seed': self.seed, 'passed': self.passed,
                'sections': {name: r.as_dict() for name, r in self.sections.items()}}


def _functions(n, m, rng, samples):
    """Every f: 2^n -> 2^m when there are few of them, otherwise a sample."""
    if (2 ** m) ** (2 ** n) <= ENUMERATION_LIMIT:
        for table in itertools.product(range(2 ** m), repeat=2 ** n):
            yield BooleanFunction(n, m, table)
    else:
        for _ in range(samples):
            yield BooleanFunction.random(n, m, rng)


def _balanced(n, m, rng):
    values = np.repeat(np.arange(2 ** m), 2 ** (n - m))
    return BooleanFunction(n, m, tuple(int(v) for v in rng.permutation(values)))


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------
def gates_section(rng, tol, trials):
    report = AlgorithmReport('gates', {})
    for name in GATES:
        matrix = interp_pure(build_gate(name)).value()
        report.add(f"gate {name}", np.allclose(matrix, GATE_TABLES[name], rtol=tol.rel, atol=tol.abs))
    for name in STATE_TABLES:
        vector = interp_pure(build_state(name)).value()
        report.add(f"state {name}", np.allclose(vector, STATE_TABLES[name], rtol=tol.rel, atol=tol.abs))
    return report


def rules_section(rng, tol, trials):
    report = AlgorithmReport('rules', {'trials': trials})
    for rule in REGISTRY:
        if rule.sampler is None:
            continue
        soundness = check_rule_soundness(rule, trials=trials, tol=tol, rng=rng)
        report.add(rule.name, soundness.sound and soundness.checked > 0,
                   measured={'checked': soundness.checked, 'failures': len(soundness.failures),
                             'errors': len(soundness.errors)})
    return report


def _random_body(size, rng):
    layer = []
    for _ in range(size):
        choice = int(rng.integers(0, 4))
        if choice == 3:
            layer.append(green_spider(1, 1, 1, (float(rng.uniform(0, 2 * math.pi)),)))
        else:
            layer.append(build_gate(('H', 'Not', 'Z')[choice]))
    body = parallel(*layer)
    if size >= 2:
        body = body >> parallel(build_gate('CNot'), identity([1] * (size - 2)))
    return body


def iteration_section(rng, tol, trials, count=50):
    report = AlgorithmReport('iteration', {'bodies': count})
    for index in range(count):
        size, k = int(rng.integers(1, 4)), int(rng.integers(0, 5))
        body = _random_body(size, rng)
        report.add(f"body {index} (size {size}, k={k})", equal_semantics(iterate(body, k), unroll(body, k), tol))
    return report


def _matrices(rows, cols):
    for bits in itertools.product((0, 1), repeat=rows * cols):
        yield [list(bits[r * cols:(r + 1) * cols]) for r in range(rows)]


def meta_section(rng, tol, trials, dimension=5):
    """Exhaustive over A, B, C, D with n1 + n2 + p + q ≤ ``dimension``."""
    rule = REGISTRY.get('red.meta')
    report = AlgorithmReport('meta', {'dimension': dimension})
    disagreements = checked = 0
    for n1, n2, p, q in itertools.product(range(1, dimension), repeat=4):
        if n1 + n2 + p + q > dimension:
            continue
        for a, b, c, d in itertools.product(_matrices(p, n1), _matrices(p, n2), _matrices(n1, q), _matrices(n2, q)):
            params = {'A': a, 'B': b, 'C': c, 'D': d}
            holds = meta_rule_condition(*(F2Matrix.from_lists(x) for x in (a, b, c, d))).holds
            lhs, rhs = rule.build(params)
            checked += 1
            if equal_semantics(lhs, rhs, tol) != holds:
                disagreements += 1
                logger.warning("meta rule disagreement at %s", params)
    report.add('equal iff Im(C;D) = Ker(A B)', disagreements == 0, measured=disagreements, expected=0)
    report.add('instances checked', checked > 0, measured=checked)
    return report


def promises_section(rng, tol, trials):
    report = AlgorithmReport('promises', {})
    for n, m in SHAPES:
        wrong = 0
        for f in _functions(n, m, rng, PROMISE_SAMPLES):
            wrong += graphical_promise_holds(f, 'balanced', tol) != f.is_balanced()
            wrong += graphical_promise_holds(f, 'injective', tol) != f.is_injective()
        report.add(f"graphical = combinatorial for n={n}, m={m}", wrong == 0, measured=wrong, expected=0)
    return report


def _toffoli_is_and_oracle(tol):
    oracle = quantum_oracle(BooleanFunction.and_gate(2))
    rewired = chain(parallel(gather(2), identity([1])), oracle, parallel(divide(2), identity([1])))
    return equal_semantics(build_gate('Toffoli'), rewired, tol)


def oracles_section(rng, tol, trials):
    report = AlgorithmReport('oracles', {})
    report.add('Toffoli = U_AND', _toffoli_is_and_oracle(tol))
    for n, m in SHAPES:
        failures = []
        for f in _functions(n, m, rng, ORACLE_SAMPLES):
            u = quantum_oracle(f)
            matrix = interp_pure(u).value()
            if not np.allclose(matrix, oracle_matrix(f), rtol=tol.rel, atol=tol.abs):
                failures.append(('matrix', f.table))
            if not equal_semantics(chain(u, u), identity([n, m]), tol):
                failures.append(('involution', f.table))
            if not equal_semantics(function_from_oracle(f), function_arrow(f), tol):
                failures.append(('function', f.table))
            if m == 1 and not equal_semantics(diagonal_from_oracle(f), diagonal_oracle(f), tol):
                failures.append(('diagonal', f.table))
        report.add(f"oracles for n={n}, m={m}", not failures, measured=failures[:3])
    return report


def bv_section(rng, tol, trials, max_n=5):
    report = AlgorithmReport('bv', {'max_n': max_n})
    for n in range(1, max_n + 1):
        for s in range(2 ** n):
            result = algorithms.verify_bv(n, s, tol)
            report.add(f"s={s:0{n}b}", result.passed)
    return report


def dj_section(rng, tol, trials, samples=20):
    report = AlgorithmReport('dj', {})
    for n, m in SHAPES:
        family = [BooleanFunction.constant(n, c, m) for c in range(2 ** m)]
        if m <= n:
            if (n, m) == (2, 1):
                family += [f for f in _functions(n, m, rng, 0) if f.is_balanced()]
            else:
                family += [_balanced(n, m, rng) for _ in range(samples)]
        failed = [f.table for f in family if not algorithms.verify_dj(f, tol).passed]
        report.add(f"n={n}, m={m}", not failed, measured=failed[:3])
    return report


def _simon_functions(n, s, rng, relabelings):
    base = algorithms.simon_function(n, s)
    yield base
    for _ in range(relabelings):
        perm = rng.permutation(2 ** n)
        yield BooleanFunction(n, n, tuple(int(perm[v]) for v in base.table))


def simon_section(rng, tol, trials, relabelings=4, runs=1000):
    report = AlgorithmReport('simon', {'runs': runs})
    instances = []
    for n in range(1, 4):
        for s in range(1, 2 ** n):
            for f in _simon_functions(n, s, rng, relabelings):
                instances.append((n, s, f))
                report.add(f"n={n}, s={s:0{n}b}, f={list(f.table)}", algorithms.verify_simon(n, s, f, tol).passed)
    recovered = determined = 0
    for _ in range(runs):
        n, s, f = instances[int(rng.integers(0, len(instances)))]
        if n == 1:
            continue
        samples = algorithms.sample_simon(n, s, f, n + 1, rng)
        found = algorithms.simon_recover_s(samples, n)
        if found is algorithms.Undetermined:
            continue
        determined += 1
        recovered += found == s
    report.add('recovery finds the planted period', recovered == determined,
               measured=recovered, expected=determined)
    return report


def grover_section(rng, tol, trials, max_k=10):
    report = AlgorithmReport('grover', {'max_k': max_k})
    for n in (2, 3, 4):
        x = int(rng.integers(0, 2 ** n))
        for k in range(max_k + 1):
            report.add(f"n={n}, x={x:0{n}b}, k={k}", algorithms.verify_grover(n, x, k, tol).passed)
    for n in range(1, 11):
        guess = round(math.pi / 4 * math.sqrt(2 ** n) - 0.5)
        report.add(f"optimal_k({n})", abs(optimal_k(n) - guess) <= 1, measured=optimal_k(n), expected=guess)
    for n in range(1, 5):
        for x in (0, 2 ** n - 1):
            report.add(f"lemma n={n}, x={x:0{n}b}", algorithms.check_grover_lemma(n, x, tol).passed)
    return report


def proofs_section(rng, tol, trials):
    report = AlgorithmReport('proofs', {})
    for name in scripts.BUNDLED:
        result = check_proof(scripts.bundled(name), tol)
        failure = result.first_failure()
        report.add(f"bundled {name}", result.passed,
                   measured=None if failure is None else f"step {failure.index}: {failure.status}")
    perturbed = check_proof(scripts.bv_derivation('101', claimed='110'), tol)
    failure = perturbed.first_failure()
    report.add('perturbed promise is caught', failure is not None and failure.rule == 'promise.linear',
               measured=None if failure is None else failure.status)
    return report


SECTIONS = {
    'gates': gates_section,
    'rules': rules_section,
    'iteration': iteration_section,
    'meta': meta_section,
    'promises': promises_section,
    'oracles': oracles_section,
    'bv': bv_section,
    'dj': dj_section,
    'simon': simon_section,
    'grover': grover_section,
    'proofs': proofs_section,
}


def run_suite(seed=0, name_filter=None, tol=Tolerance(), trials=100):
    report = SuiteReport(seed)
    for index, (name, section) in enumerate(SECTIONS.items()):
        if name_filter and name_filter not in name:
            continue
        rng = np.random.default_rng([seed, index])
        logger.info("suite: running %s", name)
        try:
            report.sections[name] = section(rng, tol, trials)
        except SZXError as exc:
            failed = AlgorithmReport(name, {})
            failed.add('section raised', False, measured=f"{type(exc).__name__}: {exc}")
            report.sections[name] = failed
    return report
