"""
The oracle algorithms: circuit builders, numeric verifiers against the
closed forms and replays of the bundled derivations.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .errors import Degenerate, PromiseViolated, TypeMismatch
from .gf2 import BoolSemiringMatrix, F2Matrix, f2_kernel, f2_rank
from .oracles import (BooleanFunction, basis_state, diagonal_oracle, function_arrow,
                      minus_state, quantum_oracle, red_matrix_arrow, yellow_matrix_arrow)
from .prop import (chain, discard, gather, green_spider, h_box, hadamard, identity, iterate, parallel,
                   red_spider, scalar, transpose, unroll)
from .rewrite import check_proof
from .scripts import bv_derivation
from .semantics import Tolerance, equal_semantics, interp_cpm, interp_pure, outcome_probability

logger = logging.getLogger(__name__)

KINDS = ('bv', 'dj', 'simon', 'grover')
SIMON_EXTRA_SHOTS = 16


def _word(value, n):
    return format(value, f'0{n}b') if n else ''


def _parse_word(s, n=None):
    if isinstance(s, int):
        return s
    if n is not None and len(s) != n:
        raise TypeMismatch(f"{s!r} is not a word of {n} bits")
    if s.strip('01'):
        raise TypeMismatch(f"{s!r} is not a binary word")
    return int(s, 2) if s else 0


def _dot(a, b):
    return bin(a & b).count('1') & 1


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------
@dataclass
class Check:
    name: str
    passed: bool
    measured: object = None
    expected: object = None
    tolerance: float = None


@dataclass
class AlgorithmReport:
    algorithm: str
    instance: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, passed, measured=None, expected=None, tolerance=None):
        self.checks.append(Check(name, bool(passed), measured, expected, tolerance))
        if not passed:
            logger.info("%s: check %s failed (measured %s, expected %s)",
                        self.algorithm, name, measured, expected)

    def as_dict(self):
        return {'algorithm': self.algorithm, 'instance': self.instance, 'passed': self.passed,
                'checks': [asdict(c) for c in self.checks]}


def _value_check(report, name, measured, expected, tol):
    measured, expected = float(measured), float(expected)
    report.add(name, abs(measured - expected) <= tol.abs + tol.rel * abs(expected),
               round(measured, 12), round(expected, 12), tol.abs)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------
def check_simon_promise(n, s, f):
    if s == 0:
        raise PromiseViolated("Simon needs a nonzero period")
    if f.n != n or f.m != n:
        raise PromiseViolated(f"Simon needs f: 2^{n} -> 2^{n}, got 2^{f.n} -> 2^{f.m}")
    for x in range(2 ** n):
        for y in range(x + 1, 2 ** n):
            if (f(x) == f(y)) != (x ^ y == s):
                raise PromiseViolated(
                    f"f({_word(x, n)}) {'=' if f(x) == f(y) else '≠'} f({_word(y, n)}) "
                    f"contradicts the period {_word(s, n)}")


@dataclass(frozen=True)
class AlgorithmInstance:
    """An algorithm together with its oracle and promise data; checked on construction."""

    kind: str
    f: BooleanFunction
    s: int = None
    x: int = None
    k: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TypeMismatch(f"unknown algorithm {self.kind!r}")
        if self.n == 0:
            raise Degenerate("instances need at least one input bit")
        {'bv': self._check_bv, 'dj': self._check_dj,
         'simon': self._check_simon, 'grover': self._check_grover}[self.kind]()

    @property
    def n(self):
        return self.f.n

    @property
    def m(self):
        return self.f.m

    def _check_bv(self):
        if self.s is None or self.f.table != BooleanFunction.linear(self.s, self.n).table:
            raise PromiseViolated("f is not x ↦ s·x for the given s")

    def _check_dj(self):
        if not (self.f.is_constant() or self.f.is_balanced()):
            raise PromiseViolated("f is neither constant nor balanced")

    def _check_simon(self):
        check_simon_promise(self.n, self.s or 0, self.f)

    def _check_grover(self):
        if self.x is None or self.f.table != BooleanFunction.point(self.n, self.x).table:
            raise PromiseViolated("f must mark exactly the given word")
        if self.k is None or self.k < 0:
            raise PromiseViolated("Grover needs a non-negative iteration count")

    @classmethod
    def build(cls, kind, n=None, s=None, x=None, k=None, table=None, m=None):
        """Fill in the canonical oracle for the data given; an explicit table wins."""
        s = None if s is None else _parse_word(s, n)
        x = None if x is None else _parse_word(x, n)
        if table is not None:
            m = m if m is not None else (n if kind == 'simon' else 1)
            f = BooleanFunction(n, m, tuple(table))
            if kind == 'grover' and k is None:
                k = optimal_k(n)
        elif kind == 'bv':
            f = BooleanFunction.linear(s, n)
        elif kind == 'grover':
            f = BooleanFunction.point(n, x if x is not None else 0)
            x = 0 if x is None else x
            k = optimal_k(n) if k is None else k
        elif kind == 'simon':
            f = simon_function(n, s)
        else:
            f = BooleanFunction.constant(n, 0, m or 1)
        return cls(kind, f, s, x, k)

    def as_dict(self):
        data = {'algorithm': self.kind, 'n': self.n, 'm': self.m, 'table': list(self.f.table)}
        if self.s is not None:
            data['s'] = _word(self.s, self.n)
        if self.x is not None:
            data['x'] = _word(self.x, self.n)
        if self.k is not None:
            data['k'] = self.k
        return data


def verify(instance, tol=Tolerance(), rng=None):
    """Run the verifier matching ``instance.kind``; ``rng`` drives the sampled Simon runs."""
    if instance.kind == 'bv':
        return verify_bv(instance.n, instance.s, tol, instance.f)
    if instance.kind == 'dj':
        return verify_dj(instance.f, tol)
    if instance.kind == 'simon':
        return verify_simon(instance.n, instance.s, instance.f, tol, rng)
    report = verify_grover(instance.n, instance.x, instance.k, tol)
    report.checks.extend(check_grover_lemma(instance.n, instance.x, tol).checks)
    return report


# ---------------------------------------------------------------------------
# Bernstein-Vazirani and Deutsch-Jozsa
# ---------------------------------------------------------------------------
def _kickback_circuit(f, ancilla):
    """|0^n⟩ and an ancilla, H layer, U_f, H layer; the ancilla is discarded."""
    n, m = f.n, f.m
    return chain(parallel(basis_state(n), ancilla),
                 parallel(hadamard(n), identity([m])),
                 quantum_oracle(f),
                 parallel(hadamard(n), discard(m)))


def _minus_register(m):
    register = parallel(*[minus_state() for _ in range(m)])
    return register if m == 1 else register >> gather(m)


def build_bv(n, s, f=None):
    s = _parse_word(s, n)
    expected = BooleanFunction.linear(s, n)
    if f is not None and f.table != expected.table:
        raise PromiseViolated(f"f is not x ↦ {_word(s, n)}·x")
    return _kickback_circuit(f or expected, minus_state())


def verify_bv(n, s, tol=Tolerance(), f=None):
    s = _parse_word(s, n)
    circuit = build_bv(n, s, f)
    report = AlgorithmReport('bv', {'n': n, 's': _word(s, n)})
    rho = interp_cpm(circuit).density()
    target = np.zeros((2 ** n, 2 ** n))
    target[s, s] = 1
    report.add('output is |s⟩⟨s|', np.allclose(rho, target, rtol=tol.rel, atol=tol.abs),
               tolerance=tol.abs)
    _value_check(report, 'P(s)', outcome_probability(circuit, (s, n)), 1.0, tol)
    proof = check_proof(bv_derivation(_word(s, n)), tol)
    failure = proof.first_failure()
    report.add('derivation replays', proof.passed,
               measured=None if failure is None else f"step {failure.index}: {failure.status}")
    return report


def build_dj(f):
    if not (f.is_constant() or f.is_balanced()):
        raise PromiseViolated("f is neither constant nor balanced")
    return _kickback_circuit(f, _minus_register(f.m))


def verify_dj(f, tol=Tolerance()):
    circuit = build_dj(f)
    report = AlgorithmReport('dj', {'n': f.n, 'm': f.m, 'table': list(f.table),
                                    'constant': f.is_constant()})
    expected = 1.0 if f.is_constant() else 0.0
    _value_check(report, 'P(0^n)', outcome_probability(circuit, (0, f.n)), expected, tol)
    return report


# ---------------------------------------------------------------------------
# Simon
# ---------------------------------------------------------------------------
def simon_function(n, s):
    """The canonical 2-to-1 function of period s: the smaller word of each pair {x, x⊕s}."""
    s = _parse_word(s, n)
    if s == 0:
        raise PromiseViolated("Simon needs a nonzero period")
    return BooleanFunction(n, n, tuple(min(x, x ^ s) for x in range(2 ** n)))


def build_simon(n, s, f):
    """|0^n⟩|0^n⟩, H layer, U_f, function register discarded, H layer."""
    check_simon_promise(n, _parse_word(s, n), f)
    return chain(parallel(basis_state(n), basis_state(n)),
                 parallel(hadamard(n), identity([n])),
                 quantum_oracle(f),
                 parallel(hadamard(n), discard(n)))


def simon_distribution(n, s):
    """The uniform mixture over s⊥ as a diagonal of probabilities."""
    s = _parse_word(s, n)
    return np.array([1 / 2 ** (n - 1) if _dot(y, s) == 0 else 0.0 for y in range(2 ** n)])


def verify_simon(n, s, f, tol=Tolerance(), rng=None):
    """Exact output distribution and factorisation; with ``rng``, also a sampled recovery of s."""
    s = _parse_word(s, n)
    circuit = build_simon(n, s, f)
    report = AlgorithmReport('simon', {'n': n, 's': _word(s, n), 'table': list(f.table)})
    rho = interp_cpm(circuit).density()
    expected = np.diag(simon_distribution(n, s))
    report.add('output is uniform on s⊥', np.allclose(rho, expected, rtol=tol.rel, atol=tol.abs),
               tolerance=tol.abs)
    off = sum(float(rho[y, y].real) for y in range(2 ** n) if _dot(y, s))
    _value_check(report, 'mass off s⊥', off, 0.0, tol)
    decomposition = simon_decomposition(n, s, f, tol)
    report.add('f = g ∘ h', decomposition.factorises)
    if rng is not None:
        samples = sample_simon(n, s, f, n + SIMON_EXTRA_SHOTS, rng)
        report.add('samples lie in s⊥', not any(_dot(y, s) for y in samples),
                   measured=[_word(y, n) for y in samples])
        recovered = simon_recover_s(samples, n)
        report.add('sampled runs recover s', recovered == s,
                   measured=_word(recovered, n) if recovered is not Undetermined else repr(recovered),
                   expected=_word(s, n))
    return report


@dataclass(frozen=True)
class SimonDecomposition:
    """f = g ∘ h with h a GF(2) projector of kernel {0, s} and g a bijection."""

    h: F2Matrix
    g: BooleanFunction
    factorises: bool
    symmetric: bool


def simon_decomposition(n, s, f, tol=Tolerance()):
    s = _parse_word(s, n)
    check_simon_promise(n, s, f)
    pivot = next(i for i in range(n) if (s >> (n - 1 - i)) & 1)
    s_bits = [(s >> (n - 1 - r)) & 1 for r in range(n)]
    h = F2Matrix.from_lists([[int(r == c) ^ (s_bits[r] & int(c == pivot)) for c in range(n)]
                             for r in range(n)])
    table = [None] * 2 ** n
    for y in range(2 ** n):
        if h.apply(y) == y:
            table[y] = f(y)
    spare = iter(sorted(set(range(2 ** n)) - set(v for v in table if v is not None)))
    for y in range(2 ** n):
        if table[y] is None:
            table[y] = next(spare)
    g = BooleanFunction(n, n, tuple(table))
    composite = chain(red_matrix_arrow(h), function_arrow(g))
    factorises = equal_semantics(function_arrow(f), composite, tol)
    return SimonDecomposition(h, g, factorises, h.to_lists() == h.transpose().to_lists())


@lru_cache(maxsize=64)
def simulated_distribution(n, s, f):
    """Outcome probabilities of the interpreted Simon circuit."""
    rho = interp_cpm(build_simon(n, s, f)).density()
    probabilities = np.clip(np.real(np.diag(rho)), 0, None)
    return tuple(probabilities / probabilities.sum())


def sample_simon(n, s, f, shots, rng):
    """Draw ``shots`` outcomes from the simulated output distribution."""
    p = simulated_distribution(n, _parse_word(s, n), f)
    return [int(y) for y in rng.choice(2 ** n, size=shots, p=p)]


class _Undetermined:
    def __repr__(self):
        return 'Undetermined'

    def __bool__(self):
        return False


Undetermined = _Undetermined()


def simon_recover_s(samples, n):
    """The unique nonzero s orthogonal to every sample, or Undetermined."""
    if not samples:
        return Undetermined
    rows = [[(y >> (n - 1 - j)) & 1 for j in range(n)] for y in samples]
    matrix = F2Matrix.from_lists(rows)
    if f2_rank(matrix) != n - 1:
        return Undetermined
    (s,) = f2_kernel(matrix)
    return s


# ---------------------------------------------------------------------------
# Grover
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GroverGeometry:
    n: int
    mu: float
    nu: float

    @classmethod
    def of(cls, n):
        if n < 1:
            raise Degenerate("Grover needs at least one qubit")
        size = 2 ** n
        return cls(n, 2 * math.atan2(math.sqrt(size - 1), -1), 1 / math.sqrt(size - 1))

    @property
    def cos_half(self):
        return math.cos(self.mu / 2)

    @property
    def sin_half(self):
        return math.sin(self.mu / 2)

    def isometry(self, x):
        """The 2^n × 2 matrix with columns |x⟩ and ν Σ_{y≠x} |y⟩."""
        columns = np.zeros((2 ** self.n, 2))
        columns[:, 1] = self.nu
        columns[x, 0], columns[x, 1] = 1, 0
        return columns


def rotation(angle):
    return np.array([[math.cos(angle), math.sin(angle)], [-math.sin(angle), math.cos(angle)]])


def grover_success_prob(n, k):
    mu = GroverGeometry.of(n).mu
    return math.cos((2 * k + 1) * mu / 2) ** 2


def optimal_k(n):
    """
    The first local peak of the success probability within [0, ⌈π√2^n⌉].

    This is not the argmax over the whole range: later peaks can be marginally
    higher, so n=3 gives 2 although k=6 scores best. The first peak is always
    within 1 of round((π/4)√2^n - 1/2).
    """
    bound = math.ceil(math.pi * math.sqrt(2 ** n))
    k = 0
    while k < bound and grover_success_prob(n, k + 1) > grover_success_prob(n, k) + 1e-12:
        k += 1
    return k


def _and_flip(n):
    """(-1)^{AND(x)} via the yellow all-ones arrow."""
    conjunction = yellow_matrix_arrow(BoolSemiringMatrix.from_lists([[1] * n]))
    return chain(green_spider(n, 1, 2),
                 parallel(identity([n]), conjunction),
                 parallel(identity([n]), green_spider(1, 1, 0, (math.pi,))))


def diffusion(n):
    """H^n (I - 2|0⟩⟨0|) H^n."""
    nots = red_spider(n, 1, 1, [math.pi] * n)
    return chain(hadamard(n), nots, _and_flip(n), nots, hadamard(n))


def grover_step(n, f):
    return diagonal_oracle(f) >> diffusion(n)


def build_grover(n, f, k, unrolled=False):
    """|0^n⟩, H layer, then k Grover steps repeated with the iteration construction."""
    if f.n != n or f.m != 1 or sum(f.table) != 1:
        raise PromiseViolated("Grover needs a function marking exactly one word")
    prepare = chain(basis_state(n), hadamard(n))
    if k == 0:
        return prepare
    repeat = unroll if unrolled else iterate
    return prepare >> repeat(grover_step(n, f), k - 1)


def verify_grover(n, x, k, tol=Tolerance()):
    x = _parse_word(x, n)
    geometry = GroverGeometry.of(n)
    f = BooleanFunction.point(n, x)
    report = AlgorithmReport('grover', {'n': n, 'x': _word(x, n), 'k': k})
    circuit = build_grover(n, f, k, unrolled=True)
    expected = grover_success_prob(n, k)
    _value_check(report, 'P(x)', outcome_probability(circuit, (x, n)), expected, tol)

    amplitude = interp_pure(circuit).value().reshape(-1)[x]
    closed = np.array([1, 0]) @ rotation(k * geometry.mu) @ np.array([-geometry.cos_half, geometry.sin_half])
    _value_check(report, 'final amplitude', amplitude.real, closed, tol)
    if k:
        step = grover_step(n, f)
        report.add('iterate equals unroll', equal_semantics(iterate(step, k - 1), unroll(step, k - 1), tol))
    return report


def grover_V(n, x):
    """V: [1] -> [n] sending |0⟩ to |x⟩ and |1⟩ to ν Σ_{y≠x} |y⟩."""
    nu = GroverGeometry.of(n).nu
    others = BooleanFunction.from_callable(n, 1, lambda y: int(y != x))
    weight = chain(green_spider(1, 1, 2), parallel(identity([1]), h_box(1, 1, 0, (nu,))))
    return (weight >> transpose(function_arrow(others))) @ scalar(n - 1)


def induction_identity_holds(n, tol=Tolerance()):
    """H ⊗ M(n-1) · E = E · M(n), the step that carries the rotation from n-1 to n qubits."""

    def m(j):
        r = math.sqrt(2 ** j)
        return np.array([[1 / r, (2 ** j - 1) / r], [1 / r, -1 / r]])

    had = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    embed = np.array([[1, 0], [0, 1], [0, 1], [0, 1]])
    return bool(np.allclose(np.kron(had, m(n - 1)) @ embed, embed @ m(n), rtol=tol.rel, atol=tol.abs))


def check_grover_lemma(n, x, tol=Tolerance()):
    x = _parse_word(x, n)
    geometry = GroverGeometry.of(n)
    report = AlgorithmReport('grover-lemma', {'n': n, 'x': _word(x, n)})
    v_diagram = grover_V(n, x)
    v = interp_pure(v_diagram).value()

    def close(a, b):
        return bool(np.allclose(a, b, rtol=tol.rel, atol=tol.abs))

    report.add('V matches its columns', close(v, geometry.isometry(x)))
    report.add('V|0⟩ = |x⟩', equal_semantics(basis_state(1, 0) >> v_diagram, basis_state(n, x), tol))
    uniform = interp_pure(chain(basis_state(n), hadamard(n))).value().reshape(-1)
    report.add('V(-cos μ/2, sin μ/2) is uniform',
               close(v @ np.array([-geometry.cos_half, geometry.sin_half]), uniform))
    report.add('V†V = 1', close(v.conj().T @ v, np.eye(2)))
    step = interp_pure(grover_step(n, BooleanFunction.point(n, x))).value()
    report.add('step ∘ V = V ∘ R(μ)', close(step @ v, v @ rotation(geometry.mu)))
    if n >= 2:
        report.add('induction identity', induction_identity_holds(n, tol))
    return report
