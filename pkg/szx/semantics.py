"""
Interpretation of diagrams as matrices and superoperators.

A pure diagram is evaluated by stripping it to width-1 wires and contracting
the resulting tensor network. Scale factors are tracked exactly as an
integer exponent ``p`` meaning 2^(p/4): the generators' normalisations are
all quarter powers of two.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import prop
from .errors import NotPure, TypeMismatch, UnknownName
from .prop import (Arrow, Discard, HBox, Identity, Mix, Spider, Star, chain, generator,
                   green_spider, h_box, identity, parallel, red_spider, star, strip, swap)

logger = logging.getLogger(__name__)

HADAMARD_UNSCALED = np.array([[1, 1], [1, -1]], dtype=complex)
DELTA = np.eye(2, dtype=complex)
# Above this many superoperator entries equality is decided on the pure maps.
DENSE_CPM_LIMIT = 1 << 22


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs <= 0 or self.rel <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True, eq=False)
class Matrix:
    """entries scaled by 2^(exponent/4); rows index outputs, columns inputs."""

    entries: np.ndarray
    exponent: int = 0

    @property
    def shape(self):
        return self.entries.shape

    def value(self):
        return self.entries * 2.0 ** (self.exponent / 4)

    def doubled(self):
        return Superoperator(np.kron(self.entries, np.conj(self.entries)), 2 * self.exponent)


@dataclass(frozen=True, eq=False)
class Superoperator(Matrix):
    """
    Action on vectorised density matrices. vec is row-major, so the doubling
    of a pure V is V ⊗ conj(V) and rows are indexed by (plain, conjugate).
    """

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        out = self.value() @ rho.reshape(-1)
        d = math.isqrt(out.shape[0])
        return out.reshape(d, d)

    def density(self):
        """The density matrix of a state (no inputs)."""
        return self.apply(np.ones((1, 1)))


# ---------------------------------------------------------------------------
# Width-1 generator tensors
# ---------------------------------------------------------------------------
def _bits(value, length):
    return tuple((value >> (length - 1 - j)) & 1 for j in range(length))


def _green(legs, alpha):
    if legs == 0:
        return np.array(1 + np.exp(1j * alpha)), -2
    t = np.zeros((2,) * legs, dtype=complex)
    t[(0,) * legs] = 1
    t[(1,) * legs] = np.exp(1j * alpha)
    return t, legs - 2


def _red(legs, alpha):
    t, exponent = _green(legs, alpha)
    for axis in range(legs):
        t = np.moveaxis(np.tensordot(HADAMARD_UNSCALED, t, axes=([1], [axis])), 0, axis)
    return t, exponent - 2 * legs


def _hbox(legs, label):
    if legs == 0:
        return np.array(complex(label)), 0
    t = np.ones((2,) * legs, dtype=complex)
    t[(1,) * legs] = label
    return t, -legs


def _arrow(g):
    n, m = g.n, g.m
    t = np.zeros((2,) * (n + m), dtype=complex)
    for x in range(2 ** n):
        t[_bits(x, n) + _bits(g.apply(x), m)] = 1
    return t, m - n


def node_tensor(g):
    """Tensor (axes: inputs then outputs) and exponent of a width-1 generator."""
    if isinstance(g, Spider):
        legs = g.n_in + g.n_out
        return _green(legs, g.phases[0]) if g.color == 'green' else _red(legs, g.phases[0])
    if isinstance(g, HBox):
        return _hbox(g.n_in + g.n_out, g.labels[0])
    if isinstance(g, Identity):
        return DELTA, 0
    if isinstance(g, Star):
        return np.array(1.0 + 0j), -1
    if isinstance(g, Arrow):
        return _arrow(g)
    raise NotPure(f"{g.kind} has no pure interpretation")


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------
def _self_trace(t, labels):
    if len(set(labels)) == len(labels):
        return t, labels
    local = {x: i for i, x in enumerate(dict.fromkeys(labels))}
    keep = [x for x in dict.fromkeys(labels) if labels.count(x) == 1]
    t = np.einsum(t, [local[x] for x in labels], [local[x] for x in keep])
    return t, keep


def _pair(a, b):
    (ta, la), (tb, lb) = a, b
    shared = set(la) & set(lb)
    out = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
    local = {x: i for i, x in enumerate(dict.fromkeys(la + lb))}
    t = np.einsum(ta, [local[x] for x in la], tb, [local[x] for x in lb], [local[x] for x in out])
    return t, out


def contract(items, order):
    """
    Contract (tensor, labels) pairs greedily; labels shared by two tensors are
    summed. Returns the tensor with axes in ``order``.
    """
    pool, owner = {}, defaultdict(set)
    for key, (t, labels) in enumerate(items):
        t, labels = _self_trace(np.asarray(t), list(labels))
        pool[key] = (t, labels)
        for x in labels:
            owner[x].add(key)
    next_key = len(pool)
    while len(pool) > 1:
        best = None
        for x, keys in owner.items():
            if len(keys) != 2:
                continue
            i, j = sorted(keys)
            la, lb = pool[i][1], pool[j][1]
            rank = len(set(la) ^ set(lb))
            cost = 2 ** rank - 2 ** len(la) - 2 ** len(lb)
            if best is None or cost < best[0]:
                best = (cost, i, j)
        if best is None:
            i, j = sorted(pool, key=lambda k: len(pool[k][1]))[:2]
        else:
            _, i, j = best
        a, b = pool.pop(i), pool.pop(j)
        for x in a[1] + b[1]:
            owner[x].discard(i)
            owner[x].discard(j)
            if not owner[x]:
                del owner[x]
        merged = _pair(a, b)
        pool[next_key] = merged
        for x in merged[1]:
            owner[x].add(next_key)
        next_key += 1
    if not pool:
        return np.array(1.0 + 0j)
    t, labels = pool.popitem()[1]
    if sorted(labels, key=repr) != sorted(order, key=repr):
        raise ValueError("contraction left unexpected open legs")
    return np.transpose(t, [labels.index(x) for x in order]) if order else t


def _network(d, doubled):
    s = strip(d)
    copies = (0, 1) if doubled else (0,)

    def boundary_label(p, c):
        return ('out' if p.side == 'out' else 'in', p.index, c)

    labels = {}
    items = []
    exponent = 0
    for idx, w in enumerate(s.wires):
        if w.a.is_boundary and w.b.is_boundary:
            for c in copies:
                items.append((DELTA, [boundary_label(w.a, c), boundary_label(w.b, c)]))
            continue
        for p in (w.a, w.b):
            if p.is_boundary:
                continue
            other = w.other(p)
            labels[p] = (lambda c, o=other: boundary_label(o, c)) if other.is_boundary \
                else (lambda c, i=idx: ('wire', i, c))

    for nid, g in s.nodes.items():
        ports = s.ports(nid)
        if isinstance(g, (Discard, Mix)):
            items.append((DELTA, [labels[ports[0]](0), labels[ports[0]](1)]))
            continue
        t, p = node_tensor(g)
        for c in copies:
            items.append((np.conj(t) if c else t, [labels[q](c) for q in ports]))
            exponent += p

    n_in, n_out = len(s.inputs), len(s.outputs)
    order = [('out', j, c) for c in copies for j in range(n_out)]
    order += [('in', i, c) for c in copies for i in range(n_in)]
    t = contract(items, order)
    rows = 2 ** (n_out * len(copies))
    return np.asarray(t, dtype=complex).reshape(rows, -1), exponent


def interp_pure(d):
    """V such that the diagram denotes ρ ↦ VρV†."""
    if not d.is_pure:
        raise NotPure("diagram contains discard or mix nodes")
    entries, exponent = _network(d, doubled=False)
    entries = entries.reshape(2 ** d.outputs.size, 2 ** d.inputs.size)
    return Matrix(entries, exponent)


def interp_cpm(d):
    if d.is_pure:
        return interp_pure(d).doubled()
    entries, exponent = _network(d, doubled=True)
    entries = entries.reshape(4 ** d.outputs.size, 4 ** d.inputs.size)
    return Superoperator(entries, exponent)


def _close(a, b, tol):
    return bool(np.allclose(a, b, rtol=tol.rel, atol=tol.abs))


def equal_semantics(d1, d2, tol=Tolerance()):
    """Entrywise comparison of the CPM interpretations (scalars included)."""
    if d1.inputs.size != d2.inputs.size or d1.outputs.size != d2.outputs.size:
        raise TypeMismatch(f"cannot compare {d1.inputs}->{d1.outputs} with {d2.inputs}->{d2.outputs}")
    if d1.is_pure and d2.is_pure:
        v1, v2 = interp_pure(d1).value(), interp_pure(d2).value()
        if v1.size * v1.size <= DENSE_CPM_LIMIT:
            return _close(np.kron(v1, np.conj(v1)), np.kron(v2, np.conj(v2)), tol)
        return _equal_up_to_phase(v1, v2, tol)
    return _close(interp_cpm(d1).value(), interp_cpm(d2).value(), tol)


def _equal_up_to_phase(v1, v2, tol):
    pivot = np.unravel_index(np.argmax(np.abs(v2)), v2.shape)
    if abs(v2[pivot]) <= tol.abs:
        return _close(v1, v2, tol)
    ratio = v1[pivot] / v2[pivot]
    if abs(abs(ratio) - 1) > tol.rel + tol.abs:
        return False
    return _close(v1, ratio * v2, tol)


def direct_arachnid_matrix(g):
    """
    Matrix of a spider or H-box of any width straight from the closed-form
    amplitude formulas, bypassing stripping.
    """
    k, n, m = g.width, g.n_in, g.n_out
    rows, cols = 2 ** (k * m), 2 ** (k * n)
    entries = np.zeros((rows, cols), dtype=complex)
    for r in range(rows):
        for c in range(cols):
            legs = [_bits(w, k) for w in _split(r, k, m) + _split(c, k, n)]
            column = [[leg[j] for leg in legs] for j in range(k)]
            if isinstance(g, HBox):
                entries[r, c] = np.prod([g.labels[j] ** int(all(column[j])) for j in range(k)])
            elif g.color == 'green':
                if all(len(set(col)) <= 1 for col in column):
                    x = [col[0] if col else 0 for col in column]
                    entries[r, c] = np.exp(1j * sum(a * b for a, b in zip(g.phases, x))) if legs \
                        else np.prod([1 + np.exp(1j * a) for a in g.phases])
            else:
                entries[r, c] = np.prod([(1 + np.exp(1j * (g.phases[j] + math.pi * sum(column[j])))) / 2
                                         for j in range(k)])
    if isinstance(g, HBox):
        exponent = -k * (n + m)
    elif g.color == 'green':
        exponent = k * (n + m - 2)
    else:
        exponent = k * (2 - n - m)
    return Matrix(entries, exponent)


def _split(word, width, count):
    return [(word >> (width * (count - 1 - i))) & ((1 << width) - 1) for i in range(count)]


def choi_matrix(superop, n_in):
    """Choi matrix Σ E(|i⟩⟨j|) ⊗ |i⟩⟨j| of a superoperator with ``n_in`` input qubits."""
    d_in = 2 ** n_in
    value = superop.value()
    d_out = math.isqrt(value.shape[0])
    choi = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=complex)
            unit[i, j] = 1
            image = (value @ unit.reshape(-1)).reshape(d_out, d_out)
            choi += np.kron(image, unit)
    return choi


def is_completely_positive(superop, n_in, tol=Tolerance()):
    choi = choi_matrix(superop, n_in)
    if not np.allclose(choi, choi.conj().T, atol=tol.abs):
        return False
    return bool(np.linalg.eigvalsh(choi).min() >= -tol.abs * max(1.0, np.abs(choi).max()))


# ---------------------------------------------------------------------------
# Gate and state tables
# ---------------------------------------------------------------------------
def _toffoli():
    return chain(parallel(prop.gather(2), identity([1])),
                 parallel(green_spider(2, 1, 2), identity([1])),
                 parallel(identity([2]), generator(prop.FunctionArrow(2, 1, (0, 0, 0, 1))), identity([1])),
                 parallel(identity([2]), red_spider(1, 2, 1)),
                 parallel(prop.divide(2), identity([1])))


GATES = {
    'H': lambda: prop.hadamard(1),
    'Not': lambda: red_spider(1, 1, 1, (math.pi,)),
    'Z': lambda: green_spider(1, 1, 1, (math.pi,)),
    'Swap': lambda: swap([1], [1]),
    'CNot': lambda: chain(parallel(green_spider(1, 1, 2), identity([1])),
                          parallel(identity([1]), red_spider(1, 2, 1))),
    'CZ': lambda: chain(parallel(green_spider(1, 1, 2), green_spider(1, 1, 2)),
                        parallel(identity([1]), h_box(1, 2, 0), identity([1]))),
    'Toffoli': _toffoli,
}

STATES = {
    '0': lambda: red_spider(1, 0, 1) @ star(),
    '1': lambda: red_spider(1, 0, 1, (math.pi,)) @ star(),
    '+': lambda: green_spider(1, 0, 1) @ star(),
    '-': lambda: green_spider(1, 0, 1, (math.pi,)) @ star(),
}
STATES['−'] = STATES['-']


def build_gate(name):
    try:
        return GATES[name]()
    except KeyError:
        raise UnknownName(f"unknown gate {name!r}; expected one of {', '.join(GATES)}") from None


def build_state(name):
    try:
        return STATES[name]()
    except KeyError:
        raise UnknownName(f"unknown state {name!r}; expected one of 0, 1, +, -") from None


def basis_word(bits):
    """Accept '0110', a list of bits, or (value, length)."""
    if isinstance(bits, str):
        return int(bits, 2) if bits else 0, len(bits)
    if isinstance(bits, tuple) and len(bits) == 2 and isinstance(bits[1], int) and not isinstance(bits[0], (list, tuple)):
        return bits
    bits = list(bits)
    return int(''.join(str(int(b)) for b in bits) or '0', 2), len(bits)


def outcome_probability(state, bits):
    """⟨x|ρ|x⟩ for the state ρ denoted by ``state``."""
    x, length = basis_word(bits)
    if len(state.inputs):
        raise TypeMismatch("outcome_probability needs a diagram without inputs")
    if state.outputs.size != length:
        raise TypeMismatch(f"state has {state.outputs.size} qubits, effect has {length}")
    if state.is_pure:
        v = interp_pure(state).value()
        return float(abs(v[x, 0]) ** 2)
    rho = interp_cpm(state).density()
    return float(rho[x, x].real)
