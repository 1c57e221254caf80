"""
Bundled derivations, built step by step with ``Derivation`` so anchors are
looked up on the running diagram instead of being written by hand.
"""
import math

from . import rules  # noqa: F401  registers the catalogue
from .errors import AnchorMismatch, UnknownName
from .oracles import (BooleanFunction, basis_state, diagonal_from_oracle, diagonal_oracle,
                      function_arrow, function_from_oracle, quantum_oracle)
from .prop import Port, chain, hadamard, identity, iterate, parallel, unroll
from .rewrite import Derivation
from .semantics import build_gate

DEFAULT_FUNCTION = BooleanFunction(2, 2, (1, 3, 0, 2))
DEFAULT_PREDICATE = BooleanFunction(2, 1, (0, 1, 1, 0))


def _table(f):
    return {'n': f.n, 'm': f.m, 'table': list(f.table)}


def _nodes(d, kind, n_in=None, n_out=None):
    found = []
    for nid, g in d.nodes.items():
        if g.kind != kind:
            continue
        if n_in is not None and len(g.input_widths) != n_in:
            continue
        if n_out is not None and len(g.output_widths) != n_out:
            continue
        found.append(nid)
    return found


def _one(d, kind, n_in=None, n_out=None):
    found = _nodes(d, kind, n_in, n_out)
    if len(found) != 1:
        raise LookupError(f"expected one {kind} node, found {found}")
    return found[0]


def _leg(d, node, target):
    """The port of ``node`` wired to node ``target`` or to the 'in'/'out' boundary."""
    for p in d.ports(node):
        q = d.neighbour(p)
        if isinstance(target, str):
            if q.is_boundary and q.side == target:
                return p
        elif q.node == target:
            return p
    raise LookupError(f"node {node} has no leg towards {target}")


def _downstream(d, node):
    """Node fed by the single output of ``node``."""
    return d.neighbour(Port(node, 'out', 0)).node


def oracle_involution(f=DEFAULT_FUNCTION):
    """U_f ∘ U_f rewritten to the identity."""
    n, m = f.n, f.m
    u = quantum_oracle(f)
    start = chain(u, u)
    d = Derivation('oracle-involution', start,
                   description="quantum oracles are involutions")
    greens = _nodes(start, 'green')
    reds = _nodes(start, 'red')
    arrows = _nodes(start, 'function')

    fused = d.apply('fusion.green', {'w': n, 'n1': 1, 'm1': 2, 'n2': 1, 'm2': 2},
                    {0: greens[0], 1: greens[1]})[0]
    merged = d.apply('fusion.red', {'w': m, 'n1': 2, 'm1': 1, 'n2': 2, 'm2': 1},
                     {0: reds[0], 1: reds[1]})[0]

    now = d.current
    ports = {Port(0, 'in', 0): Port(fused, 'in', 0),
             Port(0, 'out', 0): _leg(now, fused, 'out'),
             Port(0, 'out', 1): _leg(now, fused, arrows[0]),
             Port(0, 'out', 2): _leg(now, fused, arrows[1])}
    split = d.apply('fusion.green', {'w': n, 'n1': 1, 'm1': 2, 'n2': 1, 'm2': 2},
                    {'nodes': {0: fused}, 'ports': ports}, 'backward', note="unfuse the copies feeding the arrows")
    outer, inner = split[0], split[1]

    placed = d.apply('fn.copy', {'f': _table(f)}, {0: inner, 1: arrows[0], 2: arrows[1]}, 'backward')
    arrow, copier = placed[0], placed[1]

    now = d.current
    from_copier = now.ports_towards(merged, copier)
    ports = {Port(0, 'in', 0): from_copier[0], Port(0, 'in', 1): from_copier[1],
             Port(0, 'in', 2): _leg(now, merged, 'in'), Port(0, 'out', 0): Port(merged, 'out', 0)}
    split = d.apply('fusion.red', {'w': m, 'n1': 2, 'm1': 1, 'n2': 2, 'm2': 1},
                    {'nodes': {0: merged}, 'ports': ports}, 'backward', note="unfuse the merge of the copies")
    parity, xor = split[0], split[1]

    placed = d.apply('hopf', {'w': m}, {0: copier, 1: parity})
    eraser, zero = placed[0], placed[1]
    wire = d.apply('fusion.red', {'w': m, 'n1': 0, 'm1': 1, 'n2': 2, 'm2': 1}, {0: zero, 1: xor})[0]
    d.apply('spider.identity', {'color': 'red', 'w': m}, {0: wire})
    erased = d.apply('fn.erase', {'f': _table(f)}, {0: arrow, 1: eraser})[0]
    wire = d.apply('fusion.green', {'w': n, 'n1': 1, 'm1': 2, 'n2': 1, 'm2': 0}, {0: outer, 1: erased})[0]
    d.apply('spider.identity', {'color': 'green', 'w': n}, {0: wire})
    return d.script(identity([n, m]))


def _diagonalise(d):
    """Copy the ⟨−| effect through the XOR, fuse it with |−⟩ and cancel the scalar."""
    now = d.current
    xor = _one(now, 'red', n_in=2)
    effect = _downstream(now, xor)
    copies = d.apply('copy', {'color': 'green', 'w': 1, 'bits': [1], 'kind': 'effect'}, {0: xor, 1: effect})
    now = d.current
    state = next(nid for nid in _nodes(now, 'green', n_in=0, n_out=1)
                 if now.neighbour(Port(nid, 'out', 0)).node in copies.values())
    paired = now.neighbour(Port(state, 'out', 0)).node
    loop = d.apply('fusion.green', {'w': 1, 'n1': 0, 'm1': 1, 'n2': 1, 'm2': 0,
                                    'alpha': [math.pi], 'beta': [math.pi]}, {0: state, 1: paired})[0]
    stars = _nodes(d.current, 'star')[-2:]
    d.apply('scalar.inverse', {}, {0: loop, 1: stars[0], 2: stars[1]})
    kept = next(i for i in copies.values() if i != paired)
    return kept


def diagonal_oracle_chain(f=DEFAULT_PREDICATE):
    """The ancilla construction of the diagonal oracle rewritten to the direct one."""
    d = Derivation('diagonal-oracle', diagonal_from_oracle(f),
                   description="the diagonal oracle from the oracle with a |−⟩ ancilla")
    _diagonalise(d)
    return d.script(diagonal_oracle(f))


def function_from_oracle_chain(f=DEFAULT_FUNCTION):
    """The ancilla construction of the function arrow rewritten to the arrow."""
    start = function_from_oracle(f)
    d = Derivation('function-from-oracle', start,
                   description="the function recovered from its oracle with ancillas")
    zero = _one(start, 'red', n_in=0)
    xor = _one(start, 'red', n_in=2)
    wire = d.apply('fusion.red', {'w': f.m, 'n1': 0, 'm1': 1, 'n2': 2, 'm2': 1}, {0: zero, 1: xor})[0]
    d.apply('spider.identity', {'color': 'red', 'w': f.m}, {0: wire})
    copier = _one(start, 'green', n_out=2)
    eraser = _one(start, 'green', n_out=0)
    wire = d.apply('fusion.green', {'w': f.n, 'n1': 1, 'm1': 2, 'n2': 1, 'm2': 0}, {0: copier, 1: eraser})[0]
    d.apply('spider.identity', {'color': 'green', 'w': f.n}, {0: wire})
    return d.script(function_arrow(f))


def _bits(word):
    return [int(b) for b in word]


def bv_derivation(s='101', claimed=None):
    """
    The post-selected Bernstein-Vazirani circuit rewritten to |s⟩. ``claimed``
    is the vector admitted by the linearity promise; it defaults to ``s``.
    """
    claimed = s if claimed is None else claimed
    n = len(s)
    f = BooleanFunction.linear(s)
    start = chain(basis_state(n), hadamard(n), diagonal_from_oracle(f), hadamard(n))
    d = Derivation('bv', start, oracle_axioms=('promise.linear',),
                   description="Bernstein-Vazirani outputs the hidden vector")
    effect = _diagonalise(d)

    arrow = _one(d.current, 'function')
    row = d.apply('promise.linear', {'f': _table(f), 's': _bits(claimed)}, {0: arrow})[0]
    pulled = d.apply('red.transpose-phase', {'A': [_bits(claimed)], 'b': [1]}, {0: row, 1: effect})[0]

    now = d.current
    zero = _one(now, 'red', n_in=0)
    first_h = _downstream(now, zero)
    plus = d.apply('interact.h-red', {'color': 'red', 'w': n, 'n': 0, 'm': 1}, {0: zero, 1: first_h})[0]
    copier = _downstream(d.current, plus)
    pair = d.apply('fusion.green', {'w': n, 'n1': 0, 'm1': 1, 'n2': 1, 'm2': 2}, {0: plus, 1: copier})[0]
    phases = [math.pi * b for b in _bits(claimed)]
    state = d.apply('fusion.green', {'w': n, 'n1': 0, 'm1': 2, 'n2': 1, 'm2': 0, 'beta': phases},
                    {0: pair, 1: pulled})[0]
    last_h = _downstream(d.current, state)
    d.apply('interact.h-red', {'color': 'green', 'w': n, 'n': 0, 'm': 1, 'phases': phases},
            {0: state, 1: last_h})
    return d.script(basis_state(n, int(claimed, 2)))


def _cnot_h():
    return chain(parallel(hadamard(1), identity([1])), build_gate('CNot'))


BODIES = {'cnot-h': _cnot_h}


def iteration_body(name):
    """A gate name or one of ``BODIES``."""
    if name in BODIES:
        return BODIES[name]()
    return build_gate(name)


def _split_thickened(d, copies):
    """One arachnid per copy in place of every thickened arachnid."""
    for nid, g in list(d.current.nodes.items()):
        if not g.is_arachnid or g.width % copies:
            continue
        width = g.width // copies
        if g.kind == 'hbox':
            if any(x != -1 for x in g.labels):
                continue
            phases = [-1.0] * width
        else:
            phases = list(g.phases[:width])
        d.apply('thicken.dist', {'color': g.kind, 'k': width, 'l': copies, 'n': g.n_in, 'm': g.n_out,
                                 'phases': phases}, {0: nid})


def _wiring_redexes(diagram):
    """Swap nodes, and divider/gatherer pairs that cancel."""
    for nid, g in diagram.nodes.items():
        if g.kind == 'swap':
            yield 'swap.wires', {'a': g.a, 'b': g.b}, {0: nid}
        elif g.kind == 'gatherer':
            q = diagram.neighbour(Port(nid, 'out', 0))
            if q is None or q.is_boundary or q.side != 'in':
                continue
            other = diagram.nodes[q.node]
            if other.kind == 'divider' and other.n == g.n:
                yield 'gath-div.inverse', {'n': g.n}, {0: nid, 1: q.node}
        elif g.kind == 'divider':
            heads = [diagram.neighbour(Port(nid, 'out', j)) for j in (0, 1)]
            if any(q is None or q.is_boundary for q in heads) or heads[0].node != heads[1].node:
                continue
            other = diagram.nodes[heads[0].node]
            if other.kind == 'gatherer' and other.n == g.n and [q.index for q in heads] == [0, 1]:
                yield 'div-gath.inverse', {'n': g.n}, {0: nid, 1: heads[0].node}


def _dissolve_wiring(d):
    """Apply the wiring rules until none of them fits."""
    progress = True
    while progress:
        progress = False
        for rule, params, anchor in list(_wiring_redexes(d.current)):
            try:
                d.apply(rule, params, anchor)
            except AnchorMismatch:
                continue
            progress = True
            break


def iteration_induction(body='cnot-h', k=2):
    """
    iterate(f, k) rewritten to k+1 sequential copies of f. The thickened
    arachnids split into one arachnid per copy, then the rewirings and the
    shift permutation dissolve into plain wires through the trace.
    """
    f = iteration_body(body)
    d = Derivation('iteration', iterate(f, k), description="the iteration construction repeats its body")
    if k:
        _split_thickened(d, k + 1)
    _dissolve_wiring(d)
    return d.script(unroll(f, k))


BUNDLED = {
    'oracle-involution': oracle_involution,
    'diagonal-oracle': diagonal_oracle_chain,
    'function-from-oracle': function_from_oracle_chain,
    'bv': bv_derivation,
    'iteration': iteration_induction,
}


def bundled(name):
    try:
        return BUNDLED[name]()
    except KeyError:
        raise UnknownName(f"no bundled proof {name!r}; expected one of {', '.join(BUNDLED)}") from None
