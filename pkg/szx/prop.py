"""
Diagram IR for the scalable ZX/ZH calculus.

Diagrams are open port-graphs: nodes carry a generator, wires join two
endpoints (a node port or a boundary slot) and carry a width. Composition is
graph gluing; the scalable-notation functors (boxing, thickening, wire
stripping, rewiring, iteration) are built on top of it.

Conventions:
    * a wire of width n holds n qubits, the first one is the most significant
      bit of the basis word;
    * thickening is copy-major: T_k([n]) = [kn] with qubit t*n + p holding
      copy t, position p.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property, reduce
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import SizeMismatch, TypeMismatch, ValidationFailed

logger = logging.getLogger(__name__)

BOUNDARY = -1
TWO_PI = 2 * math.pi
PHASE_TOLERANCE = 1e-9


def normalize_phase(angle):
    """Bring an angle into [0, 2π)."""
    angle = math.fmod(float(angle), TWO_PI)
    if angle < 0:
        angle += TWO_PI
    if TWO_PI - angle < 1e-12:
        angle = 0.0
    return angle


def phases_close(a, b, tol=PHASE_TOLERANCE):
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        d = abs(normalize_phase(x) - normalize_phase(y))
        if min(d, TWO_PI - d) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class TypeList:
    """Boundary type: an ordered sequence of wire widths ([n] colours)."""

    widths: tuple = ()

    def __post_init__(self):
        widths = tuple(int(w) for w in self.widths)
        if any(w < 1 for w in widths):
            raise ValueError(f"wire widths must be positive, got {widths}")
        object.__setattr__(self, 'widths', widths)

    @classmethod
    def of(cls, value):
        if isinstance(value, TypeList):
            return value
        if isinstance(value, int):
            return cls((value,))
        return cls(tuple(value))

    @property
    def size(self):
        return sum(self.widths)

    def scaled(self, k):
        return TypeList(tuple(w * k for w in self.widths))

    def __add__(self, other):
        return TypeList(self.widths + TypeList.of(other).widths)

    def __len__(self):
        return len(self.widths)

    def __iter__(self):
        return iter(self.widths)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return TypeList(self.widths[item])
        return self.widths[item]

    def __str__(self):
        return '[' + ','.join(str(w) for w in self.widths) + ']'


def ones(n):
    return TypeList((1,) * n)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------
class Generator:
    """Common interface of node labels."""

    kind = 'generator'
    is_wiring = False
    is_arachnid = False
    is_pure = True

    @property
    def input_widths(self):
        raise NotImplementedError

    @property
    def output_widths(self):
        raise NotImplementedError

    def port_width(self, side, index):
        widths = self.input_widths if side == 'in' else self.output_widths
        return widths[index]

    def thickened(self, k):
        raise NotImplementedError

    def stripped(self):
        """Width-1 parts and the map (side, index, t) -> (part, side, index)."""
        raise NotImplementedError

    def internal_links(self):
        """Sub-wire links of wiring generators, as ((side, i, t), (side, i, t)) pairs."""
        return []

    def matches(self, other):
        return self == other

    def problems(self):
        return []


@dataclass(frozen=True)
class Spider(Generator):
    """Green or red spider [k]^n -> [k]^m indexed by a phase vector."""

    color: str
    width: int
    n_in: int
    n_out: int
    phases: tuple = ()

    is_arachnid = True

    def __post_init__(self):
        phases = tuple(self.phases) or (0.0,) * self.width
        object.__setattr__(self, 'phases', tuple(normalize_phase(a) for a in phases))

    @property
    def kind(self):
        return self.color

    @property
    def input_widths(self):
        return (self.width,) * self.n_in

    @property
    def output_widths(self):
        return (self.width,) * self.n_out

    def thickened(self, k):
        return replace(self, width=self.width * k, phases=self.phases * k)

    def stripped(self):
        parts = [Spider(self.color, 1, self.n_in, self.n_out, (a,)) for a in self.phases]
        return parts, lambda side, index, t: (t, side, index)

    def matches(self, other):
        return (isinstance(other, Spider) and other.color == self.color
                and other.width == self.width and other.n_in == self.n_in
                and other.n_out == self.n_out and phases_close(self.phases, other.phases))

    def problems(self):
        issues = []
        if self.color not in ('green', 'red'):
            issues.append(f"unknown spider colour {self.color!r}")
        if len(self.phases) != self.width:
            issues.append(f"phase vector of length {len(self.phases)} on width {self.width}")
        return issues


@dataclass(frozen=True)
class HBox(Generator):
    """Yellow harvestman [k]^n -> [k]^m indexed by a complex label vector."""

    width: int
    n_in: int
    n_out: int
    labels: tuple = ()

    kind = 'hbox'
    is_arachnid = True

    def __post_init__(self):
        labels = tuple(self.labels) or (-1,) * self.width
        object.__setattr__(self, 'labels', tuple(complex(x) for x in labels))

    @property
    def input_widths(self):
        return (self.width,) * self.n_in

    @property
    def output_widths(self):
        return (self.width,) * self.n_out

    def thickened(self, k):
        return replace(self, width=self.width * k, labels=self.labels * k)

    def stripped(self):
        parts = [HBox(1, self.n_in, self.n_out, (x,)) for x in self.labels]
        return parts, lambda side, index, t: (t, side, index)

    def matches(self, other):
        return (isinstance(other, HBox) and other.width == self.width
                and other.n_in == self.n_in and other.n_out == self.n_out
                and len(other.labels) == len(self.labels)
                and all(abs(a - b) <= PHASE_TOLERANCE for a, b in zip(self.labels, other.labels)))

    def problems(self):
        if len(self.labels) != self.width:
            return [f"label vector of length {len(self.labels)} on width {self.width}"]
        return []


@dataclass(frozen=True)
class Divider(Generator):
    """[n+1] -> [1] ⊗ [n]"""

    n: int

    kind = 'divider'
    is_wiring = True

    @property
    def input_widths(self):
        return (self.n + 1,)

    @property
    def output_widths(self):
        return (1, self.n)

    def internal_links(self):
        links = [(('in', 0, 0), ('out', 0, 0))]
        links += [(('in', 0, t), ('out', 1, t - 1)) for t in range(1, self.n + 1)]
        return links


@dataclass(frozen=True)
class Gatherer(Generator):
    """[1] ⊗ [n] -> [n+1]"""

    n: int

    kind = 'gatherer'
    is_wiring = True

    @property
    def input_widths(self):
        return (1, self.n)

    @property
    def output_widths(self):
        return (self.n + 1,)

    def internal_links(self):
        links = [(('in', 0, 0), ('out', 0, 0))]
        links += [(('in', 1, t), ('out', 0, t + 1)) for t in range(self.n)]
        return links


@dataclass(frozen=True)
class Swap(Generator):
    a: int
    b: int

    kind = 'swap'
    is_wiring = True

    @property
    def input_widths(self):
        return (self.a, self.b)

    @property
    def output_widths(self):
        return (self.b, self.a)

    def thickened(self, k):
        return Swap(self.a * k, self.b * k)

    def internal_links(self):
        links = [(('in', 0, t), ('out', 1, t)) for t in range(self.a)]
        links += [(('in', 1, t), ('out', 0, t)) for t in range(self.b)]
        return links


@dataclass(frozen=True)
class Cup(Generator):
    n: int

    kind = 'cup'
    is_wiring = True

    @property
    def input_widths(self):
        return ()

    @property
    def output_widths(self):
        return (self.n, self.n)

    def thickened(self, k):
        return Cup(self.n * k)

    def internal_links(self):
        return [(('out', 0, t), ('out', 1, t)) for t in range(self.n)]


@dataclass(frozen=True)
class Cap(Generator):
    n: int

    kind = 'cap'
    is_wiring = True

    @property
    def input_widths(self):
        return (self.n, self.n)

    @property
    def output_widths(self):
        return ()

    def thickened(self, k):
        return Cap(self.n * k)

    def internal_links(self):
        return [(('in', 0, t), ('in', 1, t)) for t in range(self.n)]


@dataclass(frozen=True)
class Identity(Generator):
    """Explicit identity node; a closed wire loop is an Identity wired to itself."""

    n: int

    kind = 'identity'

    @property
    def input_widths(self):
        return (self.n,)

    @property
    def output_widths(self):
        return (self.n,)

    def thickened(self, k):
        return Identity(self.n * k)

    def stripped(self):
        return [Identity(1) for _ in range(self.n)], lambda side, index, t: (t, side, 0)


@dataclass(frozen=True)
class Discard(Generator):
    n: int

    kind = 'discard'
    is_pure = False

    @property
    def input_widths(self):
        return (self.n,)

    @property
    def output_widths(self):
        return ()

    def thickened(self, k):
        return Discard(self.n * k)

    def stripped(self):
        return [Discard(1) for _ in range(self.n)], lambda side, index, t: (t, side, 0)


@dataclass(frozen=True)
class Mix(Generator):
    n: int

    kind = 'mix'
    is_pure = False

    @property
    def input_widths(self):
        return ()

    @property
    def output_widths(self):
        return (self.n,)

    def thickened(self, k):
        return Mix(self.n * k)

    def stripped(self):
        return [Mix(1) for _ in range(self.n)], lambda side, index, t: (t, side, 0)


@dataclass(frozen=True)
class Star(Generator):
    """The scalar ★, ⟦★⟧ = 1/√2."""

    kind = 'star'

    @property
    def input_widths(self):
        return ()

    @property
    def output_widths(self):
        return ()

    def stripped(self):
        return [self], None


def _bits(value, length):
    return [(value >> (length - 1 - j)) & 1 for j in range(length)]


def _word(bits):
    value = 0
    for bit in bits:
        value = (value << 1) | (int(bit) & 1)
    return value


class Arrow(Generator):
    """
    Shared behaviour of function and matrix arrows.

    A plain arrow has ports [copies*n] -> [copies*m] (copy-major blocks);
    a fanned arrow has n input and m output wires, each of width ``copies``.
    """

    is_arrow = True

    @property
    def input_widths(self):
        if self.fanned:
            return (self.copies,) * self.n
        return (self.copies * self.n,)

    @property
    def output_widths(self):
        if self.fanned:
            return (self.copies,) * self.m
        return (self.copies * self.m,)

    def apply(self, x):
        raise NotImplementedError

    @cached_property
    def table(self):
        return tuple(self.apply(x) for x in range(2 ** self.n))

    def thickened(self, k):
        return replace(self, copies=self.copies * k)

    def stripped(self):
        parts = [replace(self, copies=1, fanned=True) for _ in range(self.copies)]
        if self.fanned:
            return parts, lambda side, index, t: (t, side, index)
        n, m = self.n, self.m

        def atom(side, index, t):
            u, q = divmod(t, n if side == 'in' else m)
            return u, side, q
        return parts, atom


@dataclass(frozen=True)
class FunctionArrow(Arrow):
    n: int
    m: int
    values: tuple
    copies: int = 1
    fanned: bool = False

    kind = 'function'

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(int(v) for v in self.values))

    def apply(self, x):
        return self.values[x]

    def problems(self):
        issues = []
        if len(self.values) != 2 ** self.n:
            issues.append(f"function table has {len(self.values)} entries, expected {2 ** self.n}")
        if any(v < 0 or v >= 2 ** self.m for v in self.values):
            issues.append("function table value out of range")
        return issues


def _matrix(rows):
    return tuple(tuple(int(b) & 1 for b in row) for row in rows)


@dataclass(frozen=True)
class RedMatrixArrow(Arrow):
    """GF(2)-linear arrow y = A x."""

    matrix: tuple
    copies: int = 1
    fanned: bool = False

    kind = 'red_arrow'

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _matrix(self.matrix))

    @property
    def m(self):
        return len(self.matrix)

    @property
    def n(self):
        return len(self.matrix[0]) if self.matrix else 0

    def apply(self, x):
        bits = _bits(x, self.n)
        return _word(sum(a * b for a, b in zip(row, bits)) % 2 for row in self.matrix)

    def problems(self):
        if not self.matrix or any(len(row) != self.n for row in self.matrix):
            return ["matrix rows must be non-empty and of equal length"]
        return []


@dataclass(frozen=True)
class YellowMatrixArrow(Arrow):
    """Boolean-semiring arrow: y_i = AND of x_j over the ones of row i."""

    matrix: tuple
    copies: int = 1
    fanned: bool = False

    kind = 'yellow_arrow'

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _matrix(self.matrix))

    @property
    def m(self):
        return len(self.matrix)

    @property
    def n(self):
        return len(self.matrix[0]) if self.matrix else 0

    def apply(self, x):
        bits = _bits(x, self.n)
        return _word(int(all(b for a, b in zip(row, bits) if a)) for row in self.matrix)

    def problems(self):
        if not self.matrix or any(len(row) != self.n for row in self.matrix):
            return ["matrix rows must be non-empty and of equal length"]
        return []


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------
@dataclass(frozen=True, order=True)
class Port:
    """A node port, or a boundary slot when ``node`` is BOUNDARY."""

    node: int
    side: str
    index: int

    @property
    def is_boundary(self):
        return self.node == BOUNDARY

    def __str__(self):
        if self.is_boundary:
            return f"{self.side}[{self.index}]"
        return f"{self.node}.{self.side}[{self.index}]"


def inp(index):
    return Port(BOUNDARY, 'in', index)


def outp(index):
    return Port(BOUNDARY, 'out', index)


@dataclass(frozen=True, order=True)
class Wire:
    a: Port
    b: Port
    width: int

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, 'a', a)
            object.__setattr__(self, 'b', b)

    def other(self, port):
        return self.b if port == self.a else self.a


@dataclass(frozen=True, eq=False)
class Diagram:
    """An immutable open graph with ordered input/output boundaries."""

    inputs: TypeList
    outputs: TypeList
    nodes: Mapping = field(default_factory=dict)
    wires: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'inputs', TypeList.of(self.inputs))
        object.__setattr__(self, 'outputs', TypeList.of(self.outputs))
        object.__setattr__(self, 'nodes', dict(sorted(self.nodes.items())))
        object.__setattr__(self, 'wires', tuple(sorted(self.wires)))

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self.inputs == other.inputs and self.outputs == other.outputs
                and self.nodes == other.nodes and self.wires == other.wires)

    __hash__ = None

    def __rshift__(self, other):
        return compose(self, other)

    def __matmul__(self, other):
        return tensor(self, other)

    def __repr__(self):
        return (f"Diagram({self.inputs} -> {self.outputs}, "
                f"{len(self.nodes)} nodes, {len(self.wires)} wires)")

    @cached_property
    def _incidence(self):
        incidence = defaultdict(list)
        for wire in self.wires:
            incidence[wire.a].append(wire)
            incidence[wire.b].append(wire)
        return incidence

    def wire_at(self, port):
        wires = self._incidence.get(port, [])
        return wires[0] if wires else None

    def neighbour(self, port):
        wire = self.wire_at(port)
        return wire.other(port) if wire is not None else None

    def ports(self, node_id):
        g = self.nodes[node_id]
        return ([Port(node_id, 'in', i) for i in range(len(g.input_widths))]
                + [Port(node_id, 'out', j) for j in range(len(g.output_widths))])

    def port_width(self, port):
        if port.is_boundary:
            types = self.inputs if port.side == 'in' else self.outputs
            return types[port.index]
        return self.nodes[port.node].port_width(port.side, port.index)

    @property
    def is_pure(self):
        return all(g.is_pure for g in self.nodes.values())

    def find(self, predicate):
        """Ids of the nodes whose generator satisfies ``predicate``."""
        return [nid for nid, g in self.nodes.items() if predicate(g)]

    def ports_towards(self, node_id, other_id):
        """Ports of ``node_id`` wired to a port of ``other_id``."""
        return [p for p in self.ports(node_id)
                if (q := self.neighbour(p)) is not None and q.node == other_id]


class _Junction(NamedTuple):
    key: tuple


def _splice(segments):
    """
    Resolve chains of segments through junctions.

    Every junction must appear in exactly two segment ends. Returns the wires
    between real endpoints and the widths of closed loops made only of
    junctions.
    """
    incident = defaultdict(list)
    for i, (a, b, _) in enumerate(segments):
        incident[a].append(i)
        incident[b].append(i)
    used = [False] * len(segments)

    def walk(start, index):
        at, current = start, index
        while True:
            used[current] = True
            a, b, width = segments[current]
            nxt = b if a == at else a
            if not isinstance(nxt, _Junction):
                return nxt, width
            others = [j for j in incident[nxt] if j != current]
            if len(others) != 1:
                raise ValidationFailed(f"junction {nxt.key} is not a pass-through")
            at, current = nxt, others[0]

    wires, loops = [], []
    for i, (a, b, width) in enumerate(segments):
        if used[i]:
            continue
        for start in (a, b):
            if not isinstance(start, _Junction):
                end, width = walk(start, i)
                wires.append(Wire(start, end, width))
                break
    for i, (a, _, width) in enumerate(segments):
        if used[i]:
            continue
        at, current = a, i
        while not used[current]:
            used[current] = True
            s_a, s_b, _ = segments[current]
            at = s_b if s_a == at else s_a
            others = [j for j in incident[at] if j != current]
            if others:
                current = others[0]
        loops.append(width)
    return wires, loops


def _assemble(inputs, outputs, nodes, wires, loops):
    nodes = dict(nodes)
    wires = list(wires)
    next_id = max(nodes, default=-1) + 1
    for width in loops:
        nodes[next_id] = Identity(width)
        wires.append(Wire(Port(next_id, 'in', 0), Port(next_id, 'out', 0), width))
        next_id += 1
    return Diagram(inputs, outputs, nodes, tuple(wires))


def _shift(port, offset, in_offset=0, out_offset=0):
    if port.is_boundary:
        return Port(BOUNDARY, port.side, port.index + (in_offset if port.side == 'in' else out_offset))
    return Port(port.node + offset, port.side, port.index)


def _next_free(d):
    return max(d.nodes, default=-1) + 1


def renumbered(d):
    """Same diagram with node ids 0..N-1 in their current order."""
    mapping = {old: new for new, old in enumerate(sorted(d.nodes))}
    if all(old == new for old, new in mapping.items()):
        return d

    def move(p):
        return p if p.is_boundary else Port(mapping[p.node], p.side, p.index)
    return Diagram(d.inputs, d.outputs, {mapping[k]: g for k, g in d.nodes.items()},
                   tuple(Wire(move(w.a), move(w.b), w.width) for w in d.wires))


# ---------------------------------------------------------------------------
# Categorical structure
# ---------------------------------------------------------------------------
def compose(f, g):
    """g ∘ f: plug the outputs of ``f`` into the inputs of ``g``."""
    if f.outputs != g.inputs:
        raise TypeMismatch(f"cannot compose {f.inputs}->{f.outputs} with {g.inputs}->{g.outputs}")
    offset = _next_free(f)

    def lift_f(p):
        return _Junction(('mid', p.index)) if p.is_boundary and p.side == 'out' else p

    def lift_g(p):
        if p.is_boundary:
            return _Junction(('mid', p.index)) if p.side == 'in' else p
        return Port(p.node + offset, p.side, p.index)

    segments = [(lift_f(w.a), lift_f(w.b), w.width) for w in f.wires]
    segments += [(lift_g(w.a), lift_g(w.b), w.width) for w in g.wires]
    nodes = dict(f.nodes)
    nodes.update({k + offset: v for k, v in g.nodes.items()})
    wires, loops = _splice(segments)
    return _assemble(f.inputs, g.outputs, nodes, wires, loops)


def tensor(f, g):
    """f ⊗ g: juxtaposition."""
    offset = _next_free(f)
    nodes = dict(f.nodes)
    nodes.update({k + offset: v for k, v in g.nodes.items()})
    wires = list(f.wires)
    wires += [Wire(_shift(w.a, offset, len(f.inputs), len(f.outputs)),
                   _shift(w.b, offset, len(f.inputs), len(f.outputs)), w.width) for w in g.wires]
    return Diagram(f.inputs + g.inputs, f.outputs + g.outputs, nodes, tuple(wires))


def chain(*diagrams):
    return reduce(compose, diagrams)


def parallel(*diagrams):
    return reduce(tensor, diagrams, empty())


def empty():
    return Diagram(TypeList(), TypeList())


def identity(types):
    types = TypeList.of(types)
    return Diagram(types, types, {}, tuple(Wire(inp(i), outp(i), w) for i, w in enumerate(types)))


def swap(a, b):
    a, b = TypeList.of(a), TypeList.of(b)
    wires = [Wire(inp(i), outp(len(b) + i), w) for i, w in enumerate(a)]
    wires += [Wire(inp(len(a) + j), outp(j), w) for j, w in enumerate(b)]
    return Diagram(a + b, b + a, {}, tuple(wires))


def cups(types):
    """[0] -> t ⊗ t, pairing wire i with wire len(t)+i."""
    types = TypeList.of(types)
    k = len(types)
    return Diagram(TypeList(), types + types, {},
                   tuple(Wire(outp(i), outp(k + i), w) for i, w in enumerate(types)))


def caps(types):
    types = TypeList.of(types)
    k = len(types)
    return Diagram(types + types, TypeList(), {},
                   tuple(Wire(inp(i), inp(k + i), w) for i, w in enumerate(types)))


def cup(n):
    return cups(TypeList((n,)))


def cap(n):
    return caps(TypeList((n,)))


def generator(g):
    """Single-node diagram exposing every port of ``g`` on the boundary."""
    wires = [Wire(inp(i), Port(0, 'in', i), w) for i, w in enumerate(g.input_widths)]
    wires += [Wire(Port(0, 'out', j), outp(j), w) for j, w in enumerate(g.output_widths)]
    return Diagram(TypeList(g.input_widths), TypeList(g.output_widths), {0: g}, tuple(wires))


def green_spider(width, n_in, n_out, phases=()):
    return generator(Spider('green', width, n_in, n_out, tuple(phases)))


def red_spider(width, n_in, n_out, phases=()):
    return generator(Spider('red', width, n_in, n_out, tuple(phases)))


def h_box(width, n_in, n_out, labels=()):
    return generator(HBox(width, n_in, n_out, tuple(labels)))


def hadamard(width):
    """H on every qubit of a [width] wire: the two-legged H-box."""
    return h_box(width, 1, 1)


def divider(n):
    return generator(Divider(n))


def gatherer(n):
    return generator(Gatherer(n))


def star():
    return generator(Star())


def discard(n):
    return generator(Discard(n))


def mix(n):
    return generator(Mix(n))


def scalar(power):
    """A scalar diagram with pure value 2^(power/4), built from ★ and phase-free green loops."""
    if power <= 0:
        return parallel(*[star() for _ in range(-power)])
    loops = (power + 1) // 2
    parts = [green_spider(1, 0, 0) for _ in range(loops)]
    if power % 2:
        parts.append(star())
    return parallel(*parts)


def permute(types, perm):
    """
    Wire permutation built from adjacent Swap nodes; wire i ends at position perm[i].
    """
    types = TypeList.of(types)
    if sorted(perm) != list(range(len(types))):
        raise ValueError(f"{perm} is not a permutation of {len(types)} wires")
    order = list(range(len(types)))
    result = identity(types)
    changed = True
    while changed:
        changed = False
        for p in range(len(order) - 1):
            if perm[order[p]] > perm[order[p + 1]]:
                current = [types[i] for i in order]
                layer = parallel(identity(current[:p]),
                                 generator(Swap(current[p], current[p + 1])),
                                 identity(current[p + 2:]))
                result = compose(result, layer)
                order[p], order[p + 1] = order[p + 1], order[p]
                changed = True
    return result


def transpose(d):
    """The transpose d^T: outputs -> inputs, built with cups and caps."""
    a, b = d.inputs, d.outputs
    return chain(tensor(identity(b), cups(a)),
                 parallel(identity(b), d, identity(a)),
                 tensor(caps(b), identity(a)))


def trace(d, count):
    """Feed the last ``count`` outputs back into the last ``count`` inputs."""
    if count == 0:
        return d
    loop_in, loop_out = d.inputs[len(d.inputs) - count:], d.outputs[len(d.outputs) - count:]
    if loop_in != loop_out:
        raise TypeMismatch(f"cannot trace {loop_in} against {loop_out}")
    outer_in = d.inputs[:len(d.inputs) - count]
    outer_out = d.outputs[:len(d.outputs) - count]
    return chain(tensor(identity(outer_in), cups(loop_in)),
                 tensor(d, identity(loop_in)),
                 tensor(identity(outer_out), caps(loop_in)))


# ---------------------------------------------------------------------------
# Scalable notation
# ---------------------------------------------------------------------------
def divide(n):
    """[n] -> [1]^n"""
    if n == 1:
        return identity([1])
    return compose(divider(n - 1), tensor(identity([1]), divide(n - 1)))


def gather(n):
    """[1]^n -> [n]"""
    if n == 1:
        return identity([1])
    return compose(tensor(identity([1]), gather(n - 1)), gatherer(n - 1))


def rewire(a, b):
    """The canonical divider/gatherer isomorphism γ_{a,b}."""
    a, b = TypeList.of(a), TypeList.of(b)
    if a.size != b.size:
        raise SizeMismatch(f"cannot rewire {a} (size {a.size}) into {b} (size {b.size})")
    if a == b:
        return identity(a)
    split = parallel(*[divide(w) for w in a])
    join = parallel(*[gather(w) for w in b])
    return renumbered(compose(split, join))


def boxed_type(types):
    size = TypeList.of(types).size
    return TypeList((size,)) if size else TypeList()


def box(d):
    """[d] = γ_{b,[b]} ∘ d ∘ γ_{[a],a}"""
    return renumbered(chain(rewire(boxed_type(d.inputs), d.inputs), d,
                            rewire(d.outputs, boxed_type(d.outputs))))


def _thick_divider(g, k):
    n = g.n
    pairs = TypeList((1, n) * k)
    split = rewire([k * (n + 1)], [n + 1] * k)
    layer = parallel(*[divider(n) for _ in range(k)])
    order = [t if i % 2 == 0 else k + t for t in range(k) for i in (0, 1)]
    shuffle = permute(pairs, order)
    join = tensor(rewire([1] * k, [k]), rewire([n] * k, [k * n]))
    return chain(split, layer, shuffle, join)


def _thick_gatherer(g, k):
    n = g.n
    grouped = TypeList((1,) * k + (n,) * k)
    split = tensor(rewire([k], [1] * k), rewire([k * n], [n] * k))
    order = [2 * t for t in range(k)] + [2 * t + 1 for t in range(k)]
    shuffle = permute(grouped, order)
    layer = parallel(*[gatherer(n) for _ in range(k)])
    join = rewire([n + 1] * k, [k * (n + 1)])
    return chain(split, shuffle, layer, join)


def _substitute(inputs, outputs, nodes, wires, replacements):
    """Glue diagrams in place of removed nodes; their ports become junctions."""
    segments = []

    def lift(p):
        if not p.is_boundary and p.node in replacements:
            return _Junction((p.node, p.side, p.index))
        return p

    for w in wires:
        segments.append((lift(w.a), lift(w.b), w.width))
    nodes = dict(nodes)
    offset = max(list(nodes) + list(replacements), default=-1) + 1
    for nid, sub in sorted(replacements.items()):
        for w in sub.wires:
            ends = []
            for p in (w.a, w.b):
                if p.is_boundary:
                    ends.append(_Junction((nid, p.side, p.index)))
                else:
                    ends.append(Port(p.node + offset, p.side, p.index))
            segments.append((ends[0], ends[1], w.width))
        nodes.update({k + offset: v for k, v in sub.nodes.items()})
        offset += _next_free(sub)
    found, loops = _splice(segments)
    return _assemble(inputs, outputs, nodes, found, loops)


def thicken(d, k):
    """T_k: multiply every width by k; dividers/gatherers expand with a wire permutation."""
    if k < 1:
        raise ValueError("thickening factor must be positive")
    if k == 1:
        return d
    nodes, replacements = {}, {}
    for nid, g in d.nodes.items():
        if isinstance(g, Star):
            replacements[nid] = parallel(*[star() for _ in range(k)])
        elif isinstance(g, Divider):
            replacements[nid] = _thick_divider(g, k)
        elif isinstance(g, Gatherer):
            replacements[nid] = _thick_gatherer(g, k)
        else:
            nodes[nid] = g.thickened(k)
    wires = [Wire(w.a, w.b, w.width * k) for w in d.wires]
    if not replacements:
        return Diagram(d.inputs.scaled(k), d.outputs.scaled(k), nodes, tuple(wires))
    return renumbered(_substitute(d.inputs.scaled(k), d.outputs.scaled(k), nodes, wires, replacements))


def strip(d):
    """Wire stripping |d|: every wire becomes parallel width-1 wires."""
    offsets = {'in': [0], 'out': [0]}
    for side, types in (('in', d.inputs), ('out', d.outputs)):
        for w in types:
            offsets[side].append(offsets[side][-1] + w)

    new_nodes, atoms, segments = {}, {}, []
    next_id = 0
    for nid, g in d.nodes.items():
        if g.is_wiring:
            for (s1, i1, t1), (s2, i2, t2) in g.internal_links():
                segments.append((_Junction((nid, s1, i1, t1)), _Junction((nid, s2, i2, t2)), 1))
            continue
        parts, atom = g.stripped()
        ids = list(range(next_id, next_id + len(parts)))
        next_id += len(parts)
        new_nodes.update(zip(ids, parts))
        atoms[nid] = (ids, atom)

    def atom_of(port, t):
        if port.is_boundary:
            return Port(BOUNDARY, port.side, offsets[port.side][port.index] + t)
        if port.node not in atoms:
            return _Junction((port.node, port.side, port.index, t))
        ids, atom = atoms[port.node]
        part, side, index = atom(port.side, port.index, t)
        return Port(ids[part], side, index)

    for w in d.wires:
        for t in range(w.width):
            segments.append((atom_of(w.a, t), atom_of(w.b, t), 1))
    wires, loops = _splice(segments)
    return _assemble(ones(d.inputs.size), ones(d.outputs.size), new_nodes, wires, loops)


def iterate(f, k):
    """
    The iteration construction: box f, thicken by k+1, cyclically shift the
    output blocks and trace blocks 2..k+1 back into the inputs. Equals f
    composed k+1 times.
    """
    if f.inputs != f.outputs:
        raise TypeMismatch(f"iterate needs an endomorphism, got {f.inputs} -> {f.outputs}")
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    size = f.inputs.size
    if size == 0:
        return thicken(f, k + 1)
    copies = k + 1
    blocks = TypeList((size,) * copies)
    wide = TypeList((copies * size,))
    body = chain(rewire(blocks, wide), thicken(box(f), copies), rewire(wide, blocks))
    shift = [c + 1 for c in range(k)] + [0]
    looped = trace(compose(body, permute(blocks, shift)), k)
    return renumbered(chain(rewire(f.inputs, [size]), looped, rewire([size], f.outputs)))


def unroll(f, k):
    """f composed k+1 times."""
    if f.inputs != f.outputs:
        raise TypeMismatch(f"unroll needs an endomorphism, got {f.inputs} -> {f.outputs}")
    result = f
    for _ in range(k):
        result = compose(result, f)
    return result


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def validate(d):
    """List every broken structural invariant; empty when ``d`` is well formed."""
    violations = []
    counts = defaultdict(int)
    for nid, g in d.nodes.items():
        for issue in g.problems():
            violations.append(Violation('BadGenerator', f"node {nid}: {issue}"))

    def expected_width(p):
        if p.is_boundary:
            types = d.inputs if p.side == 'in' else d.outputs
            return types[p.index] if 0 <= p.index < len(types) else None
        g = d.nodes.get(p.node)
        if g is None:
            return None
        widths = g.input_widths if p.side == 'in' else g.output_widths
        return widths[p.index] if 0 <= p.index < len(widths) else None

    for w in d.wires:
        for p in (w.a, w.b):
            width = expected_width(p)
            if width is None:
                violations.append(Violation('UnknownPort', f"wire end {p} does not exist"))
                continue
            counts[p] += 1
            if width != w.width:
                violations.append(Violation(
                    'WidthMismatch', f"wire of width {w.width} on {p} of width {width}"))

    expected = [inp(i) for i in range(len(d.inputs))] + [outp(j) for j in range(len(d.outputs))]
    for nid in d.nodes:
        expected += d.ports(nid)
    for p in expected:
        if counts[p] == 0:
            violations.append(Violation('DanglingPort', f"{p} has no wire"))
        elif counts[p] > 1:
            violations.append(Violation('MultiplyConnected', f"{p} has {counts[p]} wires"))
    return violations
