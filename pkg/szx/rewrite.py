"""
Anchored rewriting.

A rule is a pair of parametric diagram builders. Applying it replaces the
anchored occurrence of one side in a host diagram by the other side; the
anchor names the host node of every rule node, optionally fixes leg
assignments and names the host wires standing for bare strands of the rule.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import networkx as nx
import numpy as np

from .errors import (AnchorMismatch, SideConditionFailed, SZXError, UnknownRule,
                     ValidationFailed)
from .prop import (Diagram, Port, _assemble, _Junction, _splice, inp, normalize_phase,
                   outp, renumbered, strip, validate)
from .semantics import Tolerance, equal_semantics, interp_cpm

logger = logging.getLogger(__name__)

DIRECTIONS = ('forward', 'backward')


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Callable
    rhs: Callable
    schema: Mapping = field(default_factory=dict)
    sampler: Callable = None
    side_condition: Callable = None
    summary: str = ''
    conditional: bool = False

    def condition_holds(self, params):
        if self.side_condition is None:
            return True
        return bool(self.side_condition(params))

    def build(self, params):
        lhs, rhs = renumbered(self.lhs(params)), renumbered(self.rhs(params))
        if lhs.inputs.size != rhs.inputs.size or lhs.outputs.size != rhs.outputs.size:
            raise ValidationFailed(f"{self.name}: sides have different boundaries")
        return lhs, rhs


class RuleRegistry:
    def __init__(self):
        self._rules = {}

    def register(self, rule):
        if rule.name in self._rules:
            raise ValueError(f"rule {rule.name} registered twice")
        self._rules[rule.name] = rule
        return rule

    def get(self, name):
        try:
            return self._rules[name]
        except KeyError:
            raise UnknownRule(f"no rule named {name!r}") from None

    def __contains__(self, name):
        return name in self._rules

    def __iter__(self):
        return iter(sorted(self._rules.values(), key=lambda r: r.name))

    def __len__(self):
        return len(self._rules)

    def catalog(self):
        return [{'name': r.name, 'schema': dict(r.schema), 'summary': r.summary,
                 'conditional': r.conditional} for r in self]


REGISTRY = RuleRegistry()


def list_rules(registry=None):
    return (registry or REGISTRY).catalog()


def _port(value):
    if isinstance(value, Port):
        return value
    if isinstance(value, Mapping):
        return Port(int(value['node']), value['side'], int(value['index']))
    node, side, index = value
    return Port(int(node), side, int(index))


@dataclass(frozen=True)
class Anchor:
    nodes: Mapping = field(default_factory=dict)
    ports: Mapping = field(default_factory=dict)
    strands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'nodes', {int(k): int(v) for k, v in dict(self.nodes).items()})
        object.__setattr__(self, 'ports', {_port(k): _port(v) for k, v in dict(self.ports).items()})
        object.__setattr__(self, 'strands', tuple(_port(p) for p in self.strands))

    @classmethod
    def of(cls, value):
        if isinstance(value, Anchor):
            return value
        if isinstance(value, Mapping) and 'nodes' in value:
            return cls(value['nodes'], dict(value.get('ports', {})), tuple(value.get('strands', ())))
        return cls(dict(value))


@dataclass(frozen=True)
class Match:
    nodes: Mapping
    legs: Mapping
    attachments: Mapping
    strand_wires: frozenset


def match(pattern, host, anchor):
    """Check the anchored occurrence of ``pattern`` in ``host``."""
    mapping = anchor.nodes
    if set(mapping) != set(pattern.nodes):
        missing = sorted(set(pattern.nodes) - set(mapping))
        raise AnchorMismatch(f"anchor must map every rule node; missing {missing}")
    if len(set(mapping.values())) != len(mapping):
        raise AnchorMismatch("anchor maps two rule nodes onto one node")
    for p, h in mapping.items():
        if h not in host.nodes:
            raise AnchorMismatch(f"node {h} is not in the diagram")
        if not pattern.nodes[p].matches(host.nodes[h]):
            raise AnchorMismatch(f"rule node {p} ({pattern.nodes[p].kind}) does not match "
                                 f"node {h} ({host.nodes[h].kind})")
    matched = set(mapping.values())

    order = [port for nid in pattern.nodes for port in pattern.ports(nid)]
    order.sort(key=lambda pp: pp not in anchor.ports)
    assignment, used = {}, set()

    def candidates(pp):
        if pp in anchor.ports:
            return [anchor.ports[pp]]
        g = pattern.nodes[pp.node]
        h = mapping[pp.node]
        if g.is_arachnid:
            count = len(g.input_widths if pp.side == 'in' else g.output_widths)
            return [Port(h, pp.side, i) for i in range(count)]
        return [Port(h, pp.side, pp.index)]

    def consistent(pp, hp):
        if hp in used or hp.node != mapping[pp.node] or hp.side != pp.side:
            return False
        pw, hw = pattern.wire_at(pp), host.wire_at(hp)
        if pw is None or hw is None or pw.width != hw.width:
            return False
        po, ho = pw.other(pp), hw.other(hp)
        if po.is_boundary:
            return ho.is_boundary or ho.node not in matched
        if ho.is_boundary or ho.node != mapping[po.node]:
            return False
        return assignment.get(po, ho) == ho

    def search(i):
        if i == len(order):
            return True
        pp = order[i]
        for hp in candidates(pp):
            if consistent(pp, hp):
                assignment[pp] = hp
                used.add(hp)
                if search(i + 1):
                    return True
                del assignment[pp]
                used.discard(hp)
        return False

    if not search(0):
        raise AnchorMismatch("no leg assignment reproduces the rule's wiring")

    attachments = {}
    for pp, hp in assignment.items():
        po = pattern.neighbour(pp)
        if po.is_boundary:
            attachments[po] = host.neighbour(hp)

    bare = [w for w in pattern.wires if w.a.is_boundary and w.b.is_boundary]
    if len(bare) != len(anchor.strands):
        raise AnchorMismatch(f"rule side has {len(bare)} bare wires but the anchor names "
                             f"{len(anchor.strands)} strands")
    strand_wires = set()
    for w, hp in zip(bare, anchor.strands):
        hw = host.wire_at(hp)
        if hw is None or hw.width != w.width or hw in strand_wires:
            raise AnchorMismatch(f"strand at {hp} does not fit a bare wire of width {w.width}")
        if any(not q.is_boundary and q.node in matched for q in (hw.a, hw.b)):
            raise AnchorMismatch(f"strand at {hp} touches a matched node")
        attachments[w.a] = hp
        attachments[w.b] = hw.other(hp)
        strand_wires.add(hw)
    return Match(dict(mapping), assignment, attachments, frozenset(strand_wires))


def replace(host, found, pattern, replacement):
    """Swap the matched occurrence for ``replacement``; new nodes get ids above the host's."""
    matched = set(found.nodes.values())
    nodes = {k: g for k, g in host.nodes.items() if k not in matched}
    base = max(host.nodes, default=-1) + 1
    nodes.update({base + k: g for k, g in replacement.nodes.items()})

    def touches(w):
        return any(not p.is_boundary and p.node in matched for p in (w.a, w.b))

    segments = [(w.a, w.b, w.width) for w in host.wires
                if w not in found.strand_wires and not touches(w)]

    def lift(p):
        if p.is_boundary:
            return _Junction(('slot', p.side, p.index))
        return Port(base + p.node, p.side, p.index)

    segments += [(lift(w.a), lift(w.b), w.width) for w in replacement.wires]
    for slot, end in found.attachments.items():
        segments.append((_Junction(('slot', slot.side, slot.index)), end, pattern.port_width(slot)))
    wires, loops = _splice(segments)
    return _assemble(host.inputs, host.outputs, nodes, wires, loops)


def _resolve(rule, registry):
    if isinstance(rule, RewriteRule):
        return rule
    return (registry or REGISTRY).get(rule)


def apply_rule(d, rule, params, anchor, direction='forward', registry=None, check_condition=True):
    rule = _resolve(rule, registry)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    if check_condition and not rule.condition_holds(params):
        raise SideConditionFailed(f"{rule.name}: side condition fails for {params}")
    lhs, rhs = rule.build(params)
    pattern, replacement = (lhs, rhs) if direction == 'forward' else (rhs, lhs)
    found = match(pattern, d, Anchor.of(anchor))
    result = replace(d, found, pattern, replacement)
    logger.debug("applied %s (%s) on nodes %s", rule.name, direction, sorted(found.nodes.values()))
    return result


# ---------------------------------------------------------------------------
# Soundness
# ---------------------------------------------------------------------------
@dataclass
class SoundnessReport:
    rule: str
    trials: int
    checked: int = 0
    rejected: int = 0
    failures: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def sound(self):
        return not self.failures and not self.errors

    def as_dict(self):
        return {'rule': self.rule, 'trials': self.trials, 'checked': self.checked,
                'rejected': self.rejected, 'failures': self.failures, 'errors': self.errors,
                'sound': self.sound}


def check_rule_soundness(rule, sampler=None, trials=100, tol=Tolerance(), rng=None, registry=None):
    """Sample parameters and compare both sides semantically."""
    rule = _resolve(rule, registry)
    sampler = sampler or rule.sampler
    rng = rng if rng is not None else np.random.default_rng(0)
    report = SoundnessReport(rule.name, trials)
    for _ in range(trials):
        params = sampler(rng)
        if not rule.condition_holds(params):
            report.rejected += 1
            continue
        try:
            lhs, rhs = rule.build(params)
            equal = equal_semantics(lhs, rhs, tol)
        except SZXError as exc:
            report.errors.append({'params': _jsonable(params), 'error': str(exc)})
            continue
        report.checked += 1
        if not equal:
            report.failures.append(_jsonable(params))
    if report.failures:
        logger.warning("rule %s failed on %d of %d samples", rule.name, len(report.failures), report.checked)
    return report


def _jsonable(value):
    if isinstance(value, Mapping):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


# ---------------------------------------------------------------------------
# Structural comparison
# ---------------------------------------------------------------------------
def _without_identities(d):
    passing = {nid for nid, g in d.nodes.items() if g.kind == 'identity'}
    if not passing:
        return d

    def lift(p):
        return _Junction(('id', p.node)) if not p.is_boundary and p.node in passing else p

    segments = [(lift(w.a), lift(w.b), w.width) for w in d.wires]
    wires, loops = _splice(segments)
    nodes = {k: g for k, g in d.nodes.items() if k not in passing}
    return _assemble(d.inputs, d.outputs, nodes, wires, loops)


def _signature(g):
    if g.kind in ('green', 'red'):
        return (g.kind, tuple(round(normalize_phase(a) / math.pi, 6) % 2 for a in g.phases))
    if g.kind == 'hbox':
        return (g.kind, tuple((round(x.real, 6), round(x.imag, 6)) for x in g.labels))
    if getattr(g, 'is_arrow', False):
        return (g.kind, g.n, g.m, g.table)
    return (g.kind,)


def port_graph(d):
    """Labelled graph of the stripped diagram; arachnid legs are unordered per side."""
    s = _without_identities(strip(d))
    graph = nx.Graph()
    for nid, g in s.nodes.items():
        graph.add_node(('node', nid), label=_signature(g))
        for p in s.ports(nid):
            label = ('leg', p.side) if g.is_arachnid else ('leg', p.side, p.index)
            graph.add_node(('port', p), label=label)
            graph.add_edge(('node', nid), ('port', p))
    for i in range(len(s.inputs)):
        graph.add_node(('port', inp(i)), label=('in', i))
    for j in range(len(s.outputs)):
        graph.add_node(('port', outp(j)), label=('out', j))
    for w in s.wires:
        graph.add_edge(('port', w.a), ('port', w.b))
    return graph


def structurally_equal(d1, d2):
    """Equality of the stripped graphs up to node renaming and arachnid leg order."""
    if d1.inputs.size != d2.inputs.size or d1.outputs.size != d2.outputs.size:
        return False
    return nx.is_isomorphic(port_graph(d1), port_graph(d2),
                            node_match=lambda a, b: a['label'] == b['label'])


# ---------------------------------------------------------------------------
# Proof scripts
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Step:
    rule: str
    params: Mapping
    anchor: Anchor
    direction: str = 'forward'
    note: str = ''


@dataclass(frozen=True)
class ProofScript:
    name: str
    start: Diagram
    steps: tuple
    end: Diagram
    oracle_axioms: tuple = ()
    description: str = ''


@dataclass
class StepResult:
    index: int
    rule: str
    direction: str
    status: str
    detail: str = ''


@dataclass
class ProofReport:
    name: str
    steps: list = field(default_factory=list)
    end_matches: bool = False
    end_detail: str = ''

    @property
    def passed(self):
        return self.end_matches and all(s.status == 'ok' for s in self.steps)

    def first_failure(self):
        return next((s for s in self.steps if s.status != 'ok'), None)

    def as_dict(self):
        return {'name': self.name, 'passed': self.passed, 'end_matches': self.end_matches,
                'end_detail': self.end_detail,
                'steps': [vars(s) for s in self.steps]}


def scalar_ratio(d1, d2, tol=Tolerance()):
    """The positive real r with ⟦d1⟧ = r⟦d2⟧, or None."""
    a, b = interp_cpm(d1).value(), interp_cpm(d2).value()
    pivot = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[pivot]) <= tol.abs:
        return None
    r = a[pivot] / b[pivot]
    if abs(r.imag) > tol.abs or r.real <= 0:
        return None
    return float(r.real) if np.allclose(a, r.real * b, rtol=tol.rel, atol=tol.abs) else None


def check_proof(script, tol=Tolerance(), registry=None):
    """Replay a proof script; every step must apply and preserve the semantics."""
    registry = registry or REGISTRY
    problems = validate(script.start)
    if problems:
        raise ValidationFailed(f"{script.name}: start diagram is malformed: {problems[0].detail}")
    report = ProofReport(script.name)
    current = script.start
    for index, step in enumerate(script.steps):
        result = StepResult(index, step.rule, step.direction, 'ok')
        report.steps.append(result)
        try:
            rule = registry.get(step.rule)
        except UnknownRule as exc:
            result.status, result.detail = 'failed', str(exc)
            break
        if rule.conditional and rule.name not in script.oracle_axioms:
            result.status, result.detail = 'not-admitted', f"{rule.name} is not admitted by this script"
            break
        try:
            after = apply_rule(current, rule, step.params, step.anchor, step.direction,
                               registry, check_condition=not rule.conditional)
        except SZXError as exc:
            result.status, result.detail = 'failed', f"{type(exc).__name__}: {exc}"
            break
        if not equal_semantics(current, after, tol):
            ratio = scalar_ratio(after, current, tol)
            if ratio is not None:
                result.status, result.detail = 'scalar', f"off by a factor {ratio:.6g}"
            else:
                result.status, result.detail = 'unequal', "semantics changed"
        current = after
    else:
        report.end_matches = structurally_equal(current, script.end)
        if not report.end_matches:
            report.end_detail = f"final diagram {current!r} differs from {script.end!r}"
    if not report.passed:
        failure = report.first_failure()
        logger.info("proof %s failed at step %s", script.name, failure.index if failure else 'end')
    return report


class Derivation:
    """Builds a proof script by applying steps to a running diagram."""

    def __init__(self, name, start, oracle_axioms=(), description='', registry=None):
        self.name = name
        self.start = start
        self.current = start
        self.oracle_axioms = tuple(oracle_axioms)
        self.description = description
        self.registry = registry or REGISTRY
        self.steps = []

    def apply(self, rule, params, anchor, direction='forward', note=''):
        """Apply one step; returns the ids given to the inserted rule-side nodes."""
        rule = self.registry.get(rule)
        anchor = Anchor.of(anchor)
        before = self.current
        self.current = apply_rule(before, rule, params, anchor, direction, self.registry,
                                  check_condition=not rule.conditional)
        self.steps.append(Step(rule.name, dict(params), anchor, direction, note))
        lhs, rhs = rule.build(params)
        inserted = rhs if direction == 'forward' else lhs
        base = max(before.nodes, default=-1) + 1
        return {k: base + k for k in inserted.nodes}

    def pattern(self, rule, params, direction='forward'):
        lhs, rhs = self.registry.get(rule).build(params)
        return lhs if direction == 'forward' else rhs

    def script(self, end=None):
        return ProofScript(self.name, self.start, tuple(self.steps),
                           self.current if end is None else end, self.oracle_axioms, self.description)
