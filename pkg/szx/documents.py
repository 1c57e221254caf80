"""
JSON documents for diagrams, proof scripts and algorithm instances, and
text exports of diagrams for figures.

Phases are written in units of π: an exact rational as a string ("1/2"),
otherwise a float.
"""
import json
import logging
import math
from fractions import Fraction

import networkx as nx
import numpy as np

from . import prop
from .algorithms import AlgorithmInstance
from .errors import DocumentError, SZXError
from .prop import BOUNDARY, Diagram, Port, Wire, validate
from .rewrite import Anchor, ProofScript, Step

logger = logging.getLogger(__name__)

DIAGRAM_FORMAT = 'szx-diagram/1'
PROOF_FORMAT = 'szx-proof/1'
INSTANCE_FORMAT = 'szx-instance/1'
MAX_DENOMINATOR = 1024


def format_phase(angle):
    q = angle / math.pi
    exact = Fraction(q).limit_denominator(MAX_DENOMINATOR)
    if abs(float(exact) - q) < 1e-12:
        return str(exact)
    return q


def parse_phase(value):
    try:
        if isinstance(value, str):
            return float(Fraction(value)) * math.pi
        return float(value) * math.pi
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DocumentError(f"bad phase {value!r}") from exc


def _format_label(x):
    x = complex(x)
    return x.real if x.imag == 0 else [x.real, x.imag]


def _parse_label(value):
    if isinstance(value, list):
        return complex(value[0], value[1])
    return complex(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------
_COUNTED = {
    'divider': prop.Divider, 'gatherer': prop.Gatherer, 'cup': prop.Cup, 'cap': prop.Cap,
    'identity': prop.Identity, 'discard': prop.Discard, 'mix': prop.Mix,
}
_MATRIX_ARROWS = {'red_arrow': prop.RedMatrixArrow, 'yellow_arrow': prop.YellowMatrixArrow}


def _multiplicity(g, data):
    if g.copies != 1:
        data['copies'] = g.copies
    if g.fanned:
        data['fanned'] = True
    return data


def generator_to_dict(g):
    kind = g.kind
    if isinstance(g, prop.Spider):
        return {'kind': kind, 'width': g.width, 'n_in': g.n_in, 'n_out': g.n_out,
                'phases': [format_phase(a) for a in g.phases]}
    if isinstance(g, prop.HBox):
        return {'kind': kind, 'width': g.width, 'n_in': g.n_in, 'n_out': g.n_out,
                'labels': [_format_label(x) for x in g.labels]}
    if kind in _COUNTED:
        return {'kind': kind, 'n': g.n}
    if kind == 'swap':
        return {'kind': kind, 'a': g.a, 'b': g.b}
    if kind == 'star':
        return {'kind': kind}
    if kind == 'function':
        return _multiplicity(g, {'kind': kind, 'n': g.n, 'm': g.m, 'table': list(g.values)})
    if kind in _MATRIX_ARROWS:
        return _multiplicity(g, {'kind': kind, 'matrix': [list(row) for row in g.matrix]})
    raise DocumentError(f"cannot serialise a {type(g).__name__}")


def generator_from_dict(data):
    try:
        kind = data['kind']
        if kind in ('green', 'red'):
            return prop.Spider(kind, int(data['width']), int(data['n_in']), int(data['n_out']),
                               tuple(parse_phase(a) for a in data.get('phases', ())))
        if kind == 'hbox':
            return prop.HBox(int(data['width']), int(data['n_in']), int(data['n_out']),
                             tuple(_parse_label(x) for x in data.get('labels', ())))
        if kind in _COUNTED:
            return _COUNTED[kind](int(data['n']))
        if kind == 'swap':
            return prop.Swap(int(data['a']), int(data['b']))
        if kind == 'star':
            return prop.Star()
        multiplicity = {'copies': int(data.get('copies', 1)), 'fanned': bool(data.get('fanned', False))}
        if kind == 'function':
            return prop.FunctionArrow(int(data['n']), int(data['m']), tuple(data['table']), **multiplicity)
        if kind in _MATRIX_ARROWS:
            matrix = tuple(tuple(int(b) for b in row) for row in data['matrix'])
            return _MATRIX_ARROWS[kind](matrix, **multiplicity)
    except KeyError as exc:
        raise DocumentError(f"node of kind {data.get('kind')!r} is missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad node {data!r}: {exc}") from exc
    raise DocumentError(f"unknown node kind {kind!r}")


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------
def _end_to_list(p):
    return [None if p.is_boundary else p.node, p.side, p.index]


def _end_from_list(value):
    try:
        node, side, index = value
    except (TypeError, ValueError):
        raise DocumentError(f"bad wire end {value!r}") from None
    if side not in ('in', 'out'):
        raise DocumentError(f"bad port side {side!r}")
    return Port(BOUNDARY if node is None else int(node), side, int(index))


def diagram_to_dict(d):
    return {
        'format': DIAGRAM_FORMAT,
        'inputs': list(d.inputs),
        'outputs': list(d.outputs),
        'nodes': [{'id': nid, **generator_to_dict(g)} for nid, g in d.nodes.items()],
        'wires': [{'a': _end_to_list(w.a), 'b': _end_to_list(w.b), 'width': w.width} for w in d.wires],
    }


def _check_format(data, expected):
    if not isinstance(data, dict):
        raise DocumentError(f"expected a JSON object for {expected}")
    found = data.get('format')
    if found != expected:
        raise DocumentError(f"expected format {expected!r}, found {found!r}")


def diagram_from_dict(data):
    _check_format(data, DIAGRAM_FORMAT)
    try:
        nodes = {}
        for entry in data.get('nodes', []):
            nid = int(entry['id'])
            if nid in nodes or nid < 0:
                raise DocumentError(f"duplicate or negative node id {nid}")
            nodes[nid] = generator_from_dict(entry)
        wires = tuple(Wire(_end_from_list(w['a']), _end_from_list(w['b']), int(w['width']))
                      for w in data.get('wires', []))
        d = Diagram(tuple(data.get('inputs', ())), tuple(data.get('outputs', ())), nodes, wires)
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from None
    except SZXError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from exc
    problems = validate(d)
    if problems:
        raise DocumentError(f"malformed diagram: {problems[0].kind}: {problems[0].detail}")
    return d


# ---------------------------------------------------------------------------
# Proof scripts and instances
# ---------------------------------------------------------------------------
def _anchor_to_dict(anchor):
    return {'nodes': {str(k): v for k, v in anchor.nodes.items()},
            'ports': [[_end_to_list(k), _end_to_list(v)] for k, v in anchor.ports.items()],
            'strands': [_end_to_list(p) for p in anchor.strands]}


def _anchor_from_dict(data):
    if not isinstance(data, dict):
        raise DocumentError(f"bad anchor {data!r}")
    try:
        nodes = {int(k): int(v) for k, v in data.get('nodes', {}).items()}
        ports = {_end_from_list(k): _end_from_list(v) for k, v in data.get('ports', [])}
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad anchor {data!r}") from exc
    return Anchor(nodes, ports, tuple(_end_from_list(p) for p in data.get('strands', [])))


def proof_to_dict(script):
    return {
        'format': PROOF_FORMAT,
        'name': script.name,
        'description': script.description,
        'oracle_axioms': list(script.oracle_axioms),
        'start': diagram_to_dict(script.start),
        'end': diagram_to_dict(script.end),
        'steps': [{'rule': s.rule, 'params': _jsonable(dict(s.params)), 'anchor': _anchor_to_dict(s.anchor),
                   'direction': s.direction, 'note': s.note} for s in script.steps],
    }


def proof_from_dict(data):
    _check_format(data, PROOF_FORMAT)
    try:
        steps = tuple(Step(s['rule'], dict(s.get('params', {})), _anchor_from_dict(s.get('anchor', {})),
                           s.get('direction', 'forward'), s.get('note', ''))
                      for s in data['steps'])
        return ProofScript(data.get('name', 'unnamed'), diagram_from_dict(data['start']), steps,
                           diagram_from_dict(data['end']), tuple(data.get('oracle_axioms', ())),
                           data.get('description', ''))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from None


def instance_from_dict(data):
    _check_format(data, INSTANCE_FORMAT)
    try:
        return AlgorithmInstance.build(data['algorithm'], n=int(data['n']), s=data.get('s'), x=data.get('x'),
                                       k=data.get('k'), table=data.get('table'), m=data.get('m'))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r}") from None


def instance_to_dict(instance):
    return {'format': INSTANCE_FORMAT, **instance.as_dict()}


_READERS = {DIAGRAM_FORMAT: diagram_from_dict, PROOF_FORMAT: proof_from_dict,
            INSTANCE_FORMAT: instance_from_dict}


def loads(text, expected=None):
    """Parse any document; ``expected`` restricts the accepted format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    fmt = data.get('format') if isinstance(data, dict) else None
    if expected is not None and fmt != expected:
        raise DocumentError(f"expected format {expected!r}, found {fmt!r}")
    if fmt not in _READERS:
        raise DocumentError(f"unknown document format {fmt!r}")
    return _READERS[fmt](data)


def dumps(data):
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def read(path, expected=None):
    with open(path, encoding='utf-8') as fh:
        return loads(fh.read(), expected)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------
def _label(g):
    if isinstance(g, prop.Spider):
        phases = [format_phase(a) for a in g.phases]
        text = '' if all(p == '0' for p in phases) else ','.join(f"{p}π" for p in phases)
        return f"{g.width}{(':' + text) if text else ''}"
    if isinstance(g, prop.HBox):
        return 'H' if all(x == -1 for x in g.labels) else 'H:' + ','.join(str(_format_label(x)) for x in g.labels)
    if g.kind == 'function':
        return f"f {g.n}→{g.m}"
    if g.kind in _MATRIX_ARROWS:
        return f"{g.kind.split('_')[0]} {len(g.matrix)}×{len(g.matrix[0]) if g.matrix else 0}"
    if g.kind == 'star':
        return '★'
    return g.kind


_DOT_STYLE = {
    'green': 'shape=circle, style=filled, fillcolor="#a6d96a"',
    'red': 'shape=circle, style=filled, fillcolor="#f46d43"',
    'hbox': 'shape=square, style=filled, fillcolor="#fee08b"',
    'function': 'shape=cds',
    'red_arrow': 'shape=cds, color="#d73027"',
    'yellow_arrow': 'shape=cds, color="#fdae61"',
    'star': 'shape=plaintext',
}


def _node_name(p):
    return f"{p.side}{p.index}" if p.is_boundary else f"n{p.node}"


def _source_first(w):
    """Orient a wire from the producing end to the consuming end."""
    a_produces = w.a.is_boundary == (w.a.side == 'in')
    return (w.a, w.b) if a_produces else (w.b, w.a)


def to_dot(d):
    lines = ['graph diagram {', '  rankdir=LR;']
    for i in range(len(d.inputs)):
        lines.append(f'  in{i} [shape=point, xlabel="in{i}"];')
    for nid, g in d.nodes.items():
        style = _DOT_STYLE.get(g.kind, 'shape=box')
        lines.append(f'  n{nid} [label="{_label(g)}", {style}];')
    for j in range(len(d.outputs)):
        lines.append(f'  out{j} [shape=point, xlabel="out{j}"];')
    for w in d.wires:
        a, b = _source_first(w)
        attrs = f' [label="{w.width}"]' if w.width != 1 else ''
        lines.append(f'  {_node_name(a)} -- {_node_name(b)}{attrs};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _layers(d):
    """Column of every endpoint name, from a longest-path layering of the wire graph."""
    graph = nx.DiGraph()
    graph.add_nodes_from(f"in{i}" for i in range(len(d.inputs)))
    graph.add_nodes_from(f"n{nid}" for nid in d.nodes)
    graph.add_nodes_from(f"out{j}" for j in range(len(d.outputs)))
    for w in d.wires:
        a, b = _source_first(w)
        graph.add_edge(_node_name(a), _node_name(b))
    condensed = nx.condensation(graph)
    column = {}
    for depth, generation in enumerate(nx.topological_generations(condensed)):
        for component in generation:
            for name in sorted(condensed.nodes[component]['members']):
                column[name] = depth
    last = max(column.values(), default=0) + 1
    for j in range(len(d.outputs)):
        column[f"out{j}"] = last
    for i in range(len(d.inputs)):
        column[f"in{i}"] = 0
    return column


_TIKZ_STYLE = {'green': 'gn', 'red': 'rn', 'hbox': 'hadamard', 'star': 'star'}


def to_tikz(d):
    column = _layers(d)
    rows = {}
    placed = {}
    order = ([f"in{i}" for i in range(len(d.inputs))] + [f"n{nid}" for nid in d.nodes]
             + [f"out{j}" for j in range(len(d.outputs))])
    for name in order:
        x = column[name]
        placed[name] = (x, rows.get(x, 0))
        rows[x] = rows.get(x, 0) + 1
    lines = [r'\begin{tikzpicture}']
    for name in order:
        x, y = placed[name]
        if name.startswith('n'):
            g = d.nodes[int(name[1:])]
            style = _TIKZ_STYLE.get(g.kind, 'box')
            text = _label(g).replace('π', r'\pi').replace('★', r'\star')
            lines.append(f'  \\node[{style}] ({name}) at ({x}, {-y}) {{${text}$}};')
        else:
            lines.append(f'  \\node[boundary] ({name}) at ({x}, {-y}) {{}};')
    for w in d.wires:
        a, b = _source_first(w)
        label = f' node[midway, above] {{\\scriptsize {w.width}}}' if w.width != 1 else ''
        lines.append(f'  \\draw ({_node_name(a)}) to{label} ({_node_name(b)});')
    lines.append(r'\end{tikzpicture}')
    return '\n'.join(lines) + '\n'
