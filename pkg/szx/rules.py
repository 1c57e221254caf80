"""
The rule catalogue. Importing this module fills ``rewrite.REGISTRY``.

Parameters are plain JSON-friendly values: widths and arities are ints,
phases are lists of radians, matrices are lists of 0/1 rows and functions
are ``{"n": .., "m": .., "table": [..]}`` mappings.
"""
import math

from .errors import ShapeMismatch
from .gf2 import F2Matrix, f2_kernel, meta_rule_condition
from .oracles import (BooleanFunction, balanced_sides, function_arrow, injective_sides,
                      red_matrix_arrow, yellow_matrix_arrow)
from .prop import (Swap, TypeList, box, cap, chain, discard, divider, empty, gatherer, generator,
                   green_spider, h_box, hadamard, identity, parallel, permute, red_spider, rewire,
                   scalar, star, swap, thicken, transpose)
from .rewrite import REGISTRY, RewriteRule
from .semantics import GATES, build_gate

COLORS = ('green', 'red')
ARACHNIDS = ('green', 'red', 'hbox')


# ---------------------------------------------------------------------------
# Parameter helpers
# ---------------------------------------------------------------------------
def _phases(p, key, width):
    value = p.get(key)
    if value is None:
        return (0.0,) * width
    if isinstance(value, (int, float)):
        return (float(value),) * width
    phases = tuple(float(a) for a in value)
    if len(phases) != width:
        raise ValueError(f"{key} needs {width} phases, got {len(phases)}")
    return phases


def _bits(value, length):
    return [(value >> (length - 1 - j)) & 1 for j in range(length)]


def _word(bits):
    if isinstance(bits, int):
        return bits
    if isinstance(bits, str):
        return int(bits, 2)
    return int(''.join(str(int(b)) for b in bits) or '0', 2)


def _pi(bits):
    return [math.pi * b for b in bits]


def _function(p, key='f'):
    f = p[key]
    if isinstance(f, BooleanFunction):
        return f
    return BooleanFunction(int(f['n']), int(f['m']), tuple(f['table']))


def _matrix(p, key):
    return [[int(b) for b in row] for row in p[key]]


def _transposed(matrix):
    return [list(col) for col in zip(*matrix)]


def _ids(width, count):
    return identity([width] * count)


def spider(color, width, n_in, n_out, phases=()):
    if color == 'green':
        return green_spider(width, n_in, n_out, phases)
    if color == 'red':
        return red_spider(width, n_in, n_out, phases)
    if color == 'hbox':
        return h_box(width, n_in, n_out, phases)
    raise ValueError(f"unknown arachnid colour {color!r}")


def _other(color):
    return 'red' if color == 'green' else 'green'


def _and_gate(width):
    return chain(h_box(width, 2, 1), hadamard(width))


def _pairwise_and(n):
    """Yellow arrow [2n] -> [n] computing x_i AND x_{n+i}."""
    return [[int(j == i or j == n + i) for j in range(2 * n)] for i in range(n)]


def blockwise(color, blocks, n_in, n_out, phases):
    """An arachnid on [sum(blocks)] written as one arachnid per block between rewirings."""
    total, r = sum(blocks), len(blocks)
    offsets = [sum(blocks[:j]) for j in range(r)]
    split = parallel(*[rewire([total], blocks) for _ in range(n_in)])
    group = permute(TypeList(tuple(blocks) * n_in), [(i % r) * n_in + i // r for i in range(n_in * r)])
    arachnids = parallel(*[spider(color, blocks[j], n_in, n_out, phases[offsets[j]:offsets[j] + blocks[j]])
                           for j in range(r)])
    ungroup = permute(TypeList(tuple(blocks[j] for j in range(r) for _ in range(n_out))),
                      [(i % n_out) * r + i // n_out for i in range(n_out * r)])
    join = parallel(*[rewire(blocks, [total]) for _ in range(n_out)])
    return chain(split, group, arachnids, ungroup, join)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------
def _angles(rng, width):
    return [float(a) for a in rng.uniform(0, 2 * math.pi, size=width)]


def _random_matrix(rng, rows, cols):
    return [[int(b) for b in row] for row in rng.integers(0, 2, size=(rows, cols))]


def _random_function(rng, n, m):
    return {'n': n, 'm': m, 'table': [int(v) for v in rng.integers(0, 2 ** m, size=2 ** n)]}


def _balanced_function(rng, n, m):
    table = [y for y in range(2 ** m) for _ in range(2 ** (n - m))]
    return {'n': n, 'm': m, 'table': [int(v) for v in rng.permutation(table)]}


def _injective_function(rng, n, m):
    values = rng.permutation(2 ** m)[:2 ** n]
    return {'n': n, 'm': m, 'table': [int(v) for v in values]}


def _fusion_sample(color):
    def sample(rng):
        w = int(rng.integers(1, 3))
        while True:
            n1, m1, n2, m2 = (int(v) for v in (rng.integers(0, 3), rng.integers(1, 3),
                                                 rng.integers(1, 3), rng.integers(0, 3)))
            if w * (n1 + n2 - 1 + m1 - 1 + m2) <= 6:
                break
        params = {'w': w, 'n1': n1, 'm1': m1, 'n2': n2, 'm2': m2}
        if color != 'hbox':
            params.update(alpha=_angles(rng, w), beta=_angles(rng, w))
        return params
    return sample


def _arachnid_sample(rng, colors=ARACHNIDS, max_qubits=6):
    color = colors[int(rng.integers(0, len(colors)))]
    while True:
        w, n, m = int(rng.integers(1, 4)), int(rng.integers(0, 3)), int(rng.integers(0, 3))
        if w * (n + m + 1) <= max_qubits:
            break
    phases = _angles(rng, w) if color != 'hbox' else [-1.0] * w
    return {'color': color, 'w': w, 'n': n, 'm': m, 'phases': phases}


def _dims(rng, low=1, high=3):
    return int(rng.integers(low, high + 1))


# ---------------------------------------------------------------------------
# Arachnids
# ---------------------------------------------------------------------------
def _fusion(color):
    def lhs(p):
        w = p['w']
        first = spider(color, w, p['n1'], p['m1'], _labels_or_phases(color, p, 'alpha', w))
        second = spider(color, w, p['n2'], p['m2'], _labels_or_phases(color, p, 'beta', w))
        head = parallel(first, _ids(w, p['n2'] - 1))
        if color == 'hbox':
            bridge = parallel(_ids(w, p['m1'] - 1), hadamard(w), _ids(w, p['n2'] - 1))
            head = chain(head, bridge)
        return chain(head, parallel(_ids(w, p['m1'] - 1), second))

    def rhs(p):
        w = p['w']
        if color == 'hbox':
            phases = ()
        else:
            phases = [a + b for a, b in zip(_phases(p, 'alpha', w), _phases(p, 'beta', w))]
        return spider(color, w, p['n1'] + p['n2'] - 1, p['m1'] - 1 + p['m2'], phases)
    return lhs, rhs


def _labels_or_phases(color, p, key, width):
    return () if color == 'hbox' else _phases(p, key, width)


for _color, _summary in (('green', "green spiders sharing a wire fuse, phases add"),
                         ('red', "red spiders sharing a wire fuse, phases add"),
                         ('hbox', "H-boxes labelled -1 joined through a Hadamard fuse")):
    _lhs, _rhs = _fusion(_color)
    REGISTRY.register(RewriteRule(
        name=f"fusion.{_color}", lhs=_lhs, rhs=_rhs,
        schema={'w': 'width', 'n1': 'inputs of the first', 'm1': 'outputs of the first (>=1)',
                'n2': 'inputs of the second (>=1)', 'm2': 'outputs of the second',
                **({} if _color == 'hbox' else {'alpha': 'phases of the first', 'beta': 'phases of the second'})},
        sampler=_fusion_sample(_color),
        side_condition=lambda p: p['m1'] >= 1 and p['n2'] >= 1,
        summary=_summary))


def _arachnid_phases(p):
    return () if p['color'] == 'hbox' else _phases(p, 'phases', p['w'])


def _flex_sample(rng):
    p = _arachnid_sample(rng)
    p['perm'] = [int(v) for v in rng.permutation(p['n'])]
    return p


REGISTRY.register(RewriteRule(
    name='flexsymmetry',
    lhs=lambda p: chain(permute([p['w']] * p['n'], p['perm']),
                        spider(p['color'], p['w'], p['n'], p['m'], _arachnid_phases(p))),
    rhs=lambda p: spider(p['color'], p['w'], p['n'], p['m'], _arachnid_phases(p)),
    schema={'color': 'green|red|hbox', 'w': 'width', 'n': 'inputs', 'm': 'outputs',
            'phases': 'phase vector', 'perm': 'permutation of the inputs'},
    sampler=_flex_sample,
    side_condition=lambda p: sorted(p['perm']) == list(range(p['n'])),
    summary="arachnids ignore the order of their inputs"))

REGISTRY.register(RewriteRule(
    name='legbend',
    lhs=lambda p: chain(parallel(spider(p['color'], p['w'], p['n'], p['m'] + 1, _arachnid_phases(p)),
                                 _ids(p['w'], 1)),
                        parallel(_ids(p['w'], p['m']), cap(p['w']))),
    rhs=lambda p: spider(p['color'], p['w'], p['n'] + 1, p['m'], _arachnid_phases(p)),
    schema={'color': 'green|red|hbox', 'w': 'width', 'n': 'inputs', 'm': 'outputs',
            'phases': 'phase vector'},
    sampler=lambda rng: _arachnid_sample(rng, max_qubits=5),
    summary="an output bent back with a cap becomes an input"))


def _split_sample(rng):
    color = ARACHNIDS[int(rng.integers(0, 3))]
    a, b = _dims(rng, 1, 2), _dims(rng, 1, 2)
    n, m = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    if (a + b) * (n + m) > 8:
        n, m = 1, 1
    phases = _angles(rng, a + b) if color != 'hbox' else [-1.0] * (a + b)
    return {'color': color, 'a': a, 'b': b, 'n': n, 'm': m, 'phases': phases}


def _split_phases(p):
    return () if p['color'] == 'hbox' else _phases(p, 'phases', p['a'] + p['b'])


REGISTRY.register(RewriteRule(
    name='split.arachnid',
    lhs=lambda p: spider(p['color'], p['a'] + p['b'], p['n'], p['m'], _split_phases(p)),
    rhs=lambda p: blockwise(p['color'], [p['a'], p['b']], p['n'], p['m'],
                            _split_phases(p) or (-1.0,) * (p['a'] + p['b'])),
    schema={'color': 'green|red|hbox', 'a': 'head width', 'b': 'tail width', 'n': 'inputs',
            'm': 'outputs', 'phases': 'phase vector of length a+b'},
    sampler=_split_sample,
    summary="an arachnid on [a+b] splits over dividers into arachnids on [a] and [b]"))

REGISTRY.register(RewriteRule(
    name='div-gath.inverse',
    lhs=lambda p: chain(divider(p['n']), gatherer(p['n'])),
    rhs=lambda p: identity([p['n'] + 1]),
    schema={'n': 'tail width'},
    sampler=lambda rng: {'n': _dims(rng, 1, 4)},
    summary="a divider followed by a gatherer is the identity"))

REGISTRY.register(RewriteRule(
    name='gath-div.inverse',
    lhs=lambda p: chain(gatherer(p['n']), divider(p['n'])),
    rhs=lambda p: identity([1, p['n']]),
    schema={'n': 'tail width'},
    sampler=lambda rng: {'n': _dims(rng, 1, 4)},
    summary="a gatherer followed by a divider is the identity"))


def _bialgebra_rhs(w, copier, merger):
    return chain(parallel(copier, copier),
                 parallel(_ids(w, 1), swap([w], [w]), _ids(w, 1)),
                 parallel(merger, merger))


REGISTRY.register(RewriteRule(
    name='bialgebra.red-green',
    lhs=lambda p: chain(red_spider(p['w'], 2, 1), green_spider(p['w'], 1, 2)),
    rhs=lambda p: _bialgebra_rhs(p['w'], green_spider(p['w'], 1, 2), red_spider(p['w'], 2, 1)),
    schema={'w': 'width'},
    sampler=lambda rng: {'w': _dims(rng, 1, 2)},
    summary="red merge then green copy equals copies then merges"))

REGISTRY.register(RewriteRule(
    name='interact.h-green',
    lhs=lambda p: chain(_and_gate(p['w']), green_spider(p['w'], 1, 2)),
    rhs=lambda p: _bialgebra_rhs(p['w'], green_spider(p['w'], 1, 2), _and_gate(p['w'])),
    schema={'w': 'width'},
    sampler=lambda rng: {'w': _dims(rng, 1, 2)},
    summary="the AND gate built from an H-box is copied by green spiders"))


def _hadamards(width, count):
    return parallel(*[hadamard(width) for _ in range(count)])


REGISTRY.register(RewriteRule(
    name='interact.h-red',
    lhs=lambda p: chain(_hadamards(p['w'], p['n']),
                        spider(p['color'], p['w'], p['n'], p['m'], _phases(p, 'phases', p['w'])),
                        _hadamards(p['w'], p['m'])),
    rhs=lambda p: spider(_other(p['color']), p['w'], p['n'], p['m'], _phases(p, 'phases', p['w'])),
    schema={'color': 'colour of the conjugated spider', 'w': 'width', 'n': 'inputs', 'm': 'outputs',
            'phases': 'phase vector'},
    sampler=lambda rng: {k: v for k, v in _arachnid_sample(rng, COLORS).items()},
    summary="Hadamards on every leg exchange green and red"))

REGISTRY.register(RewriteRule(
    name='thicken.dist',
    lhs=lambda p: thicken(spider(p['color'], p['k'], p['n'], p['m'], _dist_phases(p)), p['l']),
    rhs=lambda p: blockwise(p['color'], [p['k']] * p['l'], p['n'], p['m'],
                            (_dist_phases(p) or (-1.0,) * p['k']) * p['l']),
    schema={'color': 'green|red|hbox', 'k': 'width', 'l': 'thickening factor', 'n': 'inputs',
            'm': 'outputs', 'phases': 'phase vector of length k'},
    sampler=lambda rng: _dist_sample(rng),
    summary="thickening an arachnid gives parallel copies, copy-major"))


def _dist_phases(p):
    return () if p['color'] == 'hbox' else _phases(p, 'phases', p['k'])


def _dist_sample(rng):
    color = ARACHNIDS[int(rng.integers(0, 3))]
    k, l = _dims(rng, 1, 2), _dims(rng, 2, 3)
    n, m = (1, 1) if k * l > 4 else (int(rng.integers(0, 3)), int(rng.integers(1, 3)))
    return {'color': color, 'k': k, 'l': l, 'n': n, 'm': m,
            'phases': _angles(rng, k) if color != 'hbox' else [-1.0] * k}


def _box_parts(p):
    f = green_spider(p['w1'], p['n1'], p['m1'], _phases(p, 'alpha', p['w1']))
    g = green_spider(p['w2'], p['n2'], p['m2'], _phases(p, 'beta', p['w2']))
    return f, g


def _box_rhs(p):
    f, g = _box_parts(p)
    a1, a2 = f.inputs.size, g.inputs.size
    b1, b2 = f.outputs.size, g.outputs.size
    return chain(rewire([a1 + a2], [a1, a2]), parallel(box(f), box(g)), rewire([b1, b2], [b1 + b2]))


def _box_sample(rng):
    while True:
        p = {'w1': _dims(rng, 1, 2), 'n1': _dims(rng, 1, 2), 'm1': _dims(rng, 1, 2),
             'w2': _dims(rng, 1, 2), 'n2': _dims(rng, 1, 2), 'm2': _dims(rng, 1, 2)}
        if p['w1'] * (p['n1'] + p['m1']) + p['w2'] * (p['n2'] + p['m2']) <= 8:
            break
    p.update(alpha=_angles(rng, p['w1']), beta=_angles(rng, p['w2']))
    return p


REGISTRY.register(RewriteRule(
    name='box.monoidal',
    lhs=lambda p: box(parallel(*_box_parts(p))),
    rhs=_box_rhs,
    schema={'w1': 'width of f', 'n1': 'inputs of f', 'm1': 'outputs of f', 'alpha': 'phases of f',
            'w2': 'width of g', 'n2': 'inputs of g', 'm2': 'outputs of g', 'beta': 'phases of g'},
    sampler=_box_sample,
    summary="boxing a tensor product is the tensor of the boxes between rewirings"))

REGISTRY.register(RewriteRule(
    name='spider.identity',
    lhs=lambda p: spider(p['color'], p['w'], 1, 1),
    rhs=lambda p: identity([p['w']]),
    schema={'color': 'green|red', 'w': 'width'},
    sampler=lambda rng: {'color': COLORS[int(rng.integers(0, 2))], 'w': _dims(rng)},
    side_condition=lambda p: p['color'] in COLORS,
    summary="a phase-free two-legged spider is a plain wire"))

REGISTRY.register(RewriteRule(
    name='hopf',
    lhs=lambda p: chain(green_spider(p['w'], 1, 2), red_spider(p['w'], 2, 1)),
    rhs=lambda p: parallel(green_spider(p['w'], 1, 0), red_spider(p['w'], 0, 1)),
    schema={'w': 'width'},
    sampler=lambda rng: {'w': _dims(rng)},
    summary="a green copy merged by a red spider disconnects"))


def _copy_sides(p):
    color, w = p['color'], p['w']
    bits = _bits(_word(p['bits']), w)
    basis = _pi(bits)
    if p.get('kind', 'state') == 'state':
        one = spider(color, w, 0, 1, basis)
        lhs = chain(one, spider(_other(color), w, 1, 2))
    else:
        one = spider(color, w, 1, 0, basis)
        lhs = chain(spider(_other(color), w, 2, 1), one)
    return lhs, parallel(one, one)


def _copy_sample(rng):
    w = _dims(rng)
    return {'color': COLORS[int(rng.integers(0, 2))], 'w': w,
            'bits': [int(b) for b in rng.integers(0, 2, size=w)],
            'kind': ('state', 'effect')[int(rng.integers(0, 2))]}


REGISTRY.register(RewriteRule(
    name='copy',
    lhs=lambda p: _copy_sides(p)[0],
    rhs=lambda p: _copy_sides(p)[1],
    schema={'color': 'colour of the basis state', 'w': 'width', 'bits': 'basis word',
            'kind': 'state|effect'},
    sampler=_copy_sample,
    summary="a basis state (or effect) is copied through a spider of the other colour"))

REGISTRY.register(RewriteRule(
    name='scalar.inverse',
    lhs=lambda p: parallel(green_spider(1, 0, 0), star(), star()),
    rhs=lambda p: empty(),
    sampler=lambda rng: {},
    summary="a phase-free green loop and two stars cancel"))

REGISTRY.register(RewriteRule(
    name='discard.isometry',
    lhs=lambda p: chain(build_gate(p['gate']),
                        parallel(*[discard(1) for _ in range(len(build_gate(p['gate']).outputs))])),
    rhs=lambda p: parallel(*[discard(1) for _ in range(len(build_gate(p['gate']).inputs))]),
    schema={'gate': 'name of an isometric gate'},
    sampler=lambda rng: {'gate': sorted(GATES)[int(rng.integers(0, len(GATES)))]},
    side_condition=lambda p: p['gate'] in GATES,
    summary="discarding after an isometry is discarding"))


# ---------------------------------------------------------------------------
# Function and matrix arrows
# ---------------------------------------------------------------------------
def _function_sample(rng):
    return {'f': _random_function(rng, _dims(rng), _dims(rng, 1, 2))}


def _apply_sample(rng):
    f = _random_function(rng, _dims(rng), _dims(rng, 1, 2))
    return {'f': f, 'x': int(rng.integers(0, 2 ** f['n']))}


def _apply_sides(p):
    f = _function(p)
    x = _word(p['x'])
    lhs = chain(red_spider(f.n, 0, 1, _pi(_bits(x, f.n))), function_arrow(f))
    return lhs, red_spider(f.m, 0, 1, _pi(_bits(f(x), f.m)))


REGISTRY.register(RewriteRule(
    name='fn.apply',
    lhs=lambda p: _apply_sides(p)[0],
    rhs=lambda p: _apply_sides(p)[1],
    schema={'f': 'function table', 'x': 'input word'},
    sampler=_apply_sample,
    summary="an arrow applied to a basis state yields the basis state of the image"))

REGISTRY.register(RewriteRule(
    name='fn.erase',
    lhs=lambda p: chain(function_arrow(_function(p)), green_spider(_function(p).m, 1, 0)),
    rhs=lambda p: green_spider(_function(p).n, 1, 0),
    schema={'f': 'function table'},
    sampler=_function_sample,
    summary="erasing the output of an arrow erases its input"))

REGISTRY.register(RewriteRule(
    name='fn.copy',
    lhs=lambda p: chain(function_arrow(_function(p)), green_spider(_function(p).m, 1, 2)),
    rhs=lambda p: chain(green_spider(_function(p).n, 1, 2),
                        parallel(function_arrow(_function(p)), function_arrow(_function(p)))),
    schema={'f': 'function table'},
    sampler=_function_sample,
    summary="copying the output of an arrow copies its input"))


def _balanced_sample(rng):
    n, m = _dims(rng), _dims(rng, 1, 2)
    if m <= n and rng.integers(0, 2):
        return {'f': _balanced_function(rng, n, m)}
    return {'f': _random_function(rng, n, m)}


def _injective_sample(rng):
    n = _dims(rng, 1, 2)
    m = _dims(rng, n, 3)
    if rng.integers(0, 2):
        return {'f': _injective_function(rng, n, m)}
    return {'f': _random_function(rng, n, m)}


REGISTRY.register(RewriteRule(
    name='fn.balanced',
    lhs=lambda p: balanced_sides(_function(p))[0],
    rhs=lambda p: balanced_sides(_function(p))[1],
    schema={'f': 'function table'},
    sampler=_balanced_sample,
    side_condition=lambda p: _function(p).is_balanced(),
    conditional=True,
    summary="a balanced arrow maps the uniform state to the uniform state"))

REGISTRY.register(RewriteRule(
    name='fn.injective',
    lhs=lambda p: injective_sides(_function(p))[0],
    rhs=lambda p: injective_sides(_function(p))[1],
    schema={'f': 'function table'},
    sampler=_injective_sample,
    side_condition=lambda p: _function(p).is_injective(),
    conditional=True,
    summary="an injective arrow commutes with the green merge"))


def _matrix_sample(rng):
    return {'A': _random_matrix(rng, _dims(rng), _dims(rng))}


def _red(p, key='A'):
    return red_matrix_arrow(_matrix(p, key))


def _yellow(p, key='A'):
    return yellow_matrix_arrow(_matrix(p, key))


def _shape(p, key='A'):
    matrix = _matrix(p, key)
    return len(matrix), len(matrix[0])


REGISTRY.register(RewriteRule(
    name='red.linear',
    lhs=lambda p: chain(red_spider(_shape(p)[1], 2, 1), _red(p)),
    rhs=lambda p: chain(parallel(_red(p), _red(p)), red_spider(_shape(p)[0], 2, 1)),
    schema={'A': 'GF(2) matrix'},
    sampler=_matrix_sample,
    summary="red arrows commute with the red merge"))

REGISTRY.register(RewriteRule(
    name='red.linear.unit',
    lhs=lambda p: chain(red_spider(_shape(p)[1], 0, 1), _red(p)),
    rhs=lambda p: red_spider(_shape(p)[0], 0, 1),
    schema={'A': 'GF(2) matrix'},
    sampler=_matrix_sample,
    summary="red arrows fix the zero state"))


def _split_matrices_rows(rng):
    n = _dims(rng, 1, 2)
    return {'A': _random_matrix(rng, _dims(rng, 1, 2), n), 'B': _random_matrix(rng, _dims(rng, 1, 2), n)}


def _split_matrices_cols(rng):
    p = _dims(rng, 1, 2)
    return {'A': _random_matrix(rng, p, _dims(rng, 1, 2)), 'B': _random_matrix(rng, p, _dims(rng, 1, 2))}


def _rowsplit_rhs(arrow, p):
    (pa, n), (pb, _) = _shape(p, 'A'), _shape(p, 'B')
    return chain(green_spider(n, 1, 2), parallel(arrow(p, 'A'), arrow(p, 'B')), rewire([pa, pb], [pa + pb]))


def _colsplit_rhs(arrow, merge, p):
    (rows, na), (_, nb) = _shape(p, 'A'), _shape(p, 'B')
    return chain(rewire([na + nb], [na, nb]), parallel(arrow(p, 'A'), arrow(p, 'B')), merge(rows))


def _stacked(p):
    return {'S': _matrix(p, 'A') + _matrix(p, 'B')}


def _side_by_side(p):
    return {'S': [ra + rb for ra, rb in zip(_matrix(p, 'A'), _matrix(p, 'B'))]}


def _yellow_merge(rows):
    return chain(rewire([rows, rows], [2 * rows]), yellow_matrix_arrow(_pairwise_and(rows)))


REGISTRY.register(RewriteRule(
    name='red.rowsplit',
    lhs=lambda p: _red(_stacked(p), 'S'),
    rhs=lambda p: _rowsplit_rhs(_red, p),
    schema={'A': 'top block', 'B': 'bottom block'},
    sampler=_split_matrices_rows,
    side_condition=lambda p: _shape(p, 'A')[1] == _shape(p, 'B')[1],
    summary="a red arrow of stacked blocks copies its input into both blocks"))

REGISTRY.register(RewriteRule(
    name='red.colsplit',
    lhs=lambda p: _red(_side_by_side(p), 'S'),
    rhs=lambda p: _colsplit_rhs(_red, lambda rows: red_spider(rows, 2, 1), p),
    schema={'A': 'left block', 'B': 'right block'},
    sampler=_split_matrices_cols,
    side_condition=lambda p: _shape(p, 'A')[0] == _shape(p, 'B')[0],
    summary="a red arrow of side-by-side blocks splits its input and adds the results"))

REGISTRY.register(RewriteRule(
    name='yellow.rowsplit',
    lhs=lambda p: _yellow(_stacked(p), 'S'),
    rhs=lambda p: _rowsplit_rhs(_yellow, p),
    schema={'A': 'top block', 'B': 'bottom block'},
    sampler=_split_matrices_rows,
    side_condition=lambda p: _shape(p, 'A')[1] == _shape(p, 'B')[1],
    summary="a yellow arrow of stacked blocks copies its input into both blocks"))

REGISTRY.register(RewriteRule(
    name='yellow.colsplit',
    lhs=lambda p: _yellow(_side_by_side(p), 'S'),
    rhs=lambda p: _colsplit_rhs(_yellow, _yellow_merge, p),
    schema={'A': 'left block', 'B': 'right block'},
    sampler=_split_matrices_cols,
    side_condition=lambda p: _shape(p, 'A')[0] == _shape(p, 'B')[0],
    summary="a yellow arrow of side-by-side blocks splits its input and ANDs the results"))

REGISTRY.register(RewriteRule(
    name='yellow.semimodule',
    lhs=lambda p: chain(rewire([_shape(p)[1]] * 2, [2 * _shape(p)[1]]),
                        yellow_matrix_arrow(_pairwise_and(_shape(p)[1])), _yellow(p)),
    rhs=lambda p: chain(parallel(_yellow(p), _yellow(p)), _yellow_merge(_shape(p)[0])),
    schema={'A': 'boolean matrix'},
    sampler=_matrix_sample,
    summary="yellow arrows preserve componentwise AND"))

REGISTRY.register(RewriteRule(
    name='yellow.semimodule.unit',
    lhs=lambda p: chain(red_spider(_shape(p)[1], 0, 1, [math.pi] * _shape(p)[1]), _yellow(p)),
    rhs=lambda p: red_spider(_shape(p)[0], 0, 1, [math.pi] * _shape(p)[0]),
    schema={'A': 'boolean matrix'},
    sampler=_matrix_sample,
    summary="yellow arrows fix the all-ones state"))


def _meta_blocks(p):
    return tuple(F2Matrix.from_lists(_matrix(p, key)) for key in 'ABCD')


def _meta_condition(p):
    try:
        return meta_rule_condition(*_meta_blocks(p)).holds
    except ShapeMismatch:
        return False


def _meta_lhs(p):
    c, d = _matrix(p, 'C'), _matrix(p, 'D')
    q = len(c[0])
    return chain(green_spider(q, 0, 2), parallel(red_matrix_arrow(c), red_matrix_arrow(d)))


def _meta_rhs(p):
    a, b = _matrix(p, 'A'), _matrix(p, 'B')
    rows, n1, n2 = len(a), len(a[0]), len(b[0])
    condition = meta_rule_condition(*_meta_blocks(p))
    body = chain(parallel(green_spider(n1, 0, 2), green_spider(n2, 0, 2)),
                 parallel(identity([n1]), swap([n1], [n2]), identity([n2])),
                 parallel(identity([n1, n2]), red_matrix_arrow(a), red_matrix_arrow(b)),
                 parallel(identity([n1, n2]), red_spider(rows, 2, 0)))
    return body @ scalar(2 * (condition.k - condition.h))


def meta_instance(rng):
    """Random A, B, C, D with Im(C;D) = Ker(A B)."""
    n1, n2, rows = _dims(rng, 1, 2), _dims(rng, 1, 2), _dims(rng, 1, 2)
    ab = F2Matrix.from_lists(_random_matrix(rng, rows, n1 + n2))
    kernel = f2_kernel(ab)
    columns = list(kernel) or [0]
    if rng.integers(0, 2):
        extra = 0
        for v in kernel:
            if rng.integers(0, 2):
                extra ^= v
        columns.append(extra)
    stacked = [[(col >> (n1 + n2 - 1 - i)) & 1 for col in columns] for i in range(n1 + n2)]
    rows_ab = ab.to_lists()
    return {'A': [r[:n1] for r in rows_ab], 'B': [r[n1:] for r in rows_ab],
            'C': stacked[:n1], 'D': stacked[n1:]}


REGISTRY.register(RewriteRule(
    name='red.meta',
    lhs=_meta_lhs,
    rhs=_meta_rhs,
    schema={'A': 'p x n1', 'B': 'p x n2', 'C': 'n1 x q', 'D': 'n2 x q'},
    sampler=meta_instance,
    side_condition=_meta_condition,
    summary="the span of (C;D) equals the kernel of (A B), up to the scalar fixed by their kernels"))

REGISTRY.register(RewriteRule(
    name='red.hadamard',
    lhs=lambda p: chain(hadamard(_shape(p)[1]), _red(p), hadamard(_shape(p)[0])),
    rhs=lambda p: transpose(red_matrix_arrow(_transposed(_matrix(p, 'A')))),
    schema={'A': 'GF(2) matrix'},
    sampler=_matrix_sample,
    summary="Hadamard-conjugating a red arrow gives the reversed transposed arrow"))


def _transpose_phase_sides(p):
    a = _matrix(p, 'A')
    rows, cols = len(a), len(a[0])
    b = _bits(_word(p['b']), rows)
    pulled = [sum(a[i][j] * b[i] for i in range(rows)) % 2 for j in range(cols)]
    lhs = chain(red_matrix_arrow(a), green_spider(rows, 1, 0, _pi(b)))
    return lhs, green_spider(cols, 1, 0, _pi(pulled))


REGISTRY.register(RewriteRule(
    name='red.transpose-phase',
    lhs=lambda p: _transpose_phase_sides(p)[0],
    rhs=lambda p: _transpose_phase_sides(p)[1],
    schema={'A': 'GF(2) matrix', 'b': 'basis word on the outputs'},
    sampler=lambda rng: _transpose_phase_sample(rng),
    summary="a green basis effect slides through a red arrow as its transpose"))


def _transpose_phase_sample(rng):
    a = _random_matrix(rng, _dims(rng), _dims(rng))
    return {'A': a, 'b': [int(v) for v in rng.integers(0, 2, size=len(a))]}


# ---------------------------------------------------------------------------
# Wiring
# ---------------------------------------------------------------------------
REGISTRY.register(RewriteRule(
    name='swap.wires',
    lhs=lambda p: generator(Swap(p['a'], p['b'])),
    rhs=lambda p: swap([p['a']], [p['b']]),
    schema={'a': 'width of the first wire', 'b': 'width of the second wire'},
    sampler=lambda rng: {'a': _dims(rng), 'b': _dims(rng)},
    summary="a swap node is the crossing of its two wires"))


# ---------------------------------------------------------------------------
# Promises (admitted per script)
# ---------------------------------------------------------------------------
def _linear_sample(rng):
    n = _dims(rng)
    s = [int(b) for b in rng.integers(0, 2, size=n)]
    if rng.integers(0, 2):
        return {'f': {'n': n, 'm': 1, 'table': list(BooleanFunction.linear(s).table)}, 's': s}
    return {'f': _random_function(rng, n, 1), 's': s}


REGISTRY.register(RewriteRule(
    name='promise.linear',
    lhs=lambda p: function_arrow(_function(p)),
    rhs=lambda p: red_matrix_arrow([_bits(_word(p['s']), _function(p).n)]),
    schema={'f': 'function table', 's': 'row vector'},
    sampler=_linear_sample,
    side_condition=lambda p: _function(p).table == BooleanFunction.linear(
        _bits(_word(p['s']), _function(p).n)).table,
    conditional=True,
    summary="f(x) = s.x lets the arrow be read as the red arrow of s"))


def _constant_value(p):
    f = _function(p)
    return f.table[0] if p.get('value') is None else _word(p['value'])


def _constant_rhs(p):
    f = _function(p)
    return parallel(green_spider(f.n, 1, 0), red_spider(f.m, 0, 1, _pi(_bits(_constant_value(p), f.m))))


def _constant_sample(rng):
    n, m = _dims(rng), _dims(rng, 1, 2)
    if rng.integers(0, 2):
        value = int(rng.integers(0, 2 ** m))
        return {'f': {'n': n, 'm': m, 'table': [value] * 2 ** n}, 'value': value}
    f = _random_function(rng, n, m)
    return {'f': f, 'value': f['table'][0]}


REGISTRY.register(RewriteRule(
    name='promise.constant',
    lhs=lambda p: function_arrow(_function(p)),
    rhs=_constant_rhs,
    schema={'f': 'function table', 'value': 'the constant output'},
    sampler=_constant_sample,
    side_condition=lambda p: set(_function(p).table) == {_constant_value(p)},
    conditional=True,
    summary="a constant arrow erases its input and prepares the constant"))


def point_form(n, marked):
    """The indicator of ``marked`` as NOTs on its zero bits followed by the yellow AND arrow."""
    flips = [math.pi * (1 - b) for b in _bits(marked, n)]
    return chain(red_spider(n, 1, 1, flips), yellow_matrix_arrow(rows=1, cols=n))


def _point_sample(rng):
    n = _dims(rng)
    marked = int(rng.integers(0, 2 ** n))
    claimed = marked if rng.integers(0, 4) else (marked + 1) % 2 ** n
    return {'f': {'n': n, 'm': 1, 'table': list(BooleanFunction.point(n, marked).table)}, 'x': claimed}


REGISTRY.register(RewriteRule(
    name='promise.point',
    lhs=lambda p: function_arrow(_function(p)),
    rhs=lambda p: point_form(_function(p).n, _word(p['x'])),
    schema={'f': 'function table', 'x': 'the marked word'},
    sampler=_point_sample,
    side_condition=lambda p: _function(p).table == BooleanFunction.point(_function(p).n, _word(p['x'])).table,
    conditional=True,
    summary="a point indicator is a yellow AND after NOTs on the zero bits"))
