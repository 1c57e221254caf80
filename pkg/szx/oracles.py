"""
Boolean functions as diagrams: function arrows, red (GF(2)-linear) and
yellow (boolean semiring) matrix arrows, and the quantum oracles built from
them.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NotBoolean, TypeMismatch
from .gf2 import BoolSemiringMatrix, F2Matrix
from .prop import (FunctionArrow, RedMatrixArrow, YellowMatrixArrow, chain, generator,
                   green_spider, identity, parallel, red_spider, scalar, star)
from .semantics import Tolerance, equal_semantics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BooleanFunction:
    """f: 2^n -> 2^m given by its full table; words are MSB-first."""

    n: int
    m: int
    table: tuple

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        if len(table) != 2 ** self.n:
            raise TypeMismatch(f"table of {len(table)} entries for {self.n} input bits")
        if any(v < 0 or v >= 2 ** self.m for v in table):
            raise TypeMismatch(f"table values must fit in {self.m} bits")
        object.__setattr__(self, 'table', table)

    def __call__(self, x):
        return self.table[x]

    @classmethod
    def from_callable(cls, n, m, fn):
        return cls(n, m, tuple(fn(x) for x in range(2 ** n)))

    @classmethod
    def constant(cls, n, value=0, m=1):
        return cls(n, m, (value,) * 2 ** n)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(range(2 ** n)))

    @classmethod
    def linear(cls, s, n=None):
        """x ↦ s·x (mod 2); ``s`` is a bit string, a bit list or an int with ``n``."""
        if isinstance(s, str):
            n, s = len(s), int(s, 2)
        elif not isinstance(s, int):
            bits = list(s)
            n, s = len(bits), int(''.join(str(b) for b in bits), 2)
        return cls(n, 1, tuple(bin(s & x).count('1') & 1 for x in range(2 ** n)))

    @classmethod
    def point(cls, n, marked):
        """The indicator of a single word, as used by search problems."""
        return cls(n, 1, tuple(int(x == marked) for x in range(2 ** n)))

    @classmethod
    def and_gate(cls, n=2):
        return cls(n, 1, tuple(int(x == 2 ** n - 1) for x in range(2 ** n)))

    @classmethod
    def from_matrix(cls, matrix):
        arrow = RedMatrixArrow(tuple(map(tuple, matrix)))
        return cls(arrow.n, arrow.m, arrow.table)

    @classmethod
    def random(cls, n, m, rng):
        return cls(n, m, tuple(int(v) for v in rng.integers(0, 2 ** m, size=2 ** n)))

    def is_balanced(self):
        counts = Counter(self.table)
        return len(counts) == 2 ** self.m and len(set(counts.values())) == 1

    def is_injective(self):
        return len(set(self.table)) == len(self.table)

    def is_constant(self):
        return len(set(self.table)) == 1


def _matrix(matrix, rows, cols):
    if matrix is None:
        return tuple((1,) * cols for _ in range(rows))
    if isinstance(matrix, (F2Matrix, BoolSemiringMatrix)):
        return tuple(tuple(r) for r in matrix.to_lists())
    return tuple(tuple(int(b) for b in row) for row in matrix)


def function_arrow(f, copies=1):
    return generator(FunctionArrow(f.n, f.m, f.table, copies))


def red_matrix_arrow(matrix=None, rows=1, cols=1, copies=1):
    """Red arrow of an m×n GF(2) matrix; the all-ones matrix when none is given."""
    return generator(RedMatrixArrow(_matrix(matrix, rows, cols), copies))


def yellow_matrix_arrow(matrix=None, rows=1, cols=1, copies=1):
    """Yellow arrow of a boolean semiring matrix; row i outputs the AND of its selected inputs."""
    return generator(YellowMatrixArrow(_matrix(matrix, rows, cols), copies))


def balanced_sides(f):
    """Both sides of the graphical balancedness characterisation."""
    lhs = green_spider(f.n, 0, 1) >> function_arrow(f)
    rhs = green_spider(f.m, 0, 1) @ scalar(2 * (f.n - f.m))
    return lhs, rhs


def injective_sides(f):
    """Both sides of the graphical injectivity characterisation."""
    arrow = function_arrow(f)
    lhs = green_spider(f.n, 2, 1) >> arrow
    rhs = chain(parallel(arrow, arrow), green_spider(f.m, 2, 1)) @ scalar(2 * (f.n - f.m))
    return lhs, rhs


def graphical_promise_holds(f, kind, tol=Tolerance()):
    sides = {'balanced': balanced_sides, 'injective': injective_sides}[kind](f)
    return equal_semantics(*sides, tol)


def quantum_oracle(f):
    """U_f: |x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩ on wires [n] ⊗ [m]."""
    return chain(parallel(green_spider(f.n, 1, 2), identity([f.m])),
                 parallel(identity([f.n]), function_arrow(f), identity([f.m])),
                 parallel(identity([f.n]), red_spider(f.m, 2, 1)))


def diagonal_oracle(f):
    """|x⟩ ↦ (-1)^f(x) |x⟩ for a single-output f."""
    if f.m != 1:
        raise NotBoolean(f"diagonal oracles need one output bit, got {f.m}")
    return chain(green_spider(f.n, 1, 2),
                 parallel(identity([f.n]), function_arrow(f)),
                 parallel(identity([f.n]), green_spider(1, 1, 0, (math.pi,))))


def basis_state(width, value=0):
    """|value⟩ on a [width] wire, normalised with one ★ per qubit."""
    bits = [(value >> (width - 1 - j)) & 1 for j in range(width)]
    return red_spider(width, 0, 1, [math.pi * b for b in bits]) @ parallel(*[star() for _ in range(width)])


def minus_state():
    return green_spider(1, 0, 1, (math.pi,)) @ star()


def minus_effect():
    return green_spider(1, 1, 0, (math.pi,)) @ star()


def diagonal_from_oracle(f):
    """The diagonal oracle recovered from U_f with a |−⟩ ancilla, post-selected on ⟨−|."""
    if f.m != 1:
        raise NotBoolean(f"diagonal oracles need one output bit, got {f.m}")
    return chain(parallel(identity([f.n]), minus_state()),
                 quantum_oracle(f),
                 parallel(identity([f.n]), minus_effect()))


def function_from_oracle(f):
    """The function arrow recovered from U_f: ancilla prepared by R(0→1), inputs erased by G(1→0)."""
    return chain(parallel(identity([f.n]), red_spider(f.m, 0, 1)),
                 quantum_oracle(f),
                 parallel(green_spider(f.n, 1, 0), identity([f.m])))


def oracle_matrix(f):
    """The permutation matrix of U_f computed directly from the table."""
    size = 2 ** (f.n + f.m)
    matrix = np.zeros((size, size))
    for x in range(2 ** f.n):
        for y in range(2 ** f.m):
            matrix[(x << f.m) | (y ^ f(x)), (x << f.m) | y] = 1
    return matrix
