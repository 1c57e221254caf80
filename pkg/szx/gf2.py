"""
Linear algebra over GF(2) and the boolean semiring.

Rows are packed into python ints, column 0 being the most significant bit,
matching the bit order of basis words elsewhere in the package.
"""
from dataclasses import dataclass

from .errors import Inconsistent, ShapeMismatch


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    bits: tuple

    @classmethod
    def from_lists(cls, rows):
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ShapeMismatch("ragged matrix")
        packed = tuple(int(''.join(str(int(b) & 1) for b in r) or '0', 2) for r in rows)
        return cls(len(rows), cols, packed)

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 << (n - 1 - i) for i in range(n)))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (0,) * rows)

    def entry(self, i, j):
        return (self.bits[i] >> (self.cols - 1 - j)) & 1

    def to_lists(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self):
        return F2Matrix.from_lists([[self.entry(i, j) for i in range(self.rows)]
                                    for j in range(self.cols)]) if self.rows else F2Matrix(self.cols, 0, (0,) * self.cols)

    def apply(self, x):
        """A x for a column vector packed into an int."""
        out = 0
        for row in self.bits:
            out = (out << 1) | (bin(row & x).count('1') & 1)
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = other.transpose()
        return F2Matrix(self.rows, other.cols,
                        tuple(columns.apply(row) for row in self.bits))

    def hstack(self, other):
        if self.rows != other.rows:
            raise ShapeMismatch("hstack needs equal row counts")
        return F2Matrix(self.rows, self.cols + other.cols,
                        tuple((a << other.cols) | b for a, b in zip(self.bits, other.bits)))

    def vstack(self, other):
        if self.cols != other.cols:
            raise ShapeMismatch("vstack needs equal column counts")
        return F2Matrix(self.rows + other.rows, self.cols, self.bits + other.bits)


def echelon(m):
    """Reduced row echelon form; returns (reduced rows, pivot columns)."""
    rows = list(m.bits)
    pivots = []
    r = 0
    for j in range(m.cols):
        mask = 1 << (m.cols - 1 - j)
        pivot = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def f2_rank(m):
    return len(echelon(m)[1])


def f2_kernel(m):
    """A basis of {x : A x = 0}, as packed ints."""
    rows, pivots = echelon(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        x = 1 << (m.cols - 1 - f)
        for r, p in enumerate(pivots):
            if (rows[r] >> (m.cols - 1 - f)) & 1:
                x |= 1 << (m.cols - 1 - p)
        basis.append(x)
    return basis


def f2_image(m):
    """A basis of the column space."""
    return [r for r in echelon(m.transpose())[0] if r]


def f2_solve(m, b):
    """
    Solve A x = b. Returns a particular solution and a kernel basis, or
    raises Inconsistent.
    """
    augmented = m.hstack(F2Matrix(m.rows, 1, tuple((b >> (m.rows - 1 - i)) & 1 for i in range(m.rows))))
    rows, pivots = echelon(augmented)
    if m.cols in pivots:
        raise Inconsistent(f"{b:0{m.rows}b} is not in the image")
    x = 0
    for r, p in enumerate(pivots):
        if rows[r] & 1:
            x |= 1 << (m.cols - 1 - p)
    return x, f2_kernel(m)


@dataclass(frozen=True)
class MetaRuleCondition:
    holds: bool
    k: int
    h: int


def meta_rule_condition(a, b, c, d):
    """
    Side condition of the red meta-rule: Im(C;D) = Ker(A B), checked as
    (A B)(C;D) = 0 together with rank(A B) + rank(C;D) = n1 + n2. ``k`` and
    ``h`` are the kernel dimensions of (C;D) and (A B)^T that fix the scalar
    2^((k-h)/2).

    A: p x n1, B: p x n2, C: n1 x q, D: n2 x q.
    """
    p, n1 = a.rows, a.cols
    if b.rows != p or c.rows != n1 or d.rows != b.cols or c.cols != d.cols:
        raise ShapeMismatch("meta-rule matrices have incompatible shapes")
    q = c.cols
    ab = a.hstack(b)
    cd = c.vstack(d)
    product = ab @ cd
    exact = all(r == 0 for r in product.bits)
    rank_cd = f2_rank(cd)
    rank_ab = f2_rank(ab)
    k = q - rank_cd
    h = p - rank_ab
    holds = exact and rank_ab + rank_cd == n1 + b.cols
    return MetaRuleCondition(holds, k, h)


@dataclass(frozen=True)
class BoolSemiringMatrix:
    rows: int
    cols: int
    bits: tuple

    @classmethod
    def from_lists(cls, rows):
        m = F2Matrix.from_lists(rows)
        return cls(m.rows, m.cols, m.bits)

    def entry(self, i, j):
        return (self.bits[i] >> (self.cols - 1 - j)) & 1

    def to_lists(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def apply(self, x):
        """y_i = AND of x_j over the ones of row i."""
        out = 0
        for row in self.bits:
            out = (out << 1) | int(x & row == row)
        return out
