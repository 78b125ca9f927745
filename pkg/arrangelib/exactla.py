"""
Exact rational linear algebra used by every combinatorial computation in the package.

Matrix positions are 0-based. All scalars are ``fractions.Fraction`` and no operation in this module
ever rounds.
"""
from fractions import Fraction
from functools import reduce
from math import gcd

from arrangelib.exceptions import DimensionException, RankDeficiencyException, InvalidArgumentsException


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidArgumentsException(f"Cannot interpret {value} as a rational")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidArgumentsException(f"Cannot interpret {value} as a rational: {e}")
    raise InvalidArgumentsException(f"Unsupported rational input {value!r}")


def format_rational(q: Fraction) -> str:
    q = to_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class ExactMatrix:
    _rows = None
    _ncols = None

    def __init__(self, rows, ncols: int = None):
        rows = tuple(tuple(to_rational(x) for x in r) for r in rows)
        if ncols is None:
            if len(rows) == 0:
                raise DimensionException("Column count required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionException(f"Ragged row of length {len(r)}, expected {ncols}")
        self._rows = rows
        self._ncols = ncols

    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int):
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, position) -> Fraction:
        i, j = position
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def transpose(self):
        return ExactMatrix([self.column(j) for j in range(self._ncols)], self.nrows)

    def submatrix(self, row_idx, col_idx):
        col_idx = list(col_idx)
        return ExactMatrix([[self._rows[i][j] for j in col_idx] for i in row_idx], len(col_idx))

    def columns(self, col_idx):
        return self.submatrix(range(self.nrows), col_idx)

    def stack(self, other):
        if other.ncols != self._ncols:
            raise DimensionException(f"Cannot stack {other.ncols} columns under {self._ncols}")
        return ExactMatrix(self._rows + other.rows, self._ncols)

    def __matmul__(self, other):
        if self._ncols != other.nrows:
            raise DimensionException(f"Cannot multiply {self.nrows}x{self._ncols} by {other.nrows}x{other.ncols}")
        cols = [other.column(j) for j in range(other.ncols)]
        return ExactMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows],
                           other.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self._ncols == other.ncols and self._rows == other.rows

    def __hash__(self):
        return hash((self._rows, self._ncols))

    def __repr__(self):
        return f"ExactMatrix({self.to_json()})"

    def to_json(self):
        return [[format_rational(x) for x in r] for r in self._rows]


def _integer_rows(rows):
    # scale each row by the lcm of its denominators; returns the integer rows and the product of the scales
    out = []
    scale = 1
    for r in rows:
        d = reduce(_lcm, (x.denominator for x in r), 1)
        out.append([int(x * d) for x in r])
        scale *= d
    return out, scale


def _bareiss(rows, ncols: int):
    # fraction-free elimination; every division below is exact (Sylvester's identity)
    m = [list(r) for r in rows]
    nrows = len(m)
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            sign = -sign
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r, sign * prev


def rank(m: ExactMatrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    int_rows, _ = _integer_rows(m.rows)
    r, _ = _bareiss(int_rows, m.ncols)
    return r


def determinant(m: ExactMatrix) -> Fraction:
    if m.nrows != m.ncols:
        raise DimensionException(f"Determinant of a non-square {m.nrows}x{m.ncols} matrix")
    if m.nrows == 0:
        return Fraction(1)
    int_rows, scale = _integer_rows(m.rows)
    r, last_pivot = _bareiss(int_rows, m.ncols)
    if r < m.nrows:
        return Fraction(0)
    return Fraction(last_pivot, scale)


def minor(m: ExactMatrix, row_idx, col_idx) -> Fraction:
    """
    Determinant of the square submatrix on the given rows and columns, taken in the order listed.

    :param m: the matrix
    :param row_idx: 0-based row positions
    :param col_idx: 0-based column positions
    :return: the exact minor
    """
    row_idx = list(row_idx)
    col_idx = list(col_idx)
    if len(row_idx) != len(col_idx):
        raise DimensionException(f"Minor needs as many rows as columns, got {len(row_idx)} and {len(col_idx)}")
    if len(set(row_idx)) != len(row_idx) or len(set(col_idx)) != len(col_idx):
        raise DimensionException("Minor indices must be distinct")
    if any(i < 0 or i >= m.nrows for i in row_idx) or any(j < 0 or j >= m.ncols for j in col_idx):
        raise DimensionException(f"Minor indices out of range for a {m.nrows}x{m.ncols} matrix")
    return determinant(m.submatrix(row_idx, col_idx))


def row_reduce(m: ExactMatrix):
    """
    Reduced row echelon form. Returns the nonzero rows and their pivot columns.
    """
    rows = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def nullspace_basis(m: ExactMatrix) -> ExactMatrix:
    reduced, pivots = row_reduce(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return ExactMatrix(basis, m.ncols)


def inverse(m: ExactMatrix) -> ExactMatrix:
    n = m.nrows
    if n != m.ncols:
        raise DimensionException(f"Inverse of a non-square {m.nrows}x{m.ncols} matrix")
    augmented = ExactMatrix([list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
                             for i, r in enumerate(m.rows)], 2 * n)
    reduced, pivots = row_reduce(augmented)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise RankDeficiencyException(f"Matrix of size {n} is singular")
    return ExactMatrix([r[n:] for r in reduced[:n]], n)


def complete_to_square(b: ExactMatrix) -> ExactMatrix:
    """
    Extend a full row rank matrix to an invertible square one by appending the lowest-index standard basis
    vectors that raise the rank.
    """
    if rank(b) < b.nrows:
        raise RankDeficiencyException(f"Cannot complete a {b.nrows}x{b.ncols} matrix of rank {rank(b)}")

    rows = [list(r) for r in b.rows]
    for i in range(b.ncols):
        if len(rows) == b.ncols:
            break
        e = [Fraction(1) if j == i else Fraction(0) for j in range(b.ncols)]
        if rank(ExactMatrix(rows + [e], b.ncols)) > len(rows):
            rows.append(e)

    return ExactMatrix(rows, b.ncols)


def same_row_space(a: ExactMatrix, b: ExactMatrix) -> bool:
    if a.ncols != b.ncols:
        return False
    ra = rank(a)
    return ra == rank(b) and rank(a.stack(b)) == ra


def solve_affine(gradients, constants, dim: int):
    """
    Solve g_i . x + c_i = 0 for all i. Returns (point, directions) where directions spans the solution
    directions, or None when the system has no solution.
    """
    if len(gradients) == 0:
        return tuple(Fraction(0) for _ in range(dim)), ExactMatrix.identity(dim)

    homogeneous = ExactMatrix([list(g) + [c] for g, c in zip(gradients, constants)], dim + 1)
    kernel = nullspace_basis(homogeneous)
    anchor = next((v for v in kernel.rows if v[dim] != 0), None)
    if anchor is None:
        return None

    point = tuple(x / anchor[dim] for x in anchor[:dim])
    directions = nullspace_basis(ExactMatrix([list(g) for g in gradients], dim))
    return point, directions
