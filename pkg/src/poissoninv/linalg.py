"""Dense exact matrices over Q(zeta_N) and Gaussian elimination."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .scalar import ONE, ZERO, Cyclo, as_cyclo

__all__ = [
    "Matrix",
    "NotSquare",
    "Singular",
    "LinearSolution",
    "rref",
    "kernel",
    "rank",
    "solve_linear",
    "mat_mul",
    "mat_pow",
    "det",
    "inverse",
]


class NotSquare(ValueError):
    pass


class Singular(ValueError):
    pass


class Matrix:
    """Immutable rows x cols grid of :class:`Cyclo` entries."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(as_cyclo(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must be non-empty")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise ValueError("matrix rows have different lengths")
        self.rows = len(grid)
        self.cols = width
        self.entries = grid
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, values) -> "Matrix":
        values = [as_cyclo(v) for v in values]
        n = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        size = sum(b.cols for b in blocks)
        out = []
        offset = 0
        for b in blocks:
            for row in b.entries:
                out.append([ZERO] * offset + list(row) + [ZERO] * (size - offset - b.cols))
            offset += b.cols
        return cls(out)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _require_square(self):
        if not self.is_square():
            raise NotSquare(f"expected a square matrix, got {self.rows}x{self.cols}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.entries])

    def _check_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("matrix shapes differ")

    def scale(self, c) -> "Matrix":
        c = as_cyclo(c)
        return Matrix([[c * a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return self.scale(other)

    __matmul__ = __mul__

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "Matrix":
        return mat_pow(self, k)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.entries)))

    def trace(self) -> Cyclo:
        self._require_square()
        total = ZERO
        for i in range(self.rows):
            total = total + self.entries[i][i]
        return total

    def det(self) -> Cyclo:
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def is_identity(self) -> bool:
        return self.is_square() and all(
            (e == ONE) if i == j else (not e)
            for i, row in enumerate(self.entries)
            for j, e in enumerate(row)
        )

    def charpoly(self):
        from .univariate import charpoly

        return charpoly(self)

    def render(self) -> str:
        return "[" + "; ".join(", ".join(e.render() for e in row) for row in self.entries) + "]"

    __str__ = render

    def __repr__(self):
        return f"Matrix({self.render()})"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = list(zip(*b.entries))
    out = []
    for row in a.entries:
        new_row = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new_row.append(acc)
        out.append(new_row)
    return Matrix(out)


def mat_pow(m: Matrix, k: int) -> Matrix:
    m._require_square()
    if k < 0:
        return mat_pow(inverse(m), -k)
    result, base = Matrix.identity(m.rows), m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def rref(rows: list[list[Cyclo]], ncols: int | None = None):
    """Reduced row echelon form in place-free style.

    Returns ``(reduced_rows, pivot_columns)``.  Pivots are normalized to 1.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else x for x in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list[Cyclo]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def kernel(rows: list[list[Cyclo]], ncols: int) -> list[list[Cyclo]]:
    """Basis of {v : A v = 0}; one vector per free column, free entry 1."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of :func:`solve_linear`; ``particular`` is None when inconsistent."""

    particular: tuple | None
    kernel: tuple

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(a, b) -> LinearSolution:
    """Solve ``A x = b`` exactly.

    ``a`` is a Matrix or list of rows, ``b`` a sequence of scalars.  The
    returned particular solution sets every free variable to zero.
    """
    rows = [list(r) for r in (a.entries if isinstance(a, Matrix) else a)]
    b = [as_cyclo(x) for x in b]
    if len(rows) != len(b):
        raise ValueError("right-hand side length does not match the row count")
    ncols = len(rows[0]) if rows else 0
    rows = [[as_cyclo(x) for x in r] for r in rows]
    null = kernel(rows, ncols)
    aug = [r + [bi] for r, bi in zip(rows, b)]
    reduced, pivots = rref(aug, ncols + 1) if aug else ([], [])
    if ncols in pivots:
        return LinearSolution(None, tuple(tuple(v) for v in null))
    x = [ZERO] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    return LinearSolution(tuple(x), tuple(tuple(v) for v in null))


def det(m: Matrix) -> Cyclo:
    m._require_square()
    a = [list(r) for r in m.entries]
    n = m.rows
    result = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            return ZERO
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            result = -result
        piv = a[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[c])]
    return result


def inverse(m: Matrix) -> Matrix:
    m._require_square()
    n = m.rows
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.entries)]
    reduced, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise Singular("matrix is not invertible")
    return Matrix([row[n:] for row in reduced])
