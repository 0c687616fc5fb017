"""Exact dense matrices over the integers and rationals.

Entries are Python ``int`` or ``Fraction``; fractions with denominator 1 are
stored as ``int`` so integer matrices stay integer through arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = ["Matrix", "Singular", "primitive", "mat_rank", "mat_nullspace", "mat_det", "mat_inverse"]


class Singular(ArithmeticError):
    """Inverse requested for a matrix with zero determinant."""


def _norm(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return _norm(Fraction(x))
    return _norm(Fraction(x))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to integers with content 1, first nonzero > 0."""
    v = [Fraction(x) for x in v]
    if not any(v):
        return tuple(0 for _ in v)
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable], rows: int | None = None, cols: int | None = None):
        grid = tuple(tuple(_norm(x) for x in row) for row in data)
        r = len(grid) if rows is None else rows
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if len(grid) != r or any(len(row) != cols for row in grid):
            raise ValueError(f"entry grid does not match declared {r}x{cols}")
        self.rows, self.cols, self.data = r, cols, grid

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        out = []
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                out.append([x for b in brow for x in b.data[i]])
        return cls(out)

    # -- access ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def top(self, m: int) -> "Matrix":
        """Leading m x m block, written Z[m;m] in the usual notation."""
        return self.submatrix(range(m), range(m))

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_skew(self) -> bool:
        return self.is_square() and all(
            self.data[i][j] == -self.data[j][i] for i in range(self.rows) for j in range(i, self.cols)
        )

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    # -- arithmetic ------------------------------------------------------------

    @property
    def T(self) -> "Matrix":
        return Matrix([[r[j] for r in self.data] for j in range(self.cols)], self.cols, self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        return Matrix([[a * c for a in r] for r in self.data], self.rows, self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = list(zip(*other.data)) if other.rows else [() for _ in range(other.cols)]
            return Matrix([[sum(a * b for a, b in zip(r, c) if a and b) for c in ocols]
                           for r in self.data], self.rows, other.cols)
        v = list(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(_norm(sum(a * b for a, b in zip(r, v))) for r in self.data)

    def __rmatmul__(self, other):
        v = list(other)
        if len(v) != self.rows:
            raise ValueError("vector length mismatch")
        return tuple(_norm(sum(v[i] * self.data[i][j] for i in range(self.rows)))
                     for j in range(self.cols))

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.shape, self.data))

    def __repr__(self) -> str:
        return f"Matrix({[list(map(str, r)) for r in self.data]})"

    def __str__(self) -> str:
        cells = [[str(x) for x in r] for r in self.data]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    # -- exact linear algebra --------------------------------------------------

    def _integer_rows(self) -> list[list[int]]:
        """Rows rescaled by their denominators' lcm; rank is unchanged."""
        out = []
        for r in self.data:
            den = reduce(lcm, (x.denominator for x in r if isinstance(x, Fraction)), 1)
            out.append([int(x * den) for x in r])
        return out

    def rank(self) -> int:
        """Rank via fraction-free (Bareiss) elimination on integer rows."""
        a = self._integer_rows()
        rows, cols = self.rows, self.cols
        rank, prev, r = 0, 1, 0
        for c in range(cols):
            if r == rows:
                break
            piv = next((i for i in range(r, rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            p = a[r][c]
            for i in range(r + 1, rows):
                f = a[i][c]
                a[i] = [(p * a[i][j] - f * a[r][j]) // prev for j in range(cols)]
            prev = p
            r += 1
            rank += 1
        return rank

    def det(self):
        """Determinant via Bareiss elimination, exact."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        dens = [reduce(lcm, (x.denominator for x in r if isinstance(x, Fraction)), 1) for r in self.data]
        a = [[int(x * d) for x in r] for r, d in zip(self.data, dens)]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                piv = next((i for i in range(k + 1, n) if a[i][k]), None)
                if piv is None:
                    return 0
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        scale = reduce(lambda x, y: x * y, dens, 1)
        return _norm(Fraction(sign * a[n - 1][n - 1], scale))

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        a = [[Fraction(x) for x in r] for r in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            piv = next((i for i in range(r, self.rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            p = a[r][c]
            a[r] = [x / p for x in a[r]]
            for i in range(self.rows):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        return a, pivots

    def nullspace(self, side: str = "right") -> list[tuple[int, ...]]:
        """Primitive integer basis of the right (M v = 0) or left (v M = 0) nullspace."""
        if side == "left":
            return self.T.nullspace("right")
        if side != "right":
            raise ValueError("side must be 'left' or 'right'")
        a, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for row, pc in enumerate(pivots):
                v[pc] = -a[row][f]
            basis.append(primitive(v))
        return basis

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.data)], n, 2 * n)
        a, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise Singular("matrix is singular")
        return Matrix([row[n:] for row in a], n, n)


def mat_rank(m: Matrix) -> int:
    return m.rank()


def mat_nullspace(m: Matrix, side: str = "right") -> list[tuple[int, ...]]:
    return m.nullspace(side)


def mat_det(m: Matrix):
    return m.det()


def mat_inverse(m: Matrix) -> Matrix:
    return m.inverse()
