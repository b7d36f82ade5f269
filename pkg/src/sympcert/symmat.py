"""Small symbolic matrices with Poly entries, plus exact rational helpers."""

from __future__ import annotations

from typing import Callable, Sequence

from gmpy2 import mpq

from .polyring import DEFAULT_TABLE, Poly, PolyError, VariableTable, to_rational


class SymMatrix:
    """Row-major matrix of Poly entries (1-based accessors follow the usual M_{i,j} indexing)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Poly]):
        if rows <= 0 or cols <= 0:
            raise PolyError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise PolyError("entries length does not match the shape")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows, table: VariableTable = DEFAULT_TABLE) -> "SymMatrix":
        flat = []
        for row in rows:
            if len(row) != len(rows[0]):
                raise PolyError("ragged rows")
            for x in row:
                flat.append(x if isinstance(x, Poly) else Poly.const(x, table))
        return cls(len(rows), len(rows[0]), flat)

    @classmethod
    def identity(cls, n: int, table: VariableTable = DEFAULT_TABLE) -> "SymMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], table)

    @classmethod
    def symbolic(cls, prefix: str, rows: int, cols: int,
                 table: VariableTable = DEFAULT_TABLE) -> "SymMatrix":
        """Matrix of symbols ``prefix{i}{j}``, e.g. ``symbolic("X", 4, 4)``."""
        return cls.from_rows([[Poly.var(f"{prefix}{i}{j}", table) for j in range(1, cols + 1)]
                              for i in range(1, rows + 1)], table)

    @classmethod
    def blocks(cls, grid) -> "SymMatrix":
        """Assemble from a 2-D grid of SymMatrix blocks."""
        out = []
        for brow in grid:
            height = brow[0].rows
            for r in range(height):
                line = []
                for b in brow:
                    if b.rows != height:
                        raise PolyError("block heights differ")
                    line.extend(b.row(r))
                out.append(line)
        return cls.from_rows(out, grid[0][0].table)

    @property
    def table(self) -> VariableTable:
        return self.entries[0].table

    def __getitem__(self, idx) -> Poly:
        i, j = idx
        return self.entries[i * self.cols + j]

    def at(self, i: int, j: int) -> Poly:
        """1-based entry access, ``at(1, 2)`` is ``M_{1,2}``."""
        return self[i - 1, j - 1]

    def row(self, i: int) -> list[Poly]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def tolist(self) -> list[list[Poly]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SymMatrix":
        """0-based row/column selection."""
        return SymMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def map(self, fn: Callable[[Poly], Poly]) -> "SymMatrix":
        return SymMatrix(self.rows, self.cols, [fn(x) for x in self.entries])

    def substitute(self, assignment) -> "SymMatrix":
        return self.map(lambda p: p.substitute(assignment))

    def transpose(self) -> "SymMatrix":
        return SymMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols)
                                                for i in range(self.rows)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __matmul__(self, other: "SymMatrix") -> "SymMatrix":
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"SymMatrix({self.rows}x{self.cols})"


def mat_mul(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    if a.cols != b.rows:
        raise PolyError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    zero = Poly.const(0, a.table)
    out = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = zero
            for k in range(a.cols):
                x, y = a[i, k], b[k, j]
                if x and y:
                    acc = acc + x * y
            out.append(acc)
    return SymMatrix(a.rows, b.cols, out)


def mat_det(a: SymMatrix) -> Poly:
    """Determinant by cofactor expansion along the first row (n <= 4)."""
    if a.rows != a.cols:
        raise PolyError("determinant of a non-square matrix")
    if a.rows > 4:
        raise PolyError("cofactor determinants are limited to size 4")
    n = a.rows
    memo: dict[tuple[int, ...], Poly] = {}

    def minor(cols: tuple[int, ...]) -> Poly:
        # determinant of the bottom len(cols) rows restricted to ``cols``
        if cols in memo:
            return memo[cols]
        r = n - len(cols)
        if len(cols) == 1:
            val = a[r, cols[0]]
        else:
            val = Poly.const(0, a.table)
            for pos, c in enumerate(cols):
                x = a[r, c]
                if not x:
                    continue
                sub = minor(cols[:pos] + cols[pos + 1:])
                if not sub:
                    continue
                term = x * sub
                val = val - term if pos % 2 else val + term
        memo[cols] = val
        return val

    return minor(tuple(range(n)))


def permutation_matrix(spec: str, h: int | None = None, g: int | None = None,
                       table: VariableTable = DEFAULT_TABLE) -> SymMatrix:
    """``"J23_4"`` or ``"J_blockswap"`` with ``h`` and ``g``.

    ``J_blockswap(h, g)`` reorders (w_1..w_h, w'_1..w'_h', e_1..e_h, e'_1..e'_h')
    into (w_1..w_h, e_1..e_h, w'_1..w'_h', e'_1..e'_h') with h' = g - h.  It is
    an involution only for h = h', so other shapes are rejected.
    """
    perm = permutation_indices(spec, h, g)
    n = len(perm)
    return SymMatrix.from_rows([[1 if perm[i] == j else 0 for j in range(n)]
                                for i in range(n)], table)


def permutation_indices(spec: str, h: int | None = None, g: int | None = None) -> list[int]:
    if spec == "J23_4":
        return [0, 2, 1, 3]
    if spec == "J_blockswap":
        if h is None or g is None or not (0 < h < g) or 2 * h != g:
            raise PolyError("J_blockswap needs 0 < h = g - h")
        hp = g - h
        source = list(range(h)) + list(range(h + hp, 2 * h + hp)) \
            + list(range(h, h + hp)) + list(range(2 * h + hp, 2 * g))
        return source
    raise PolyError(f"unknown permutation spec {spec!r}")


# ---------------------------------------------------------------------------
# Exact rational matrices (lists of lists of mpq)
# ---------------------------------------------------------------------------


def rational_matrix(rows) -> list[list[mpq]]:
    return [[to_rational(x) for x in row] for row in rows]


def rat_mul(a, b):
    if len(a[0]) != len(b):
        raise PolyError("dimension mismatch")
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), mpq(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def rat_identity(n: int):
    return [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def rat_det(a) -> mpq:
    n = len(a)
    m = [list(r) for r in a]
    det = mpq(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def mat_inverse_rational(a) -> list[list[mpq]]:
    """Exact Gauss-Jordan inverse; raises ``ZeroDivisionError`` if singular."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise PolyError("inverse of a non-square matrix")
    m = [[to_rational(x) for x in row] + [mpq(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rat_block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[mpq(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = to_rational(x)
        off += len(b)
    return out


def rat_blocks(grid):
    """Assemble a rational matrix from a 2-D grid of rational blocks."""
    out = []
    for brow in grid:
        for r in range(len(brow[0])):
            line = []
            for b in brow:
                line.extend(to_rational(x) for x in b[r])
            out.append(line)
    return out
