"""Exact rational scalars and dense matrices with rank/kernel computations.

Every number in this package is a rational in canonical form (reduced,
positive denominator).  The scalar type is gmpy2's ``mpq`` when gmpy2 is
installed (roughly an order of magnitude faster) and the stdlib
``fractions.Fraction`` otherwise; the two behave identically here and
interoperate in comparisons.  Plain ``int``, ``Fraction`` and ``"p/q"``
strings are accepted wherever a scalar is expected.  There is no
floating point anywhere.

Set ``FH_RATIONAL_BACKEND=fraction`` (or ``gmpy2``) to force a backend.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd
from typing import Sequence

_backend = os.environ.get("FH_RATIONAL_BACKEND", "auto")
if _backend not in ("auto", "gmpy2", "fraction"):
    raise ImportError(f"unknown FH_RATIONAL_BACKEND {_backend!r}")
if _backend == "fraction":
    from fractions import Fraction as Rational
else:
    try:
        from gmpy2 import mpq as Rational
    except ImportError:
        if _backend == "gmpy2":
            raise
        from fractions import Fraction as Rational

ZERO = Rational(0)
ONE = Rational(1)


def rat(value, den=None) -> Rational:
    """Coerce an int, Fraction, mpq or "p/q" string to a canonical rational.

    An optional integer denominator is accepted: ``rat(1, 3)`` is one third.
    """
    try:
        return Rational(value) if den is None else Rational(value, den)
    except ZeroDivisionError:
        raise ValueError(f"rational with zero denominator: {value!r}") from None


def rat_str(value) -> str:
    """Render a rational as reduced "p/q" text ("p" when the denominator is 1)."""
    return str(Rational(value))


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix of rationals, stored row-major.

    Zero-row and zero-column matrices are legal; they appear as the
    degree-0 coboundaries of the complexes built on top of this module.
    """

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "RatMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = []
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
            entries.extend(rat(x) for x in row)
        return cls(rows, cols, tuple(entries))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        entries = [ZERO] * (n * n)
        for i in range(n):
            entries[i * n + i] = ONE
        return cls(n, n, tuple(entries))

    @classmethod
    def diagonal(cls, diag: Sequence) -> "RatMatrix":
        n = len(diag)
        entries = [ZERO] * (n * n)
        for i, x in enumerate(diag):
            entries[i * n + i] = rat(x)
        return cls(n, n, tuple(entries))

    def at(self, i: int, j: int) -> Rational:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        entries = tuple(
            self.entries[i * self.cols + j]
            for j in range(self.cols)
            for i in range(self.rows)
        )
        return RatMatrix(self.cols, self.rows, entries)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(
            self.rows,
            self.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(
            self.rows,
            self.cols,
            tuple(a - b for a, b in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = rat(c)
        return RatMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = [ZERO] * (self.rows * other.cols)
        oc = other.cols
        for i in range(self.rows):
            row = self.row(i)
            base = i * oc
            for k, a in enumerate(row):
                if not a:
                    continue
                orow = other.entries[k * oc : (k + 1) * oc]
                for j, b in enumerate(orow):
                    if b:
                        out[base + j] += a * b
        return RatMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product; ``vec`` has one entry per column."""
        if len(vec) != self.cols:
            raise ValueError(f"expected vector of length {self.cols}, got {len(vec)}")
        out = []
        for i in range(self.rows):
            acc = ZERO
            for a, x in zip(self.row(i), vec):
                if a and x:
                    acc += a * x
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not x for x in self.entries)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        entries = tuple(
            self.entries[i * self.cols + j] for i in row_idx for j in col_idx
        )
        return RatMatrix(len(row_idx), len(col_idx), entries)

    def _same_shape(self, other: "RatMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def _integer_rows(m: RatMatrix) -> list:
    """Clear denominators row by row; row scaling does not change the rank."""
    out = []
    for i in range(m.rows):
        row = m.row(i)
        scale = 1
        for x in row:
            d = int(x.denominator)
            scale = scale * d // gcd(scale, d)
        out.append([int(x.numerator) * (scale // int(x.denominator)) for x in row])
    return out


def rank(m: RatMatrix) -> int:
    """Exact rank over the rationals.

    Fraction-free (Bareiss) elimination on the denominator-cleared integer
    matrix keeps intermediate entries as minors of the input, which
    controls coefficient growth.  Pivoting is deterministic: first nonzero
    entry in column order.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[r], a[pivot_row] = a[pivot_row], a[r]
        pivot = a[r][c]
        for i in range(r + 1, nrows):
            lead = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (pivot * row_i[j] - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        r += 1
    return r


def _rref(m: RatMatrix):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = m.row_lists()
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_basis(m: RatMatrix) -> list:
    """Basis of the right null space of ``m``.

    The basis comes from the reduced echelon parameter form (one vector per
    free column, in ascending column order), normalized so the leading
    nonzero coordinate of each vector is 1.  Output is fully deterministic
    and has length ``cols - rank``.
    """
    if m.cols == 0:
        return []
    a, pivots = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[free] = ONE
        for row_idx, pc in enumerate(pivots):
            v[pc] = -a[row_idx][free]
        lead = next(x for x in v if x)
        if lead != ONE:
            v = [x / lead for x in v]
        basis.append(tuple(v))
    return basis


def cohomology_dim(d_in: RatMatrix, d_out: RatMatrix) -> int:
    """Dimension of ker(d_out) / im(d_in) for one step of a cochain complex.

    ``d_in`` maps into the middle space and ``d_out`` maps out of it.
    Rejects inputs whose composite is nonzero (a broken complex) or whose
    shapes do not line up.
    """
    if d_out.cols != d_in.rows:
        raise ValueError(
            f"dimension mismatch: d_out has {d_out.cols} columns, "
            f"d_in has {d_in.rows} rows"
        )
    if not (d_out @ d_in).is_zero():
        raise ValueError("not a complex: d_out @ d_in is nonzero")
    return (d_out.cols - rank(d_out)) - rank(d_in)


def zeros_grid(rows: int, cols: int) -> list:
    return [[ZERO] * cols for _ in range(rows)]


def add_block(grid: list, row_off: int, col_off: int, block: RatMatrix, sign: int = 1):
    """Accumulate ``sign * block`` into a mutable grid at the given offsets."""
    for i in range(block.rows):
        target = grid[row_off + i]
        brow = block.row(i)
        for j, x in enumerate(brow):
            if x:
                target[col_off + j] += x if sign > 0 else -x


def grid_matrix(grid: list, cols: int | None = None) -> RatMatrix:
    rows = len(grid)
    if cols is None:
        cols = len(grid[0]) if rows else 0
    entries = []
    for row in grid:
        entries.extend(row)
    return RatMatrix(rows, cols, tuple(entries))
