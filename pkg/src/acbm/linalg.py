"""Exact linear algebra over the rationals.

Everything here is plain Gauss-Jordan elimination on lists of mpq.
Pivoting picks the first nonzero entry; with exact arithmetic there is
no stability concern, only size growth, which stays tame at the matrix
sizes this package meets.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatch, Singular
from .scalar import ONE, ZERO, rat
from .tensor import Tensor, freeze, tensor


class RowReducer:
    """Incremental reduced row echelon form.

    Rows may carry trailing bookkeeping columns: pivots are only ever
    chosen among the first `pivot_width` columns, the tail just comes
    along for the ride.
    """

    def __init__(self, width: int, pivot_width: int | None = None):
        self.width = width
        self.pivot_width = width if pivot_width is None else pivot_width
        self.rows: list[list] = []
        self.pivot_cols: list[int] = []
        self._col_to_row: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row) -> list:
        """Return a copy of `row` reduced against the current rows."""
        r = [rat(x) for x in row]
        if len(r) != self.width:
            raise ShapeMismatch(f"row of length {len(r)}, expected {self.width}")
        for col in range(self.pivot_width):
            c = r[col]
            if c == 0:
                continue
            i = self._col_to_row.get(col)
            if i is None:
                continue
            prow = self.rows[i]
            for k in range(col, self.width):
                if prow[k]:
                    r[k] -= c * prow[k]
        return r

    def add(self, row) -> bool:
        """Install a row if independent.  True when the rank grew."""
        r = self.reduce(row)
        pcol = next((j for j in range(self.pivot_width) if r[j] != 0), None)
        if pcol is None:
            return False
        inv = ONE / r[pcol]
        r = [x * inv for x in r]
        for prow in self.rows:
            c = prow[pcol]
            if c:
                for k in range(pcol, self.width):
                    if r[k]:
                        prow[k] -= c * r[k]
        self._col_to_row[pcol] = len(self.rows)
        self.rows.append(r)
        self.pivot_cols.append(pcol)
        return True

    def free_columns(self) -> list[int]:
        return [j for j in range(self.pivot_width) if j not in self._col_to_row]

    def nullspace(self) -> list[list]:
        """Basis of the homogeneous solutions within the pivot columns."""
        basis = []
        for f in self.free_columns():
            v = [ZERO] * self.pivot_width
            v[f] = ONE
            for pcol, row in zip(self.pivot_cols, self.rows):
                v[pcol] = -row[f]
            basis.append(v)
        return basis


class LinearSystem:
    """Streamed exact solver for A x = b with full consistency tracking."""

    def __init__(self, unknowns: int):
        self.unknowns = unknowns
        self._red = RowReducer(unknowns + 1, pivot_width=unknowns)
        self.consistent = True
        # columns never touched by any equation; they are pure gauge
        self._seen = [False] * unknowns

    @property
    def rank(self) -> int:
        return self._red.rank

    def add_equation(self, coeffs, rhs) -> None:
        row = list(coeffs)
        for j, c in enumerate(row):
            if c != 0:
                self._seen[j] = True
        r = self._red.reduce(row + [rat(rhs)])
        if all(r[j] == 0 for j in range(self.unknowns)):
            if r[self.unknowns] != 0:
                self.consistent = False
            return
        self._red.add(r)

    def untouched_columns(self) -> list[int]:
        return [j for j, seen in enumerate(self._seen) if not seen]

    def pin(self, column: int, value=ZERO) -> None:
        """Force one unknown to a value (used to fix gauge freedom)."""
        row = [ZERO] * self.unknowns
        row[column] = ONE
        self.add_equation(row, value)

    def particular(self) -> list:
        """One solution, with every free unknown set to zero."""
        if not self.consistent:
            raise Singular("inconsistent system has no solution")
        x = [ZERO] * self.unknowns
        for pcol, row in zip(self._red.pivot_cols, self._red.rows):
            x[pcol] = row[self.unknowns]
        return x

    def nullspace(self) -> list[list]:
        return self._red.nullspace()


class SpanSolver:
    """Membership and coordinates in the span of a fixed vector list.

    Building costs one elimination pass; each query is a single reduce,
    which is what makes bulk membership testing affordable.
    """

    def __init__(self, vectors: list):
        vectors = [list(v) for v in vectors]
        self.count = len(vectors)
        self.length = len(vectors[0]) if vectors else 0
        for v in vectors:
            if len(v) != self.length:
                raise ShapeMismatch("span vectors of unequal length")
        self._red = RowReducer(self.length + self.count, pivot_width=self.length)
        for i, v in enumerate(vectors):
            tail = [ZERO] * self.count
            tail[i] = ONE
            self._red.add(v + tail)

    @property
    def rank(self) -> int:
        return self._red.rank

    def solve(self, vector) -> list | None:
        """Coefficients expressing `vector` over the original list, or None."""
        v = list(vector)
        if len(v) != self.length:
            raise ShapeMismatch("query vector of wrong length")
        r = self._red.reduce(v + [ZERO] * self.count)
        if any(r[j] != 0 for j in range(self.length)):
            return None
        return [-r[self.length + i] for i in range(self.count)]

    def contains(self, vector) -> bool:
        return self.solve(vector) is not None


def nullspace(rows, width: int) -> list[list]:
    red = RowReducer(width)
    for row in rows:
        red.add(row)
    return red.nullspace()


def rank_of(vectors) -> int:
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    red = RowReducer(len(vectors[0]))
    for v in vectors:
        red.add(v)
    return red.rank


def in_span(vector, basis) -> tuple[bool, list | None]:
    solver = SpanSolver([list(b) for b in basis])
    coeffs = solver.solve(list(vector))
    return (coeffs is not None), coeffs


def invert(m: Tensor) -> Tensor:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"cannot invert shape {m.shape}")
    d = m.shape[0]
    a = [
        [rat(m[i, j]) for j in range(d)] + [ONE if k == i else ZERO for k in range(d)]
        for i in range(d)
    ]
    for col in range(d):
        piv = next((r for r in range(col, d) if a[r][col] != 0), None)
        if piv is None:
            raise Singular(f"matrix of rank < {d} has no inverse")
        a[col], a[piv] = a[piv], a[col]
        inv = ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return tensor([row[d:] for row in a])


def signature(sym: Tensor) -> tuple[int, int, int]:
    """Counts (positive, negative, zero) of a symmetric matrix, exactly.

    Symmetric congruence diagonalization; row and column operations are
    applied in matched pairs so the inertia is preserved.
    """
    if sym.ndim != 2 or sym.shape[0] != sym.shape[1]:
        raise ShapeMismatch(f"signature needs a square matrix, got {sym.shape}")
    d = sym.shape[0]
    a = [[rat(sym[i, j]) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ShapeMismatch("signature needs a symmetric matrix")

    def row_add(dst, src, c):
        for k in range(d):
            a[dst][k] += c * a[src][k]

    def col_add(dst, src, c):
        for k in range(d):
            a[k][dst] += c * a[k][src]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for k in range(d):
            a[k][i], a[k][j] = a[k][j], a[k][i]

    pos = neg = zero = 0
    for k in range(d):
        if a[k][k] == 0:
            hit = next((i for i in range(k, d) if a[i][i] != 0), None)
            if hit is not None:
                if hit != k:
                    swap(k, hit)
            else:
                pair = next(
                    ((i, j) for i in range(k, d) for j in range(i + 1, d) if a[i][j] != 0),
                    None,
                )
                if pair is None:
                    zero += d - k
                    break
                i, j = pair
                row_add(i, j, ONE)
                col_add(i, j, ONE)
                if i != k:
                    swap(k, i)
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(k + 1, d):
            if a[r][k] != 0:
                f = a[r][k] / p
                row_add(r, k, -f)
                col_add(r, k, -f)
    return pos, neg, zero
