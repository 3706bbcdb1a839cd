"""Dense polynomial matrices: determinants, minors, fraction-free rank."""

from __future__ import annotations

from itertools import combinations

from .errors import ToolkitError
from .ideals import divide_exact
from .rings import Polynomial, PolyRing


class PolyMatrix:
    """Immutable matrix of polynomials over a fixed ring."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring: PolyRing, rows, nrows=None, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows) if nrows is None else nrows
        self.ncols = len(rows[0]) if rows else (ncols if ncols is not None else 0)
        if rows and any(len(r) != self.ncols for r in rows):
            raise ToolkitError("ragged matrix")
        for r in rows:
            for p in r:
                ring.check_same(p.ring)

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [self.col(j) for j in range(self.ncols)],
                          self.ncols, self.nrows)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ToolkitError("matrix shape mismatch")
        z = self.ring.zero()
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = z
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out, self.nrows, other.ncols)

    def apply(self, vector):
        """Matrix times a column vector of polynomials."""
        if len(vector) != self.ncols:
            raise ToolkitError("vector length mismatch")
        z = self.ring.zero()
        out = []
        for i in range(self.nrows):
            acc = z
            for k, v in enumerate(vector):
                a = self.rows[i][k]
                if a.terms and v.terms:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not p.terms for r in self.rows for p in r)

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix(fn(self.rows[0][0]).ring if self.rows and self.rows[0] else self.ring,
                          [[fn(p) for p in r] for r in self.rows], self.nrows, self.ncols) \
            if self.rows else self

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.rows)
        return f"PolyMatrix({self.nrows}x{self.ncols}: {body})"


def determinant(entries, ring: PolyRing) -> Polynomial:
    """Determinant by Laplace expansion with memoization on column subsets."""
    n = len(entries)
    if n == 0:
        return ring.one()
    if any(len(r) != n for r in entries):
        raise ToolkitError("determinant of a non-square matrix")
    memo: dict[tuple[int, ...], Polynomial] = {}

    def rec(r: int, cols: tuple[int, ...]) -> Polynomial:
        if r == n:
            return ring.one()
        if cols in memo:
            return memo[cols]
        acc = ring.zero()
        for k, c in enumerate(cols):
            a = entries[r][c]
            if not a.terms:
                continue
            sub = rec(r + 1, cols[:k] + cols[k + 1:])
            term = a * sub
            if k % 2:
                term = -term
            acc = acc + term
        memo[cols] = acc
        return acc

    return rec(0, tuple(range(n)))


def minor_ideal_generators(mat: PolyMatrix, k: int) -> list[Polynomial]:
    """All k x k minors; the empty list for k above either dimension."""
    ring = mat.ring
    if k == 0:
        return [ring.one()]
    if k > mat.nrows or k > mat.ncols:
        return []
    out = []
    for rs in combinations(range(mat.nrows), k):
        for cs in combinations(range(mat.ncols), k):
            d = determinant([[mat[r, c] for c in cs] for r in rs], ring)
            if d.terms:
                out.append(d)
    return out


def bareiss_rank(mat: PolyMatrix) -> int:
    """Rank over the fraction field via fraction-free Gaussian elimination."""
    ring = mat.ring
    m = [list(r) for r in mat.rows]
    nr, nc = mat.nrows, mat.ncols
    rank = 0
    prev = ring.one()
    row = 0
    for col in range(nc):
        pivot = None
        for r in range(row, nr):
            if m[r][col].terms:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(row + 1, nr):
            for c in range(col + 1, nc):
                num = m[row][col] * m[r][c] - m[r][col] * m[row][c]
                m[r][c] = divide_exact(num, prev) if prev.terms and not prev.is_constant() \
                    else num * _const_inv(prev)
            m[r][col] = ring.zero()
        prev = m[row][col]
        rank += 1
        row += 1
        if row == nr:
            break
    return rank


def _const_inv(p: Polynomial):
    c = p.constant_value()
    if p.ring.field.char:
        return pow(c, -1, p.ring.field.char)
    return 1 / c
