"""Exact integer linear algebra: normal forms, ranks, lattice indices and
affine unimodular coordinate changes.

Matrices are stored as :class:`IntMatrix`, an immutable row-major container of
Python ints.  Every routine is exact; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class NotAFacet(ValueError):
    """Raised when a face handed to :func:`facet_normalization` is not a facet."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.rows else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = other.columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)],
            other.cols)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        cols = self.columns()
        return IntMatrix.from_rows(zip(*[cols[j] for j in idx]), len(idx)) if self.rows else \
            IntMatrix(0, len(idx), ())

    def __repr__(self):
        return f"IntMatrix({self.to_rows()})"


def as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.to_rows()
    return [list(map(int, r)) for r in M]


def determinant(M) -> int:
    """Bareiss fraction-free determinant."""
    a = as_rows(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[-1][-1]


def rank(M) -> int:
    a = [[Fraction(x) for x in r] for r in as_rows(M)]
    return len(_row_echelon(a))


def _row_echelon(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q; returns the nonzero rows."""
    if not a:
        return []
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return a[:r]


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span of ``points`` (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs and diffs[0] else 0


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ M @ V == D``, ``U``, ``V`` unimodular and
    ``D`` diagonal with d1 | d2 | ... (nonnegative).

    Pivoting uses the smallest nonzero entry of the remaining block.
    """
    d = as_rows(M)
    m = len(d)
    n = len(d[0]) if m else (M.cols if isinstance(M, IntMatrix) else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for r in d:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = d[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, d[i][t] // p)
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, d[t][j] // p)
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            U[t] = [-x for x in U[t]]
        if best is None:
            break
    return (IntMatrix.from_rows(d, n), IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n))


def smith_invariants(M) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    D, _, _ = smith_normal_form(M)
    return [D[i, i] for i in range(min(D.rows, D.cols)) if D[i, i]]


def hermite_normal_form(M) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ M == H``.

    ``H`` is in row echelon form, pivots are positive and the entries above
    each pivot lie in ``[0, pivot)``.  Zero rows are kept at the bottom.
    """
    a = as_rows(M)
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    done = done and a[i][c] == 0
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            U[r] = [-x for x in U[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return IntMatrix.from_rows(a, n), IntMatrix.from_rows(U, m)


def inverse_unimodular(M) -> IntMatrix:
    """Exact inverse of a square integer matrix with determinant +-1."""
    a = as_rows(M)
    n = len(a)
    if abs(determinant(a)) != 1:
        raise ValueError("matrix is not unimodular")
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(a)]
    red = _row_echelon(aug)
    return IntMatrix.from_rows([[int(x) for x in r[n:]] for r in red], n)


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A basis (HNF rows) of the lattice spanned by ``vectors`` in Z^dim."""
    if not vectors:
        return []
    H, _ = hermite_normal_form(vectors)
    return [list(r) for r in H.to_rows() if any(r)]


def lattice_index(vectors: Sequence[Sequence[int]], dim: int) -> int:
    """Index of the lattice spanned by ``vectors`` in Z^dim; 0 if not full rank."""
    inv = smith_invariants(vectors) if vectors else []
    if len(inv) < dim:
        return 0
    out = 1
    for x in inv:
        out *= x
    return out


def solve_in_basis(basis: list[list[int]], v: Sequence[int]) -> list[int]:
    """Integer coordinates of ``v`` with respect to an HNF row basis."""
    v = list(v)
    coords = []
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        q, r = divmod(v[c], row[c])
        if r:
            raise ValueError("vector not in lattice")
        coords.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        raise ValueError("vector not in lattice")
    return coords


def affine_lattice_coordinates(points: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Coordinates of ``points`` with respect to the affine lattice they generate.

    The result is an affinely isomorphic configuration spanning a lattice of
    index one, shifted so that every coordinate has minimum zero.
    """
    if not points:
        return []
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points]
    basis = lattice_basis(diffs[1:], len(p0)) if len(points) > 1 else []
    coords = [solve_in_basis(basis, v) for v in diffs]
    if not basis:
        return [() for _ in points]
    mins = [min(c[k] for c in coords) for k in range(len(basis))]
    return [tuple(x - m for x, m in zip(c, mins)) for c in coords]


@dataclass(frozen=True)
class ValidationReport:
    first_row_ones: bool
    full_rank: bool
    lattice_index_one: bool
    lattice_index: int

    @property
    def ok(self) -> bool:
        return self.first_row_ones and self.full_rank and self.lattice_index_one

    def failures(self) -> list[str]:
        out = []
        if not self.first_row_ones:
            out.append("first row is not all ones")
        if not self.full_rank:
            out.append("matrix is not of full row rank")
        if not self.lattice_index_one:
            out.append(f"affine lattice of columns has index {self.lattice_index}")
        return out


def validate_design_matrix(A) -> ValidationReport:
    """Check the standing assumptions on a design matrix; never raises."""
    rows = as_rows(A)
    if not rows or not rows[0]:
        return ValidationReport(False, False, False, 0)
    ones = all(x == 1 for x in rows[0])
    full = rank(rows) == len(rows)
    d = len(rows) - 1
    cols = list(zip(*rows[1:])) if d else [() for _ in rows[0]]
    if d == 0:
        idx = 1
    else:
        diffs = [[x - y for x, y in zip(c, cols[0])] for c in cols[1:]]
        idx = lattice_index(diffs, d) if diffs else 0
    return ValidationReport(ones, full, idx == 1, idx)


@dataclass(frozen=True)
class UnimodularAffineMap:
    """``x -> linear_part @ x + translation`` with ``det(linear_part) = +-1``."""

    linear_part: IntMatrix
    translation: tuple[int, ...]

    def __post_init__(self):
        if abs(determinant(self.linear_part)) != 1:
            raise ValueError("linear part is not unimodular")

    def apply(self, point: Sequence[int]) -> tuple[int, ...]:
        L = self.linear_part
        return tuple(sum(L[i, j] * point[j] for j in range(L.cols)) + self.translation[i]
                     for i in range(L.rows))

    def apply_to_design_matrix(self, A) -> IntMatrix:
        rows = as_rows(A)
        pts = list(zip(*rows[1:]))
        new = [self.apply(p) for p in pts]
        return IntMatrix.from_rows([rows[0]] + [list(r) for r in zip(*new)], len(rows[0]))

    def is_identity(self) -> bool:
        return self.linear_part == IntMatrix.identity(self.linear_part.rows) and not any(self.translation)


def _primitive(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in v), g


def _completing_column_ops(n: Sequence[int]) -> list[list[int]]:
    """Unimodular ``V`` with ``n @ V = e_last`` for a primitive row vector ``n``."""
    d = len(n)
    v = list(n)
    V = [[int(i == j) for j in range(d)] for i in range(d)]
    last = d - 1

    def swap(i, j):
        v[i], v[j] = v[j], v[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for j in range(d - 1):
        while v[j]:
            if v[last] == 0:
                swap(j, last)
                continue
            q = v[j] // v[last]
            v[j] -= q * v[last]
            for r in V:
                r[j] -= q * r[last]
            if v[j]:
                swap(j, last)
    if v[last] < 0:
        for r in V:
            r[last] = -r[last]
    return V


def facet_normalization(A, F) -> UnimodularAffineMap:
    """Affine unimodular map moving facet ``F`` of conv(A) into the hyperplane
    ``x_d = 0`` with every column of ``A`` in the nonnegative orthant.

    ``F`` is any object with ``normal``, ``offset`` and ``face_dim`` attributes
    (see :class:`mldeg.polytope.FaceDescriptor`).
    """
    rows = as_rows(A)
    d = len(rows) - 1
    if F.face_dim != d - 1:
        raise NotAFacet(f"face of dimension {F.face_dim} in a {d}-dimensional polytope")
    normal, g = _primitive(F.normal)
    offset = F.offset // g
    V = _completing_column_ops(normal)
    L = inverse_unimodular(V)
    assert tuple(L.row(d - 1)) == normal
    pts = list(zip(*rows[1:]))
    images = [[sum(L[i, j] * p[j] for j in range(d)) for i in range(d)] for p in pts]
    shift = [-min(img[i] for img in images) for i in range(d - 1)] + [-offset]
    return UnimodularAffineMap(L, tuple(shift))
