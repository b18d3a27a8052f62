"""Exact matrices over a Euclidean ring and the Smith normal form.

Matrices are immutable; shape is stored explicitly so that 0-row and
0-column matrices behave (a module with generators but no relations has a
``g x 0`` relation matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MixedRings, ShapeMismatch
from .ring import EuclideanRing


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows", "_hash")

    def __init__(self, ring: EuclideanRing, rows: Iterable[Sequence], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ShapeMismatch("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged matrix")
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows
        self._hash = None

    @classmethod
    def checked(cls, ring, rows, ncols=None) -> Matrix:
        """Build a matrix, verifying that every entry belongs to ``ring``."""
        m = cls(ring, rows, ncols)
        for r in m.rows:
            for e in r:
                ring.check(e)
        return m

    @classmethod
    def zeros(cls, ring, m, n) -> Matrix:
        z = ring.zero
        return cls(ring, [[z] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, ring, n) -> Matrix:
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, ring, entries, m=None, n=None) -> Matrix:
        entries = list(entries)
        m = len(entries) if m is None else m
        n = len(entries) if n is None else n
        z = ring.zero
        rows = [[z] * n for _ in range(m)]
        for i, e in enumerate(entries):
            rows[i][i] = e
        return cls(ring, rows, n)

    @classmethod
    def from_columns(cls, ring, columns, nrows) -> Matrix:
        columns = [tuple(c) for c in columns]
        return cls(ring, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> Matrix:
        return Matrix(self.ring, [self.column(j) for j in range(self.ncols)], self.nrows)

    def _same_ring(self, other):
        if other.ring != self.ring:
            raise MixedRings(f"{self.ring.tag} and {other.ring.tag} matrices mixed")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same_ring(other)
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ring.zero
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = z
                for a, b in zip(r, c):
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(self.ring, out, other.ncols)

    def apply(self, v: Sequence) -> tuple:
        z = self.ring.zero
        out = []
        for r in self.rows:
            s = z
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def __add__(self, other: Matrix) -> Matrix:
        self._same_ring(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        return Matrix(self.ring, [[c * a for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.ring == other.ring and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        fmt = self.ring.format
        return "Matrix([" + ", ".join("[" + ", ".join(fmt(e) for e in r) + "]" for r in self.rows) + "])"

    def to_strings(self) -> list[list[str]]:
        return [[self.ring.format(e) for e in r] for r in self.rows]

    def is_zero(self) -> bool:
        return not any(e for r in self.rows for e in r)

    def hstack(self, *others: Matrix) -> Matrix:
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            self._same_ring(o)
            if o.nrows != self.nrows:
                raise ShapeMismatch("hstack needs equal row counts")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return Matrix(self.ring, rows, ncols)

    def vstack(self, *others: Matrix) -> Matrix:
        rows = list(self.rows)
        for o in others:
            self._same_ring(o)
            if o.ncols != self.ncols:
                raise ShapeMismatch("vstack needs equal column counts")
            rows.extend(o.rows)
        return Matrix(self.ring, rows, self.ncols)

    def select_rows(self, idx: Sequence[int]) -> Matrix:
        return Matrix(self.ring, [self.rows[i] for i in idx], self.ncols)

    def select_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix(self.ring, [[r[j] for j in idx] for r in self.rows], len(idx))

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ShapeMismatch("determinant of a non-square matrix")
        R = self.ring
        n = self.nrows
        if n == 0:
            return R.one
        a = [list(r) for r in self.rows]
        sign = R.one
        prev = R.one
        for k in range(n - 1):
            if not a[k][k]:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return R.zero
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = R.exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def block_diag(ring, blocks: Sequence[Matrix]) -> Matrix:
    m = sum(b.nrows for b in blocks)
    n = sum(b.ncols for b in blocks)
    rows = [[ring.zero] * n for _ in range(m)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(ring, rows, n)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with unimodular ``U``, ``V`` (inverses kept alongside)."""

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


class _Work:
    """Mutable state of a Smith reduction: A, U, U^-1, V, V^-1 as lists."""

    def __init__(self, A: Matrix):
        R = A.ring
        self.R = R
        self.m, self.n = A.shape
        self.a = [list(r) for r in A.rows]
        self.u = [list(r) for r in Matrix.identity(R, self.m).rows]
        self.ui = [list(r) for r in Matrix.identity(R, self.m).rows]
        self.v = [list(r) for r in Matrix.identity(R, self.n).rows]
        self.vi = [list(r) for r in Matrix.identity(R, self.n).rows]

    # Row transform on rows i, j by T = [[p, q], [r, s]] with inverse Ti.
    def rows2(self, i, j, T, Ti):
        (p, q), (r, s) = T
        for M in (self.a, self.u):
            ri, rj = M[i], M[j]
            M[i] = [p * x + q * y for x, y in zip(ri, rj)]
            M[j] = [r * x + s * y for x, y in zip(ri, rj)]
        # U^-1 <- U^-1 @ Ti^-1 restricted to columns i, j
        (p, q), (r, s) = Ti
        for row in self.ui:
            x, y = row[i], row[j]
            row[i] = x * p + y * r
            row[j] = x * q + y * s

    # Column transform on columns i, j: A <- A @ T (T acting on columns i, j).
    def cols2(self, i, j, T, Ti):
        (p, q), (r, s) = T
        for M in (self.a, self.v):
            for row in M:
                x, y = row[i], row[j]
                row[i] = x * p + y * r
                row[j] = x * q + y * s
        (p, q), (r, s) = Ti
        for M in (self.vi,):
            ri, rj = M[i], M[j]
            M[i] = [p * x + q * y for x, y in zip(ri, rj)]
            M[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def scale_row(self, i, unit):
        inv = self.R.unit_inverse(unit)
        self.a[i] = [inv * x for x in self.a[i]]
        self.u[i] = [inv * x for x in self.u[i]]
        for row in self.ui:
            row[i] = row[i] * unit

    def swap_rows(self, i, j):
        if i != j:
            o, z = self.R.one, self.R.zero
            T = ((z, o), (o, z))
            self.rows2(i, j, T, T)

    def swap_cols(self, i, j):
        if i != j:
            o, z = self.R.one, self.R.zero
            T = ((z, o), (o, z))
            self.cols2(i, j, T, T)

    def _gcd_transform(self, a, b):
        """Unimodular T with T @ [a, b]^T = [g, 0]^T, plus its inverse."""
        R = self.R
        o, z = R.one, R.zero
        if R.divides(a, b):
            c = R.exact_div(b, a)
            return ((o, z), (-c, o)), ((o, z), (c, o))
        g, u, v = R.ext_gcd(a, b)
        ag, bg = R.exact_div(a, g), R.exact_div(b, g)
        return ((u, v), (-bg, ag)), ((ag, -v), (bg, u))

    def clear_column(self, t):
        for i in range(t + 1, self.m):
            if self.a[i][t]:
                T, Ti = self._gcd_transform(self.a[t][t], self.a[i][t])
                self.rows2(t, i, T, Ti)

    def clear_row(self, t):
        for j in range(t + 1, self.n):
            if self.a[t][j]:
                T, Ti = self._gcd_transform(self.a[t][t], self.a[t][j])
                # column version: [a, b] @ T^T = [g, 0]
                (p, q), (r, s) = T
                (pi, qi), (ri, si) = Ti
                self.cols2(t, j, ((p, r), (q, s)), ((pi, ri), (qi, si)))


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """Smith normal form ``U @ A @ V = D`` over the matrix's ring.

    Pivot: entry of smallest Euclidean norm, ties to the lowest (row, col).
    Diagonal entries are canonical associates with d1 | d2 | ...; zeros trail.

    >>> from monad_forge.ring import Z
    >>> smith_normal_form(Matrix(Z, [[2, 4], [6, 8]])).diagonal
    [2, 4]
    """
    for r in A.rows:
        for e in r:
            A.ring.check(e)
    w = _Work(A)
    R = w.R
    m, n = w.m, w.n
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                e = w.a[i][j]
                if e:
                    key = (R.norm(e), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i, j = best
        w.swap_rows(t, i)
        w.swap_cols(t, j)
        while True:
            w.clear_column(t)
            w.clear_row(t)
            if not any(w.a[i][t] for i in range(t + 1, m)):
                break
        t += 1
    k = t
    # divisibility chain d_i | d_j
    for i in range(k):
        for j in range(i + 1, k):
            a, b = w.a[i][i], w.a[j][j]
            if R.divides(a, b):
                continue
            g, u, v = R.ext_gcd(a, b)
            ag, bg = R.exact_div(a, g), R.exact_div(b, g)
            o = R.one
            # rows: [[u, v], [-b/g, a/g]]; columns: [[1, -v b/g], [1, u a/g]]
            w.rows2(i, j, ((u, v), (-bg, ag)), ((ag, -v), (bg, u)))
            w.cols2(i, j, ((o, -v * bg), (o, u * ag)), ((u * ag, v * bg), (-o, o)))
    for i in range(k):
        _, unit = R.normalize(w.a[i][i])
        if unit != R.one:
            w.scale_row(i, unit)
    mk = lambda rows, nc: Matrix(R, rows, nc)
    return SmithDecomposition(mk(w.u, m), mk(w.a, n), mk(w.v, n), mk(w.ui, m), mk(w.vi, n))


def solve(B: Matrix, C: Matrix, snf: SmithDecomposition | None = None) -> Matrix | None:
    """Some ``X`` with ``B @ X == C``, or ``None`` when none exists over the ring.

    >>> from monad_forge.ring import Z
    >>> solve(Matrix(Z, [[2]]), Matrix(Z, [[6]]))
    Matrix([[3]])
    >>> solve(Matrix(Z, [[2]]), Matrix(Z, [[3]])) is None
    True
    """
    if B.nrows != C.nrows:
        raise ShapeMismatch(f"solve: B is {B.shape} but C is {C.shape}")
    R = B.ring
    s = snf or smith_normal_form(B)
    UC = s.U @ C
    diag = s.diagonal
    k = sum(1 for d in diag if d)
    Y = [[R.zero] * C.ncols for _ in range(B.ncols)]
    for i in range(B.nrows):
        for j in range(C.ncols):
            c = UC[i, j]
            if i < k:
                q, r = R.divmod(c, diag[i])
                if r:
                    return None
                Y[i][j] = q
            elif c:
                return None
    return s.V @ Matrix(R, Y, C.ncols)


def kernel_basis(B: Matrix, snf: SmithDecomposition | None = None) -> Matrix:
    """Columns forming a basis of ``{x : B @ x = 0}``."""
    s = snf or smith_normal_form(B)
    k = s.rank
    return s.V.select_columns(range(k, B.ncols))


class EchelonSpan:
    """Incrementally maintained echelon basis of a submodule of ``A^dim``.

    Vectors are inserted one at a time; each insertion reduces the vector
    against the current pivots and, where a pivot does not divide the new
    leading entry, replaces the pivot by a gcd combination.
    """

    def __init__(self, ring, dim: int):
        self.ring = ring
        self.dim = dim
        self.pivots: dict[int, list] = {}

    def insert(self, vector: Sequence) -> bool:
        """Add ``vector``; return whether the span grew."""
        R = self.ring
        v = list(vector)
        grew = False
        for col in range(self.dim):
            if not v[col]:
                continue
            piv = self.pivots.get(col)
            if piv is None:
                _, unit = R.normalize(v[col])
                inv = R.unit_inverse(unit)
                self.pivots[col] = [inv * x for x in v]
                return True
            a, b = piv[col], v[col]
            if R.divides(a, b):
                c = R.exact_div(b, a)
                v = [y - c * x for x, y in zip(piv, v)]
                continue
            g, s, t = R.ext_gcd(a, b)
            ag, bg = R.exact_div(a, g), R.exact_div(b, g)
            self.pivots[col] = [s * x + t * y for x, y in zip(piv, v)]
            v = [-bg * x + ag * y for x, y in zip(piv, v)]
            grew = True
        return grew

    def basis(self) -> list[tuple]:
        """Reduced (Hermite) basis: canonical pivots, entries above pivots reduced."""
        R = self.ring
        rows = [list(self.pivots[c]) for c in sorted(self.pivots)]
        cols = sorted(self.pivots)
        for k, col in enumerate(cols):
            piv = rows[k]
            for b in rows[:k]:
                red = R.reduce(b[col], piv[col])
                q = R.exact_div(b[col] - red, piv[col])
                if q:
                    b[:] = [x - q * y for x, y in zip(b, piv)]
        return [tuple(r) for r in rows]


def hermite_basis(ring, vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """Canonical echelon basis of the submodule spanned by ``vectors``.

    Pivots are canonical associates; entries in earlier basis vectors at a
    pivot position are reduced to canonical residues modulo that pivot.  The
    result depends only on the span, so it can be compared for equality.
    """
    span = EchelonSpan(ring, dim)
    for v in vectors:
        span.insert(v)
    return span.basis()


class MatrixEquations:
    """Linear system in several unknown matrices, each equation a sum of ``A X B`` terms.

    Unknown ``X`` (``m x n``) enters equation cell ``(r, c)`` with
    coefficient ``A[r, i] * B[j, c]`` at ``X[i, j]``; a missing ``A`` or
    ``B`` stands for the identity.  The assembled system is solved over the
    ring with :func:`solve`.
    """

    def __init__(self, ring):
        self.ring = ring
        self.unknowns: dict[str, tuple[int, int, int]] = {}
        self.size = 0
        self.rows: list[dict] = []
        self.rhs: list = []

    def unknown(self, name: str, m: int, n: int) -> str:
        self.unknowns[name] = (m, n, self.size)
        self.size += m * n
        return name

    def equation(self, terms, rhs: Matrix):
        R = self.ring
        p, q = rhs.shape
        cells = [dict() for _ in range(p * q)]
        for A, name, B in terms:
            m, n, off = self.unknowns[name]
            for r in range(p):
                for c in range(q):
                    row = cells[r * q + c]
                    for i in range(m):
                        a = (R.one if i == r else R.zero) if A is None else A.rows[r][i]
                        if not a:
                            continue
                        for j in range(n):
                            b = (R.one if j == c else R.zero) if B is None else B.rows[j][c]
                            if b:
                                k = off + i * n + j
                                row[k] = row.get(k, R.zero) + a * b
        self.rows.extend(cells)
        self.rhs.extend(rhs.rows[r][c] for r in range(p) for c in range(q))

    def solve(self) -> dict | None:
        R = self.ring
        if not self.rows:
            return {name: Matrix.zeros(R, m, n) for name, (m, n, _) in self.unknowns.items()}
        B = Matrix(R, [[row.get(k, R.zero) for k in range(self.size)] for row in self.rows], self.size)
        C = Matrix(R, [[v] for v in self.rhs], 1)
        X = solve(B, C)
        if X is None:
            return None
        flat = [X.rows[k][0] for k in range(self.size)]
        return {name: Matrix(R, [flat[off + i * n: off + (i + 1) * n] for i in range(m)], n)
                for name, (m, n, off) in self.unknowns.items()}
