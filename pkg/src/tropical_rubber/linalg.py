"""Exact integer linear algebra for lattice computations.

Lattice elements are column vectors and morphisms act by left
multiplication.  Everything is computed over Python integers (and
``fractions.Fraction`` where a rational solve is needed), so results can be
checked by exact re-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


class LinalgError(ValueError):
    pass


class NotSurjective(LinalgError):
    """The matrix does not define a surjection of lattices."""


class NotSaturated(LinalgError):
    """A sublattice is not saturated, so the quotient would have torsion."""


class IntMatrix:
    """Immutable integer matrix stored row-major.

    Shapes with zero rows or zero columns are allowed; they come up for the
    trivial lattice and the zero base cone.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise LinalgError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise LinalgError("ragged matrix")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _trusted(cls, rows: tuple, ncols: int) -> "IntMatrix":
        """Wrap a tuple of int tuples without copying or checking."""
        M = cls.__new__(cls)
        M._rows, M.nrows, M.ncols, M._hash = rows, len(rows), ncols, None
        return M

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise LinalgError("column of wrong length")
        return cls(
            [[c[i] for c in columns] for i in range(nrows)], ncols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        if not self._rows:
            return ((),) * self.ncols
        return tuple(zip(*self._rows))

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix._trusted(self.columns, self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns
        return IntMatrix._trusted(
            tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in ocols) for row in self._rows),
            other.ncols,
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix times vector; works for int and Fraction entries."""
        if len(v) != self.ncols:
            raise LinalgError("vector of wrong length")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise LinalgError("shape mismatch")
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self._rows], ncols=self.ncols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise LinalgError("row count mismatch")
        return IntMatrix(
            [a + b for a, b in zip(self._rows, other._rows)],
            ncols=self.ncols + other.ncols,
        )

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise LinalgError("column count mismatch")
        return IntMatrix(self._rows + other._rows, ncols=self.ncols)

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        return IntMatrix([self._rows[i] for i in idx], ncols=self.ncols)

    def select_cols(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[r[j] for j in idx] for r in self._rows], ncols=len(idx))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._rows for a in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()}, ncols={self.ncols})"


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == S`` with ``S`` diagonal and ``U``, ``V`` unimodular."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def divisors(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))


@dataclass(frozen=True)
class QuotientPresentation:
    ambient_rank: int
    kernel_basis: IntMatrix
    quotient_rank: int
    projection: IntMatrix


def _mutable(M: IntMatrix) -> list[list[int]]:
    return [list(r) for r in M.rows]


def _row_hnf(A: list[list[int]], ncols: int, track: Optional[list[list[int]]]) -> list[int]:
    """In-place row Hermite normal form; returns the pivot columns.

    Rows of ``track`` receive the same row operations, so if ``track`` starts
    as the identity it ends as the unimodular ``V`` with ``V @ A0 == A``.
    """

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        if track is not None:
            track[i], track[j] = track[j], track[i]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        if track is not None:
            track[dst] = [a - q * b for a, b in zip(track[dst], track[src])]

    def negate(i):
        A[i] = [-a for a in A[i]]
        if track is not None:
            track[i] = [-a for a in track[i]]

    m = len(A)
    pivots = []
    r = 0
    for j in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][j] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(A[i][j]), i))
            if best != r:
                swap(r, best)
            done = True
            for i in range(r + 1, m):
                if A[i][j] != 0:
                    addmul(i, r, A[i][j] // A[r][j])
                    if A[i][j] != 0:
                        done = False
            if done:
                break
        if A[r][j] == 0:
            continue
        if A[r][j] < 0:
            negate(r)
        for i in range(r):
            q = A[i][j] // A[r][j]
            if q:
                addmul(i, r, q)
        pivots.append(j)
        r += 1
    return pivots


def hermite_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``H == M @ U`` and ``U`` unimodular.  The nonzero
    columns of ``H`` come first, are in echelon form with strictly increasing
    pivot rows and positive pivots, and entries to the left of a pivot are
    reduced into ``[0, pivot)``.  Column operations keep the integer column
    span, so ``H`` is a canonical basis of the lattice spanned by ``M``.
    """
    A = _mutable(M.T)
    V = _mutable(IntMatrix.identity(M.ncols))
    _row_hnf(A, M.nrows, V)
    H = IntMatrix(A, ncols=M.nrows).T if A else IntMatrix.zeros(M.nrows, 0)
    U = IntMatrix(V, ncols=M.ncols).T if V else IntMatrix.zeros(0, 0)
    return H, U


def lattice_basis(M: IntMatrix) -> IntMatrix:
    """Canonical basis (nonzero HNF columns) of the lattice spanned by the columns."""
    H, _ = hermite_normal_form(M)
    keep = [j for j in range(H.ncols) if any(H.col(j))]
    return H.select_cols(keep)


def rank(M: IntMatrix) -> int:
    return lattice_basis(M).ncols


def smith_normal_form(M: IntMatrix) -> SnfDecomposition:
    m, n = M.shape
    D = _mutable(M)
    U = _mutable(IntMatrix.identity(m))
    V = _mutable(IntMatrix.identity(n))

    def row_addmul(dst, src, q):
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_addmul(dst, src, q):
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            row_swap(t, i0)
            col_swap(t, j0)
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_addmul(i, t, D[i][t] // D[t][t])
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    col_addmul(j, t, D[t][j] // D[t][t])
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = [
                i for i in range(t + 1, m)
                if any(D[i][j] % D[t][t] for j in range(t + 1, n))
            ]
            if not bad:
                break
            # fold an offending row into row t and redo the pivot
            row_addmul(t, bad[0], -1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]

    S = IntMatrix(D, ncols=n)
    return SnfDecomposition(
        S=S,
        U=IntMatrix(U, ncols=m) if m else IntMatrix.zeros(0, 0),
        V=IntMatrix(V, ncols=n) if n else IntMatrix.zeros(0, 0),
    )


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel of ``M`` (columns, canonical HNF).

    The kernel of an integer matrix is always saturated, and the basis comes
    from unimodular column operations so it generates every integer solution.
    """
    H, U = hermite_normal_form(M)
    zero = [j for j in range(H.ncols) if not any(H.col(j))]
    K = U.select_cols(zero)
    return lattice_basis(K) if K.ncols else K


def is_saturated_image(M: IntMatrix) -> bool:
    """True iff the image lattice of ``M`` is saturated in the codomain."""
    return all(d in (0, 1) for d in smith_normal_form(M).divisors)


def solve_integral(M: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer ``x`` with ``M @ x == b``, or ``None`` if there is none."""
    if len(b) != M.nrows:
        raise LinalgError("right-hand side of wrong length")
    H, U = hermite_normal_form(M)
    y = []
    for k in range(H.ncols):
        col = H.col(k)
        piv = next((i for i, a in enumerate(col) if a), None)
        if piv is None:
            break
        rest = b[piv] - sum(H[piv, j] * y[j] for j in range(k))
        if rest % H[piv, k]:
            return None
        y.append(rest // H[piv, k])
    y += [0] * (H.ncols - len(y))
    if H.apply(y) != tuple(b):
        return None
    return U.apply(y)


def solve_rational(M: IntMatrix, b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """A rational solution of ``M @ x == b`` (free variables set to zero)."""
    m, n = M.shape
    A = [[Fraction(a) for a in row] + [Fraction(bi)] for row, bi in zip(M.rows, b)]
    pivots = []
    r = 0
    for j in range(n):
        p = next((i for i in range(r, m) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][j]
        A[r] = [a * inv for a in A[r]]
        for i in range(m):
            if i != r and A[i][j] != 0:
                f = A[i][j]
                A[i] = [a - f * c for a, c in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
    if any(A[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(pivots):
        x[j] = A[i][n]
    return tuple(x)


def right_inverse(M: IntMatrix) -> IntMatrix:
    """Integer ``R`` with ``M @ R == I``.

    The choice is deterministic: each column is the HNF back-substitution
    solution with all free parameters set to zero.
    """
    if rank(M) != M.nrows or not is_saturated_image(M):
        raise NotSurjective(f"{M!r} is not a surjection of lattices")
    cols = []
    for i in range(M.nrows):
        e = [int(i == k) for k in range(M.nrows)]
        x = solve_integral(M, e)
        assert x is not None
        cols.append(x)
    return IntMatrix.from_columns(cols, M.ncols)


def saturation(M: IntMatrix) -> IntMatrix:
    """Canonical basis of (rational span of the columns) ∩ Z^n."""
    if M.ncols == 0 or M.is_zero():
        return IntMatrix.zeros(M.nrows, 0)
    eqs = kernel_basis(M.T)  # columns y with y^T M = 0
    return kernel_basis(eqs.T) if eqs.ncols else IntMatrix.identity(M.nrows)


def quotient_by(kernel: IntMatrix, ambient_rank: int) -> QuotientPresentation:
    """Presentation of ``Z^ambient_rank / kernel`` as a free lattice.

    The projection rows are the canonical HNF basis of the annihilator of the
    kernel, so the quotient coordinates are deterministic.
    """
    if kernel.nrows != ambient_rank:
        raise LinalgError("kernel columns must live in the ambient lattice")
    k = kernel.ncols
    if k and rank(kernel) != k:
        raise LinalgError("kernel columns must be linearly independent")
    if k and not is_saturated_image(kernel):
        raise NotSaturated("sublattice is not saturated; quotient has torsion")
    if k == 0:
        projection = IntMatrix.identity(ambient_rank)
    else:
        ann = kernel_basis(kernel.T)
        projection = ann.T if ann.ncols else IntMatrix.zeros(0, ambient_rank)
    return QuotientPresentation(
        ambient_rank=ambient_rank,
        kernel_basis=kernel,
        quotient_rank=ambient_rank - k,
        projection=projection,
    )


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        return tuple(v)
    return tuple(a // g for a in v)


def integral_multiple(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer vector on the same ray as a rational vector."""
    den = 1
    for a in v:
        den = den * Fraction(a).denominator // gcd(den, Fraction(a).denominator)
    return primitive([int(Fraction(a) * den) for a in v])


def determinant(M: IntMatrix) -> int:
    if M.nrows != M.ncols:
        raise LinalgError("determinant of a non-square matrix")
    n = M.nrows
    A = [[Fraction(a) for a in r] for r in M.rows]
    det = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return 0
        if p != j:
            A[j], A[p] = A[p], A[j]
            det = -det
        det *= A[j][j]
        for i in range(j + 1, n):
            f = A[i][j] / A[j][j]
            if f:
                A[i] = [a - f * c for a, c in zip(A[i], A[j])]
    return int(det)
