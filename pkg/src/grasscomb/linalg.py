"""Exact linear algebra over :class:`Poly` and over the rationals."""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

from .errors import ShapeError, SingularMatrixError
from .poly import Poly, _norm, as_rational

CUTOFF = 4  # cofactor expansion up to this size, Bareiss above


class PolyMatrix:
    """Dense immutable matrix of polynomials."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = tuple(tuple(e if isinstance(e, Poly) else _to_poly(e) for e in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls([[0] * ncols for _ in range(nrows)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __add__(self, other):
        _same_shape(self, other)
        return PolyMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        _same_shape(self, other)
        return PolyMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return PolyMatrix([[-x for x in r] for r in self.rows])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = Poly()
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def submatrix(self, rows, cols):
        """Rows and columns are 0-based index sequences."""
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def delete(self, rows, cols):
        rows, cols = set(rows), set(cols)
        return self.submatrix(
            [i for i in range(self.nrows) if i not in rows],
            [j for j in range(self.ncols) if j not in cols],
        )

    def map(self, fn):
        return PolyMatrix([[fn(x) for x in r] for r in self.rows])

    def subs(self, mapping):
        return self.map(lambda p: p.subs(mapping))

    def eval(self, assignment):
        return [[p.eval(assignment) for p in r] for r in self.rows]

    def is_constant(self):
        return all(p.is_constant() for r in self.rows for p in r)

    def to_rational(self):
        return [[p.as_constant() for p in r] for r in self.rows]

    def __repr__(self):
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.rows) + "])"


def _to_poly(e):
    if isinstance(e, str):
        return Poly.parse(e)
    return Poly(e)


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")


def _as_matrix(m):
    return m if isinstance(m, PolyMatrix) else PolyMatrix(m)


def _square(m):
    m = _as_matrix(m)
    if m.nrows != m.ncols:
        raise ShapeError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    return m


def det_cofactor(m):
    """Laplace expansion along rows, memoized on the set of remaining columns."""
    m = _square(m)
    n = m.nrows
    if n == 0:
        return Poly(1)
    rows = m.rows
    memo = {}

    def minor(k, colmask):
        # determinant of rows k.. restricted to columns in colmask
        if k == n:
            return Poly(1)
        hit = memo.get(colmask)
        if hit is not None:
            return hit
        acc = Poly()
        sign = 1
        for j in range(n):
            bit = 1 << j
            if not colmask & bit:
                continue
            entry = rows[k][j]
            if entry:
                sub = minor(k + 1, colmask & ~bit)
                if sub:
                    acc = acc + entry * sub if sign > 0 else acc - entry * sub
            sign = -sign
        memo[colmask] = acc
        return acc

    return minor(0, (1 << n) - 1)


def det_bareiss(m):
    """Fraction-free Gaussian elimination; every division is exact."""
    m = _square(m)
    n = m.nrows
    if n == 0:
        return Poly(1)
    a = [list(r) for r in m.rows]
    sign = 1
    prev = Poly(1)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if not (prev == 1) else num
            a[i][k] = Poly()
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def det_poly(m):
    m = _square(m)
    if m.nrows <= CUTOFF:
        return det_cofactor(m)
    return det_bareiss(m)


# -- rational matrices --------------------------------------------------------


def _rational_rows(m):
    if isinstance(m, PolyMatrix):
        m = m.to_rational()
    rows = [[x if type(x) is mpq else mpq(as_rational(x)) for x in r] for r in m]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ShapeError("ragged matrix")
    return rows


def identity_rational(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_rational(m):
    """Exact determinant of a rational matrix (``gmpy2.mpq`` result)."""
    a = _rational_rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ShapeError("determinant of non-square matrix")
    if n <= 2:
        if n == 0:
            return mpq(1)
        if n == 1:
            return a[0][0]
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    det = mpq(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return mpq(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        piv = a[k][k]
        det *= piv
        rk = a[k]
        for i in range(k + 1, n):
            f = a[i][k]
            if f:
                f = f / piv
                ri = a[i]
                for j in range(k + 1, n):
                    if rk[j]:
                        ri[j] -= f * rk[j]
    return det


def matrix_inverse_rational(m):
    """Exact inverse by Gauss-Jordan elimination (``gmpy2.mpq`` entries)."""
    a = _rational_rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ShapeError("inverse of non-square matrix")
    one, zero = mpq(1), mpq(0)
    aug = [r + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    for k in range(n):
        p = next((i for i in range(k, n) if aug[i][k]), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[k], aug[p] = aug[p], aug[k]
        piv = aug[k][k]
        rk = [x / piv for x in aug[k]] if piv != 1 else aug[k]
        aug[k] = rk
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y if y else x for x, y in zip(aug[i], rk)]
    return [r[n:] for r in aug]


def matmul_rational(a, b):
    if a and b and len(a[0]) != len(b):
        raise ShapeError("inner dimensions differ")
    cols = list(zip(*b))
    zero = mpq(0)
    return [[sum((x * y for x, y in zip(r, c) if x and y), zero) for c in cols] for r in a]


def submatrix(a, rows, cols):
    return [[a[i][j] for j in cols] for i in rows]
