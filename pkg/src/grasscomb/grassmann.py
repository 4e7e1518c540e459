"""Exterior algebra over polynomial coefficients and Berezin integration.

Monomials are bitmasks: bit ``k - 1`` set means generator ``k`` occurs.  The
stored monomial is always the increasing product, and reordering signs are
absorbed into the coefficient.

For the paired integrals used here (determinants, minors, Gaussians) the
generators of an ``N``-pair block are laid out as
``chi_1, chibar_1, chi_2, chibar_2, ...``; see :func:`chi` and :func:`chibar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import AlgebraError, ArgumentError, PreconditionError, ShapeError, SingularMatrixError
from .linalg import PolyMatrix, det_poly, det_rational, matrix_inverse_rational
from .poly import Poly

MAX_GENERATORS = 64


def reorder_sign(p, q):
    """Sign of sorting the concatenation of disjoint increasing monomials p, q."""
    inversions = 0
    while q:
        low = q & -q
        inversions += (p & ~((low << 1) - 1)).bit_count()
        q ^= low
    return -1 if inversions & 1 else 1


def _as_poly(c):
    return c if isinstance(c, Poly) else Poly(c)


class GrassmannElement:
    __slots__ = ("size", "terms")

    def __init__(self, size, terms=None):
        if not 0 <= size <= MAX_GENERATORS:
            raise AlgebraError(f"algebra size must be in 0..{MAX_GENERATORS}, got {size}")
        self.size = size
        clean = {}
        for mask, c in (terms or {}).items():
            if mask >> size:
                raise AlgebraError(f"monomial {mask:b} outside an algebra of {size} generators")
            c = _as_poly(c)
            if c:
                clean[mask] = c
        self.terms = clean

    @classmethod
    def _raw(cls, size, terms):
        e = object.__new__(cls)
        e.size = size
        e.terms = terms
        return e

    @classmethod
    def scalar(cls, size, c=1):
        return cls(size, {0: c})

    @classmethod
    def generator(cls, size, k):
        if not 1 <= k <= size:
            raise AlgebraError(f"generator {k} outside 1..{size}")
        return cls._raw(size, {1 << (k - 1): Poly(1)})

    @classmethod
    def monomial(cls, size, indices, coeff=1):
        """Product of generators in the given (not necessarily sorted) order."""
        mask, sign = 0, 1
        for k in indices:
            if not 1 <= k <= size:
                raise AlgebraError(f"generator {k} outside 1..{size}")
            bit = 1 << (k - 1)
            if mask & bit:
                return cls(size)
            sign *= reorder_sign(mask, bit)
            mask |= bit
        return cls(size, {mask: _as_poly(coeff) * sign})

    # -- structure --------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def constant_term(self):
        return self.terms.get(0, Poly())

    def is_even(self):
        return all(m.bit_count() % 2 == 0 for m in self.terms)

    def is_odd(self):
        return all(m.bit_count() % 2 == 1 for m in self.terms)

    def coefficient(self, indices):
        mask = 0
        for k in indices:
            mask |= 1 << (k - 1)
        return self.terms.get(mask, Poly())

    def _check(self, other):
        if not isinstance(other, GrassmannElement):
            return False
        if other.size != self.size:
            raise AlgebraError(f"cannot combine algebras of sizes {self.size} and {other.size}")
        return True

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not self._check(other):
            other = GrassmannElement.scalar(self.size, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out[m] + c if m in out else c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GrassmannElement._raw(self.size, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement._raw(self.size, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not self._check(other):
            other = GrassmannElement.scalar(self.size, other)
        return self + (-other)

    def __rsub__(self, other):
        return GrassmannElement.scalar(self.size, other) - self

    def scale(self, c):
        c = _as_poly(c)
        if not c:
            return GrassmannElement(self.size)
        out = {}
        for m, v in self.terms.items():
            p = v * c
            if p:
                out[m] = p
        return GrassmannElement._raw(self.size, out)

    def __mul__(self, other):
        if not self._check(other):
            return self.scale(other)
        acc = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                k = ma | mb
                p = ca * cb
                if reorder_sign(ma, mb) < 0:
                    p = -p
                acc[k] = acc[k] + p if k in acc else p
        return GrassmannElement._raw(self.size, {m: c for m, c in acc.items() if c})

    def __rmul__(self, other):
        # coefficients commute with generators
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            gens = "*".join(f"g{k + 1}" for k in range(self.size) if m >> k & 1) or "1"
            parts.append(f"({self.terms[m]})*{gens}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GrassmannElement({self.size}, {self})"


def g_mul(f, g):
    if f.size != g.size:
        raise AlgebraError(f"cannot multiply algebras of sizes {f.size} and {g.size}")
    return f * g


def g_exp(f):
    """``sum_p f**p / p!`` for ``f`` with zero constant term (the series is finite)."""
    if f.constant_term():
        raise PreconditionError("g_exp needs a zero constant term; factor the scalar out first")
    result = GrassmannElement.scalar(f.size, 1)
    power = GrassmannElement.scalar(f.size, 1)
    p = 0
    while True:
        power = power * f
        if not power:
            return result
        p += 1
        result = result + power.scale(Fraction(1, factorial(p)))


# -- integration --------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorOrder:
    """Integration order: the generator listed first is integrated first.

    ``GeneratorOrder((k1, ..., km))`` is the measure under which
    ``g_k1 * g_k2 * ... * g_km`` integrates to 1.
    """

    order: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order) or any(k < 1 for k in self.order):
            raise ArgumentError(f"integration order must list distinct generators: {self.order}")
        if self.labels and len(self.labels) != len(self.order):
            raise ArgumentError("one label per generator")

    @property
    def size(self):
        return len(self.order)

    def is_full(self, m):
        return sorted(self.order) == list(range(1, m + 1))

    def sign(self):
        return permutation_sign([k - 1 for k in self.order])

    @classmethod
    def interleaved(cls, n, offset=0, names=("chi", "chibar")):
        """Order for ``d(bar)_n d(plain)_n ... d(bar)_1 d(plain)_1`` over a
        block laid out as plain_1, bar_1, plain_2, bar_2, ..."""
        order, labels = [], []
        for i in range(1, n + 1):
            order += [offset + 2 * i - 1, offset + 2 * i]
            labels += [f"{names[0]}_{i}", f"{names[1]}_{i}"]
        return cls(tuple(order), tuple(labels))

    @classmethod
    def bar_first(cls, n, offset=0, names=("eta", "etabar")):
        """Order for ``d(plain)_n d(bar)_n ... d(plain)_1 d(bar)_1``."""
        order, labels = [], []
        for i in range(1, n + 1):
            order += [offset + 2 * i, offset + 2 * i - 1]
            labels += [f"{names[1]}_{i}", f"{names[0]}_{i}"]
        return cls(tuple(order), tuple(labels))


def permutation_sign(perm):
    """Sign of a permutation of ``range(len(perm))`` (cycle count parity)."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _coerce_order(order, m):
    if not isinstance(order, GeneratorOrder):
        order = GeneratorOrder(tuple(order))
    if any(k > m for k in order.order):
        raise ArgumentError(f"integration order mentions generators beyond {m}")
    return order


def berezin_integrate(f, order=None):
    """Full Berezin integral; ``order`` defaults to ``d g_m ... d g_1``."""
    order = _coerce_order(order or range(1, f.size + 1), f.size)
    if not order.is_full(f.size):
        raise ArgumentError("a full integral needs every generator exactly once; use integrate_out")
    top = (1 << f.size) - 1
    c = f.terms.get(top)
    if c is None:
        return Poly()
    return c if order.sign() > 0 else -c


def integrate_out(f, generators):
    """Integrate over a subset of generators, leaving an element of the same algebra.

    Each step is a left derivative: the generator is moved to the front of
    the monomial (sign = parity of the generators before it) and removed.
    """
    order = _coerce_order(generators, f.size)
    terms = f.terms
    for k in order.order:
        bit = 1 << (k - 1)
        below = bit - 1
        nxt = {}
        for m, c in terms.items():
            if m & bit:
                nxt[m ^ bit] = -c if (m & below).bit_count() & 1 else c
        terms = nxt
    return GrassmannElement._raw(f.size, terms)


def compress(f, keep):
    """Re-index ``f`` into the algebra generated by ``keep`` (1-based, increasing)."""
    keep = list(keep)
    if keep != sorted(set(keep)):
        raise ArgumentError("kept generators must be strictly increasing")
    allowed = 0
    for k in keep:
        allowed |= 1 << (k - 1)
    out = {}
    for m, c in f.terms.items():
        if m & ~allowed:
            raise AlgebraError("element involves generators that are not kept")
        new = 0
        for j, k in enumerate(keep):
            if m >> (k - 1) & 1:
                new |= 1 << j
        out[new] = c
    return GrassmannElement._raw(len(keep), out)


# -- paired layouts -----------------------------------------------------------


def chi(i, offset=0):
    return offset + 2 * i - 1


def chibar(i, offset=0):
    return offset + 2 * i


def bilinear(size, left, matrix, right):
    """``sum_ij left(i) * M_ij * right(j)`` with 1-based generator maps."""
    out = {}
    for i, row in enumerate(matrix, start=1):
        for j, entry in enumerate(row, start=1):
            entry = _as_poly(entry)
            if not entry:
                continue
            lo, hi = 1 << (left(i) - 1), 1 << (right(j) - 1)
            if lo & hi:
                continue
            m = lo | hi
            c = entry if reorder_sign(lo, hi) > 0 else -entry
            out[m] = out[m] + c if m in out else c
    return GrassmannElement(size, out)


def _matrix_rows(M):
    rows = M.rows if isinstance(M, PolyMatrix) else [[_as_poly(x) for x in r] for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("square matrix required")
    return rows


def _action(rows):
    n = len(rows)
    size = 2 * n
    return size, bilinear(size, chibar, rows, chi)


def berezin_det(M):
    """``int dchibar dchi exp(-sum chibar_i M_ij chi_j)``."""
    rows = _matrix_rows(M)
    n = len(rows)
    if n == 0:
        return Poly(1)
    size, action = _action(rows)
    return berezin_integrate(g_exp(-action), GeneratorOrder.interleaved(n))


def _check_index_set(name, idx, n):
    idx = list(idx)
    if any(not 1 <= i <= n for i in idx):
        raise ArgumentError(f"{name} has indices outside 1..{n}: {idx}")
    if idx != sorted(set(idx)):
        raise ArgumentError(f"{name} must be strictly increasing: {idx}")
    return idx


def berezin_minor(M, I, J):
    """``det(M)`` with rows ``I`` and columns ``J`` (1-based) deleted, computed
    as a signed Berezin integral with the insertion chi_j1 chibar_i1 ... ."""
    rows = _matrix_rows(M)
    n = len(rows)
    I = _check_index_set("I", I, n)
    J = _check_index_set("J", J, n)
    if len(I) != len(J):
        raise ArgumentError(f"|I| = {len(I)} differs from |J| = {len(J)}")
    if n == 0:
        return Poly(1)
    size, action = _action(rows)
    gens = []
    for i, j in zip(I, J):
        gens += [chi(j), chibar(i)]
    insertion = GrassmannElement.monomial(size, gens)
    value = berezin_integrate(insertion * g_exp(-action), GeneratorOrder.interleaved(n))
    return value if (sum(I) + sum(J)) % 2 == 0 else -value


# -- Gaussian formula ---------------------------------------------------------

INVERSE_DET = "_inv_det"


@dataclass
class GaussianReport:
    size: int
    lhs: GrassmannElement
    rhs: GrassmannElement
    equal: bool
    mismatched: list
    symbolic: bool

    def summary(self):
        state = "equal" if self.equal else f"{len(self.mismatched)} coefficients differ"
        return f"gaussian N={self.size}: {state}"


def _clear_inverse(element, d, power):
    """Multiply coefficients by d**power and reduce using d * _inv_det = 1."""
    out = {}
    for m, c in element.terms.items():
        acc = Poly()
        for e, part in c.coefficients_in(INVERSE_DET).items():
            if e > power:
                raise ValueError("inverse power exceeds clearing exponent")
            acc = acc + part * d ** (power - e)
        if acc:
            out[m] = acc
    return GrassmannElement._raw(element.size, out)


def gaussian_identity_check(M):
    """Expand both sides of the fermionic Gaussian formula

        int deta detabar exp(etabar M^-1 eta + psibar eta + etabar psi)
            = det(M^-1) exp(-psibar M psi)

    as elements of the psi-algebra and compare them coefficient by coefficient.
    Symbolic matrices use a formal symbol for ``1/det(M)``."""
    rows = _matrix_rows(M)
    n = len(rows)
    symbolic = not all(p.is_constant() for r in rows for p in r)
    if symbolic:
        if any(INVERSE_DET in p.variables for r in rows for p in r):
            raise ArgumentError(f"variable name {INVERSE_DET!r} is reserved")
        d = det_poly(PolyMatrix(rows))
        if not d:
            raise SingularMatrixError("matrix is singular")
        t = Poly.var(INVERSE_DET)
        # adj(M)_kl = (-1)^(k+l) det(M without row l, column k)
        full = PolyMatrix(rows)
        inv = [
            [t * det_poly(full.delete([l], [k])) * (-1) ** (k + l) for l in range(n)]
            for k in range(n)
        ]
        det_inv = t
    else:
        rational = [[p.as_constant() for p in r] for r in rows]
        if det_rational(rational) == 0:
            raise SingularMatrixError("matrix is singular")
        inv = matrix_inverse_rational(rational)
        det_inv = Poly(Fraction(1) / Fraction(det_rational(rational)))

    size = 4 * n
    psi = lambda k: chi(k)  # noqa: E731
    psibar = lambda k: chibar(k)  # noqa: E731
    eta = lambda k: chi(k, offset=2 * n)  # noqa: E731
    etabar = lambda k: chibar(k, offset=2 * n)  # noqa: E731

    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    exponent = bilinear(size, etabar, inv, eta) + bilinear(size, psibar, ident, eta) + bilinear(size, etabar, ident, psi)
    integrated = integrate_out(g_exp(exponent), GeneratorOrder.bar_first(n, offset=2 * n))
    lhs = compress(integrated, range(1, 2 * n + 1))

    rhs = g_exp(-bilinear(2 * n, chibar, rows, chi)).scale(det_inv)

    if symbolic:
        power = max(
            [max(c.coefficients_in(INVERSE_DET), default=0) for c in lhs.terms.values()]
            + [max(c.coefficients_in(INVERSE_DET), default=0) for c in rhs.terms.values()]
            + [0]
        )
        left, right = _clear_inverse(lhs, d, power), _clear_inverse(rhs, d, power)
    else:
        left, right = lhs, rhs
    masks = sorted(set(left.terms) | set(right.terms))
    mismatched = [m for m in masks if left.terms.get(m, Poly()) != right.terms.get(m, Poly())]
    return GaussianReport(n, lhs, rhs, not mismatched, mismatched, symbolic)


__all__ = [
    "GrassmannElement",
    "GeneratorOrder",
    "GaussianReport",
    "g_mul",
    "g_exp",
    "berezin_integrate",
    "integrate_out",
    "compress",
    "berezin_det",
    "berezin_minor",
    "gaussian_identity_check",
    "permutation_sign",
    "reorder_sign",
    "chi",
    "chibar",
    "bilinear",
]
