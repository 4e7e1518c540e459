"""Partitions, tableaux, Schur polynomials and their one-parameter extension.

``S_k(a, x)`` is the coefficient of ``t^k`` in ``prod_m (1 - x_m t)^(-a)``::

    S_k(a, x) = sum over k_1 + ... + k_n = k of
                prod_m a(a+1)...(a+k_m-1) / k_m! * x_m^k_m

and ``s_{lambda/mu}(a, x) = det[S_{lambda_j - mu_i + i - j}(a, x)]``.  At
``a = 1`` this is the ordinary skew Schur polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ArgumentError, ParseError, TruncationError
from .graphs import DirectedMultigraph, _weight, flow_terms
from .linalg import PolyMatrix, det_poly
from .poly import Poly
from .transfer import LayeredGraph, chain_graph

# -- partitions ---------------------------------------------------------------

_PART_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)")


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ArgumentError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ArgumentError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text):
        s = text.strip()
        m = _PART_RE.fullmatch(s)
        if not m:
            raise ParseError(f"malformed partition {text!r}; expected e.g. (2,1) or ()")
        body = m.group(1)
        parts = tuple(int(p) for p in body.split(",")) if body else ()
        try:
            return cls(parts)
        except ArgumentError as exc:
            raise ParseError(str(exc)) from exc

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Partition):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(tuple(value))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        """0-based part, ``0`` past the end."""
        return self.parts[i] if i < len(self.parts) else 0

    @property
    def size(self):
        return sum(self.parts)

    def conjugate(self):
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def contains(self, other):
        """``other <= self`` componentwise."""
        return len(other) <= len(self) and all(other[i] <= self[i] for i in range(len(other)))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def __repr__(self):
        return f"Partition{self.parts!r}"


def partitions(k, max_part=None):
    """Partitions of ``k`` in descending lexicographic order."""
    if k == 0:
        yield Partition(())
        return
    top = k if max_part is None else min(k, max_part)
    for first in range(top, 0, -1):
        for rest in partitions(k - first, first):
            yield Partition((first,) + rest.parts)


def partitions_upto(k):
    for j in range(k + 1):
        yield from partitions(j)


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition = Partition(())

    def __post_init__(self):
        outer, inner = Partition.coerce(self.outer), Partition.coerce(self.inner)
        if not outer.contains(inner):
            raise ArgumentError(f"inner {inner} is not contained in outer {outer}")
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)

    @classmethod
    def parse(cls, text):
        pieces = text.split("/")
        if len(pieces) > 2:
            raise ParseError(f"malformed skew shape {text!r}")
        outer = Partition.parse(pieces[0])
        inner = Partition.parse(pieces[1]) if len(pieces) == 2 else Partition(())
        try:
            return cls(outer, inner)
        except ArgumentError as exc:
            raise ParseError(str(exc)) from exc

    @classmethod
    def coerce(cls, value):
        if isinstance(value, SkewShape):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, Partition):
            return cls(value)
        return cls(Partition.coerce(value))

    @property
    def size(self):
        return self.outer.size - self.inner.size

    @property
    def rows(self):
        return len(self.outer)

    def cells(self):
        """``(row, col)`` pairs, 1-based, row by row."""
        return [(i + 1, c) for i in range(self.rows) for c in range(self.inner[i] + 1, self.outer[i] + 1)]

    def conjugate(self):
        return SkewShape(self.outer.conjugate(), self.inner.conjugate())

    def __str__(self):
        if not self.inner.parts:
            return str(self.outer)
        return f"{self.outer}/{self.inner}"


def skew_shapes(max_size):
    """Every skew shape ``lambda/mu`` with ``|lambda| <= max_size``."""
    for lam in partitions_upto(max_size):
        for mu in intermediate_partitions(Partition(()), lam):
            yield SkewShape(lam, mu)


def intermediate_partitions(inner, outer):
    """All ``nu`` with ``inner <= nu <= outer``, by size then descending lex."""
    inner, outer = Partition.coerce(inner), Partition.coerce(outer)
    if not outer.contains(inner):
        raise ArgumentError(f"inner {inner} is not contained in outer {outer}")
    out = []
    r = len(outer)

    def rec(i, prev, acc):
        if i == r:
            out.append(Partition(tuple(p for p in acc if p)))
            return
        for p in range(min(prev, outer[i]), inner[i] - 1, -1):
            acc.append(p)
            rec(i + 1, p, acc)
            acc.pop()

    rec(0, outer[0] if r else 0, [])
    out.sort(key=lambda nu: (nu.size, tuple(-p for p in nu.parts) + (0,) * r))
    return out


# -- tableaux ------------------------------------------------------------------


@dataclass(frozen=True)
class SSYT:
    shape: SkewShape
    filling: tuple  # one tuple of entries per row of the outer shape

    def content(self, n):
        counts = [0] * n
        for row in self.filling:
            for v in row:
                counts[v - 1] += 1
        return tuple(counts)

    def __str__(self):
        return " / ".join(" ".join(map(str, row)) for row in self.filling)


def enum_ssyt(shape, n):
    """Every semistandard filling with entries in 1..n (backtracking)."""
    shape = SkewShape.coerce(shape)
    lam, mu = shape.outer, shape.inner
    cells = shape.cells()
    grid = {}
    out = []

    def rec(k):
        if k == len(cells):
            out.append(SSYT(shape, tuple(
                tuple(grid[(i + 1, c)] for c in range(mu[i] + 1, lam[i] + 1)) for i in range(len(lam))
            )))
            return
        i, c = cells[k]
        lo = 1
        left = grid.get((i, c - 1))
        if left is not None:
            lo = left
        above = grid.get((i - 1, c))
        if above is not None:
            lo = max(lo, above + 1)
        for v in range(lo, n + 1):
            grid[(i, c)] = v
            rec(k + 1)
        grid.pop((i, c), None)

    rec(0)
    return out


def _xs(arg):
    if isinstance(arg, int):
        if arg < 0:
            raise ArgumentError(f"variable count must be non-negative, got {arg}")
        return tuple(f"x{m}" for m in range(1, arg + 1))
    return tuple(arg)


def schur_ssyt(shape, n):
    """``sum over SSYT T of x^T``; ``n`` is a count or a sequence of names."""
    xs = _xs(n)
    acc = {}
    for t in enum_ssyt(shape, len(xs)):
        key = tuple((x, e) for x, e in zip(xs, t.content(len(xs))) if e)
        acc[key] = acc.get(key, 0) + 1
    return Poly.from_terms(acc)


# -- complete homogeneous and the extended family -----------------------------


@lru_cache(maxsize=None)
def _complete(k, xs):
    if k < 0:
        return Poly()
    if k == 0:
        return Poly(1)
    if not xs:
        return Poly()
    last = Poly.var(xs[-1])
    acc = Poly()
    power = Poly(1)
    for j in range(k + 1):
        acc = acc + power * _complete(k - j, xs[:-1])
        power = power * last
    return acc


def complete_homogeneous(k, n):
    """``h_k``; zero for negative ``k``."""
    return _complete(k, _xs(n))


@dataclass(frozen=True)
class ExtParams:
    """Variables ``x_1..x_n`` plus the parameter ``a``.

    ``a`` is ``None`` for the symbol ``a``, a rational, or any polynomial (for
    instance ``"a + b"``)."""

    n_vars: int
    a: object = None

    def __post_init__(self):
        if not isinstance(self.n_vars, int) or self.n_vars < 1:
            raise ArgumentError(f"n_vars must be >= 1, got {self.n_vars!r}")

    @classmethod
    def symbolic(cls, n):
        return cls(n)

    @classmethod
    def numeric(cls, n, value):
        return cls(n, Fraction(value))

    @classmethod
    def a_plus_b(cls, n):
        return cls(n, "a + b")

    @property
    def mode(self):
        if self.a is None:
            return "symbolic-a"
        if isinstance(self.a, (int, Fraction)):
            return "numeric-a"
        return "polynomial-a"

    @property
    def xs(self):
        return _xs(self.n_vars)

    def a_poly(self):
        if self.a is None:
            return Poly.var("a")
        if isinstance(self.a, str):
            return Poly.parse(self.a)
        return Poly(self.a)


@lru_cache(maxsize=None)
def _rising_over_factorial(a, k):
    """``a(a+1)...(a+k-1) / k!`` as a polynomial in ``a`` (a Poly)."""
    acc = Poly(1)
    for j in range(k):
        acc = acc * (a + j) / (j + 1)
    return acc


@lru_cache(maxsize=None)
def _ext(k, xs, a):
    if k < 0:
        return Poly()
    if k == 0:
        return Poly(1)
    if not xs:
        return Poly()
    last = Poly.var(xs[-1])
    acc = Poly()
    for j in range(k + 1):
        rest = _ext(k - j, xs[:-1], a)
        if rest:
            acc = acc + _rising_over_factorial(a, j) * last**j * rest
    return acc


def ext_complete(k, params):
    """``S_k(a, x)``; 1 at ``k = 0`` and 0 for negative ``k``."""
    if isinstance(params, int):
        params = ExtParams(params)
    return _ext(k, params.xs, params.a_poly())


def _jt_matrix(shape, entry):
    lam, mu = shape.outer, shape.inner
    r = shape.rows
    return PolyMatrix([[entry(lam[j] - mu[i] + i - j) for j in range(r)] for i in range(r)])


def jacobi_trudi(shape, generator="h", params=None):
    """``det[g_{lambda_j - mu_i + i - j}]`` with ``g`` the complete homogeneous
    family (``"h"``) or ``S(a)`` (``"S"``).  ``params`` is an :class:`ExtParams`,
    a variable count, or (for ``"h"``) a sequence of variable names."""
    shape = SkewShape.coerce(shape)
    if generator == "h":
        xs = params.xs if isinstance(params, ExtParams) else _xs(params)
        return det_poly(_jt_matrix(shape, lambda k: _complete(k, xs)))
    if generator == "S":
        if isinstance(params, int):
            params = ExtParams(params)
        xs, a = params.xs, params.a_poly()
        return det_poly(_jt_matrix(shape, lambda k: _ext(k, xs, a)))
    raise ArgumentError(f"unknown generator {generator!r}; use 'h' or 'S'")


def ext_schur(shape, params):
    return jacobi_trudi(shape, "S", params)


# -- identity checks -------------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    label: str
    lhs: Poly
    rhs: Poly
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.lhs == self.rhs

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.label}"

    def to_json(self):
        out = {"name": self.name, "label": self.label, "passed": self.passed,
               "lhs": str(self.lhs), "rhs": str(self.rhs)}
        if not self.passed:
            out["difference"] = str(self.lhs - self.rhs)
        out.update(self.details)
        return out


@dataclass
class CheckReport:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def convolution_check(shape, n):
    """``s_{l/m}(a+b) = sum_nu s_{l/nu}(a) s_{nu/m}(b)`` with symbolic ``a, b``,
    plus ``S_k(a+b) = sum_{p+q=k} S_p(a) S_q(b)`` for ``k <= 2|lambda|``."""
    shape = SkewShape.coerce(shape)
    pa, pb, pab = ExtParams(n, "a"), ExtParams(n, "b"), ExtParams(n, "a + b")
    report = CheckReport("convolution")
    lhs = ext_schur(shape, pab)
    rhs = Poly()
    terms = []
    for nu in intermediate_partitions(shape.inner, shape.outer):
        term = ext_schur(SkewShape(shape.outer, nu), pa) * ext_schur(SkewShape(nu, shape.inner), pb)
        terms.append({"nu": str(nu), "term": str(term)})
        rhs = rhs + term
    report.checks.append(IdentityCheck("convolution", f"{shape} n={n}", lhs, rhs, {"terms": terms}))
    a, b, ab = pa.a_poly(), pb.a_poly(), pab.a_poly()
    xs = pa.xs
    for k in range(2 * shape.outer.size + 1):
        kl = _ext(k, xs, ab)
        kr = Poly()
        for p in range(k + 1):
            kr = kr + _ext(p, xs, a) * _ext(k - p, xs, b)
        report.checks.append(IdentityCheck("kernel", f"k={k} n={n}", kl, kr))
    return report


def vertical_split_check(shape, n, split):
    """``s_{l/m}(x) = sum_nu s_{l/nu}(x') s_{nu/m}(x'')`` with
    ``x'' = x_1..x_k`` and ``x' = x_{k+1}..x_n``; the swapped assignment is
    checked too."""
    shape = SkewShape.coerce(shape)
    if not 1 <= split < n:
        raise ArgumentError(f"split must satisfy 1 <= k < n, got k={split}, n={n}")
    xs = _xs(n)
    early, late = xs[:split], xs[split:]
    whole = jacobi_trudi(shape, "h", xs)
    report = CheckReport("vertical-split")
    for tag, (outer_vars, inner_vars) in (("x''=early", (late, early)), ("x''=late", (early, late))):
        rhs = Poly()
        for nu in intermediate_partitions(shape.inner, shape.outer):
            rhs = rhs + (jacobi_trudi(SkewShape(shape.outer, nu), "h", outer_vars)
                         * jacobi_trudi(SkewShape(nu, shape.inner), "h", inner_vars))
        report.checks.append(IdentityCheck("vertical-split", f"{shape} n={n} k={split} {tag}", whole, rhs))
    return report


def conjugate_check(shape, n):
    """``s_{l*/m*}(a, x) = (-1)^{|l|-|m|} s_{l/m}(-a, x)`` with symbolic ``a``."""
    shape = SkewShape.coerce(shape)
    params = ExtParams(n)
    lhs = ext_schur(shape.conjugate(), params)
    rhs = ext_schur(shape, params).subs({"a": -Poly.var("a")})
    if shape.size % 2:
        rhs = -rhs
    report = CheckReport("conjugate")
    report.checks.append(IdentityCheck("conjugate", f"{shape} n={n}", lhs, rhs,
                                       {"conjugate_shape": str(shape.conjugate())}))
    return report


def jacobi_trudi_check(shape, n):
    """Determinant in ``h`` versus the tableau sum, and ``S(1)`` versus ``h``."""
    shape = SkewShape.coerce(shape)
    report = CheckReport("jacobi-trudi")
    det_h = jacobi_trudi(shape, "h", n)
    report.checks.append(IdentityCheck("jacobi-trudi", f"{shape} n={n}", det_h, schur_ssyt(shape, n)))
    report.checks.append(IdentityCheck("specialization", f"{shape} n={n} a=1",
                                       jacobi_trudi(shape, "S", ExtParams(n, 1)), det_h))
    return report


# -- lattice paths ----------------------------------------------------------------

SIGN_CONVENTION = "edge i->i+k weight (-1)^(k+1) C(a,k) x_m^k; flow sign sgn(sigma_P)"


def binomial_poly(a, k):
    """``a(a-1)...(a-k+1) / k!``."""
    acc = Poly(1)
    for j in range(k):
        acc = acc * (a - j) / (j + 1)
    return acc


def lattice_window(shape, l=None, L=None):
    """``(l, L, sources, sinks)`` with sources ``mu_i - i + l`` and sinks
    ``lambda_i - i + l``, both listed for ``i = 1..r``."""
    shape = SkewShape.coerce(shape)
    r = shape.rows
    if l is None:
        l = r + 1
    if L is None:
        L = shape.outer[0] + r + 1
    sources = [shape.inner[i] - (i + 1) + l for i in range(r)]
    sinks = [shape.outer[i] - (i + 1) + l for i in range(r)]
    bad = [v for v in sources + sinks if not 1 <= v <= L]
    if bad:
        raise TruncationError(f"endpoints {bad} fall outside the window 1..{L}; enlarge L or adjust l")
    return l, L, sources, sinks


def lattice_layers(params, L):
    """One layer per variable: ``1 - A_m = (1 - x_m T)^a`` on the window 1..L."""
    a = params.a_poly()
    coeff = [binomial_poly(a, k) * (1 if k % 2 else -1) for k in range(L)]
    layers = []
    for x in params.xs:
        xm = Poly.var(x)
        edges = []
        for i in range(1, L + 1):
            for j in range(i + 1, L + 1):
                w = coeff[j - i] * xm ** (j - i)
                if w:
                    edges.append((i, j, w))
        layers.append(DirectedMultigraph(L, edges))
    return LayeredGraph(L, layers)


def lattice_path_schur(shape, params, l=None, L=None):
    """Signed weighted sum over non-intersecting lattice path systems from
    the ``mu`` endpoints in the first layer to the ``lambda`` endpoints in the
    last, computed symbolically on the chained layered graph."""
    shape = SkewShape.coerce(shape)
    if isinstance(params, int):
        params = ExtParams(params)
    l, L, sources, sinks = lattice_window(shape, l, L)
    if not sources:
        return Poly(1)
    # listing both endpoint sets in increasing order reverses rows and columns alike
    sources, sinks = sorted(sources), sorted(sinks)
    ch = chain_graph(lattice_layers(params, L))
    g = ch.graph
    A = [ch.flat(v, 1) for v in sources]
    B = [ch.flat(v, ch.n_layers) for v in sinks]
    acc = Poly()
    for sign, edges in flow_terms(g, A, B):
        w = _weight(g, edges)
        acc = acc + w if sign > 0 else acc - w
    return acc


def lattice_path_check(shape, n, shifts=(0, 1, 2)):
    """Lattice-path sum versus the determinant, at ``l = r+1+s`` for each shift
    ``s`` and a window wide enough for the largest shift."""
    shape = SkewShape.coerce(shape)
    params = ExtParams(n)
    target = ext_schur(shape, params)
    r = shape.rows
    L = shape.outer[0] + r + 1 + max(shifts)
    report = CheckReport("lattice-path")
    for s in shifts:
        l = r + 1 + s
        lp = lattice_path_schur(shape, params, l=l, L=L)
        report.checks.append(IdentityCheck("lattice-path", f"{shape} n={n} l={l} L={L}", lp, target,
                                           {"convention": SIGN_CONVENTION}))
    return report


__all__ = [
    "Partition", "SkewShape", "SSYT", "ExtParams", "IdentityCheck", "CheckReport",
    "partitions", "partitions_upto", "skew_shapes", "intermediate_partitions",
    "enum_ssyt", "schur_ssyt", "complete_homogeneous", "ext_complete", "jacobi_trudi", "ext_schur",
    "convolution_check", "vertical_split_check", "conjugate_check", "jacobi_trudi_check",
    "binomial_poly", "lattice_window", "lattice_layers", "lattice_path_schur", "lattice_path_check",
    "SIGN_CONVENTION",
]
