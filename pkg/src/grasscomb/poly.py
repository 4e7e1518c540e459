"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` stores a sorted tuple of variable names and a dict mapping
packed exponent vectors to coefficients.  Each variable owns a 16-bit slot
of the packed integer, so multiplying two monomials over the same variable
list is a single integer addition.  Coefficients are ``int`` when integral
and :class:`fractions.Fraction` otherwise; floats are rejected.

Variables are ordered ``a < b < x1 < x2 < ... < (other names) < w_*``, and
terms render in descending graded-lex order::

    >>> a, x1 = Poly.var("a"), Poly.var("x1")
    >>> str((a**3 - a) * x1**3 / 3)
    '1/3*a^3*x1^3 - 1/3*a*x1^3'
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from gmpy2 import mpq

from .errors import EvaluationError, GrasscombError, ParseError

Rational = Fraction

SLOT = 16
MAX_EXP = (1 << SLOT) - 1

_X_RE = re.compile(r"x(\d+)")
_W_RE = re.compile(r"w(?:_\d+)+")


class InexactDivisionError(GrasscombError, ArithmeticError):
    pass


@lru_cache(maxsize=None)
def var_key(name):
    """Sort key realizing the canonical variable order."""
    if name == "a":
        return (0, 0, name)
    if name == "b":
        return (1, 0, name)
    m = _X_RE.fullmatch(name)
    if m:
        return (2, int(m.group(1)), name)
    if _W_RE.fullmatch(name):
        return (4, tuple(int(p) for p in name[2:].split("_")), name)
    return (3, 0, name)


def as_rational(value):
    """Coerce an int, Fraction or rational string (``"-3/4"``) to a canonical coefficient."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        try:
            return as_rational(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
    if isinstance(value, _RationalABC):
        return as_rational(Fraction(int(value.numerator), int(value.denominator)))
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def format_rational(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _decode(m, nv):
    return tuple((m >> (SLOT * i)) & MAX_EXP for i in range(nv))


def _encode(exps):
    m = 0
    for i, e in enumerate(exps):
        m |= e << (SLOT * i)
    return m


def _remap(terms, old_vars, new_vars):
    if new_vars[: len(old_vars)] == old_vars:
        return terms
    pos = {v: j for j, v in enumerate(new_vars)}
    shifts = [(SLOT * i, SLOT * pos[v]) for i, v in enumerate(old_vars)]
    out = {}
    for m, c in terms.items():
        k = 0
        for src, dst in shifts:
            k |= ((m >> src) & MAX_EXP) << dst
        out[k] = c
    return out


def _union(va, vb):
    if va == vb:
        return va
    return tuple(sorted(set(va) | set(vb), key=var_key))


class Poly:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("_vars", "_terms", "_maxexp", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Poly):
            self._vars, self._terms = value._vars, value._terms
        else:
            c = as_rational(value)
            self._vars = ()
            self._terms = {0: c} if c else {}
        self._maxexp = None
        self._hash = None

    @classmethod
    def _raw(cls, vars_, terms):
        p = object.__new__(cls)
        p._vars = vars_
        p._terms = terms
        p._maxexp = None
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, value):
        return cls(value)

    @classmethod
    def var(cls, name):
        if not isinstance(name, str) or not name:
            raise ParseError(f"bad variable name {name!r}")
        return cls._raw((name,), {1: 1})

    @classmethod
    def from_terms(cls, terms):
        """Build from ``{monomial: coeff}`` where a monomial is a mapping or
        an iterable of ``(variable, exponent)`` pairs."""
        acc = {}
        for mono, coeff in terms.items():
            items = mono.items() if hasattr(mono, "items") else mono
            key = []
            for v, e in items:
                if e < 0 or e > MAX_EXP:
                    raise ValueError(f"exponent out of range: {v}^{e}")
                if e:
                    key.append((v, e))
            key = tuple(sorted(key, key=lambda t: var_key(t[0])))
            acc[key] = acc.get(key, 0) + as_rational(coeff)
        vars_ = tuple(sorted({v for k in acc for v, _ in k}, key=var_key))
        pos = {v: i for i, v in enumerate(vars_)}
        out = {}
        for k, c in acc.items():
            c = _norm(c)
            if c:
                out[sum(e << (SLOT * pos[v]) for v, e in k)] = c
        return cls._raw(vars_, out)

    @classmethod
    def parse(cls, text):
        return _Parser(text).parse()

    # -- inspection -------------------------------------------------------

    @property
    def variables(self):
        """Variables that actually occur, in canonical order."""
        used = 0
        for m in self._terms:
            used |= m
        return tuple(v for i, v in enumerate(self._vars) if (used >> (SLOT * i)) & MAX_EXP)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self):
        return all(m == 0 for m in self._terms)

    def constant_term(self):
        return self._terms.get(0, 0)

    def as_constant(self):
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.constant_term()

    def max_exponent(self):
        if self._maxexp is None:
            nv = len(self._vars)
            self._maxexp = max((max(_decode(m, nv), default=0) for m in self._terms), default=0)
        return self._maxexp

    def total_degree(self):
        nv = len(self._vars)
        return max((sum(_decode(m, nv)) for m in self._terms), default=-1)

    def degree(self, name):
        if name not in self._vars:
            return 0 if self else -1
        shift = SLOT * self._vars.index(name)
        return max(((m >> shift) & MAX_EXP for m in self._terms), default=-1)

    def items(self):
        """Yield ``(exponents, coeff)`` in canonical order; ``exponents`` maps
        variable names to positive exponents."""
        nv = len(self._vars)
        decoded = [(_decode(m, nv), c) for m, c in self._terms.items()]
        decoded.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        for exps, c in decoded:
            yield {v: e for v, e in zip(self._vars, exps) if e}, c

    def to_dict(self):
        """Canonical ``{((var, exp), ...): coeff}`` form, independent of the
        stored variable universe."""
        return {tuple(sorted(e.items(), key=lambda t: var_key(t[0]))): c for e, c in self.items()}

    def coefficient(self, monomial):
        return self.to_dict().get(
            tuple(sorted(((v, e) for v, e in dict(monomial).items() if e), key=lambda t: var_key(t[0]))), 0
        )

    def coefficients_in(self, name):
        """Split into ``{exponent of name: Poly in the remaining variables}``."""
        if name not in self._vars:
            return {0: self} if self else {}
        i = self._vars.index(name)
        shift = SLOT * i
        rest = self._vars[:i] + self._vars[i + 1 :]
        low = (1 << shift) - 1
        groups = {}
        for m, c in self._terms.items():
            e = (m >> shift) & MAX_EXP
            k = (m & low) | ((m >> (shift + SLOT)) << shift)
            groups.setdefault(e, {})[k] = c
        return {e: Poly._raw(rest, t) for e, t in sorted(groups.items())}

    # -- arithmetic -------------------------------------------------------

    def _aligned(self, other):
        other = _coerce(other)
        vars_ = _union(self._vars, other._vars)
        return vars_, _remap(self._terms, self._vars, vars_), _remap(other._terms, other._vars, vars_)

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        vars_, ta, tb = self._aligned(other)
        if len(ta) < len(tb):
            ta, tb = tb, ta
        out = dict(ta)
        for m, c in tb.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return Poly._raw(vars_, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self._vars, {m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-_coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            if not c:
                return Poly()
            return Poly._raw(self._vars, {m: _norm(v * c) for m, v in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._terms or not other._terms:
            return Poly()
        if self.max_exponent() + other.max_exponent() > MAX_EXP:
            raise OverflowError("exponent exceeds 16-bit slot")
        vars_, ta, tb = self._aligned(other)
        if len(ta) < len(tb):
            ta, tb = tb, ta
        out = {}
        get = out.get
        for mb, cb in tb.items():
            for ma, ca in ta.items():
                k = ma + mb
                out[k] = get(k, 0) + ca * cb
        return Poly._raw(vars_, {m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational constant (or a constant Poly)."""
        if isinstance(other, Poly):
            if not other.is_constant():
                return self.exact_div(other)
            other = other.constant_term()
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        inv = Fraction(1) / c
        return self * inv

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise ValueError(f"pow needs a non-negative integer exponent, got {n!r}")
        result = Poly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other):
        """Quotient of an exact division; raises :class:`InexactDivisionError`
        when ``other`` does not divide ``self``."""
        other = _coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        vars_, tp, tq = self._aligned(other)
        nv = len(vars_)

        def key(m):
            v = _decode(m, nv)
            return (-sum(v), tuple(-e for e in v))

        lm = min(tq, key=key)
        lc = tq[lm]
        lmv = _decode(lm, nv)
        rest = [(m, c) for m, c in tq.items() if m != lm]
        rem = dict(tp)
        heap = [(key(m), m) for m in rem]
        heapq.heapify(heap)
        quot = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = rem.pop(m, 0)
            if not c:
                continue
            mv = _decode(m, nv)
            if any(x < y for x, y in zip(mv, lmv)):
                raise InexactDivisionError(f"{other} does not divide {self}")
            t = m - lm
            tc = _norm(Fraction(c) / lc)
            quot[t] = tc
            for mq, cq in rest:
                k = t + mq
                s = rem.get(k, 0) - tc * cq
                if s:
                    if k not in rem:
                        heapq.heappush(heap, (key(k), k))
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return Poly._raw(vars_, quot)

    # -- evaluation -------------------------------------------------------

    def eval(self, assignment):
        """Exact value under ``assignment`` (variable name -> rational).

        ``gmpy2.mpq`` values pass through untouched, and the result is then
        an ``mpq`` as well."""
        nv = len(self._vars)
        used = 0
        for m in self._terms:
            used |= m
        values = []
        for i, v in enumerate(self._vars):
            if (used >> (SLOT * i)) & MAX_EXP:
                if v not in assignment:
                    raise EvaluationError(f"no value for variable {v!r}")
                val = assignment[v]
                values.append(val if type(val) is mpq else as_rational(val))
            else:
                values.append(None)
        total = 0
        for m, c in self._terms.items():
            t = c
            for i in range(nv):
                e = (m >> (SLOT * i)) & MAX_EXP
                if e:
                    t = t * values[i] ** e
            total += t
        return _norm(Fraction(total)) if isinstance(total, Fraction) else total

    def subs(self, mapping):
        """Substitute polynomials (or rationals) for some variables."""
        mapping = {k: _coerce(v) for k, v in mapping.items()}
        if not any(v in mapping for v in self._vars):
            return self
        nv = len(self._vars)
        result = Poly()
        for m, c in self._terms.items():
            exps = _decode(m, nv)
            keep = {}
            term = Poly(c)
            for v, e in zip(self._vars, exps):
                if not e:
                    continue
                if v in mapping:
                    term = term * mapping[v] ** e
                else:
                    keep[v] = e
            if keep:
                term = term * Poly.from_terms({tuple(keep.items()): 1})
            result = result + term
        return result

    # -- comparison & rendering ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            if not c:
                return not self._terms
            return len(self._terms) == 1 and self._terms.get(0) == c
        if not isinstance(other, Poly):
            return NotImplemented
        if self._vars == other._vars:
            return self._terms == other._terms
        if len(self._terms) != len(other._terms):
            return False
        _, ta, tb = self._aligned(other)
        return ta == tb

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self.to_dict().items()))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for exps, c in self.items():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in exps.items())
            mag = abs(Fraction(c))
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _coerce(value):
    if isinstance(value, Poly):
        return value
    return Poly(value)


def poly_arith(kind, p, q=None):
    """Dispatch form of the ring operations: ``add``, ``mul``, ``neg``, ``pow``."""
    if kind == "add":
        return _coerce(p) + q
    if kind == "mul":
        return _coerce(p) * q
    if kind == "neg":
        return -_coerce(p)
    if kind == "pow":
        return _coerce(p) ** q
    raise ValueError(f"unknown operation {kind!r}")


def poly_eval(p, assignment):
    return _coerce(p).eval(assignment)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text):
        if not isinstance(text, str):
            raise ParseError(f"expected a string, got {type(text).__name__}")
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif name is not None:
                self.tokens.append(("name", name))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError(f"division by non-constant in {self.text!r}")
                if not rhs:
                    raise ParseError(f"division by zero in {self.text!r}")
                acc = acc / rhs.constant_term()
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly(val)
        if kind == "name":
            return Poly.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {self.text!r}")
            return p
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")
