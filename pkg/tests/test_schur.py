from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasscomb.errors import ArgumentError, ParseError, TruncationError
from grasscomb.poly import Poly
from grasscomb.schur import (
    ExtParams,
    Partition,
    SkewShape,
    complete_homogeneous,
    conjugate_check,
    convolution_check,
    enum_ssyt,
    ext_complete,
    ext_schur,
    intermediate_partitions,
    jacobi_trudi,
    lattice_path_check,
    lattice_path_schur,
    partitions,
    schur_ssyt,
    skew_shapes,
    vertical_split_check,
)

a = Poly.var("a")
x1, x2, x3 = (Poly.var(f"x{i}") for i in (1, 2, 3))


def brute_ssyt(shape, n):
    """Oracle: try every filling of the cells and keep the semistandard ones."""
    cells = shape.cells()
    out = set()
    for values in product(range(1, n + 1), repeat=len(cells)):
        fill = dict(zip(cells, values))
        ok = all(
            (fill.get((i, c - 1), 0) <= v) and (fill.get((i - 1, c), 0) < v)
            for (i, c), v in fill.items()
        )
        if ok:
            out.add(tuple(tuple(fill[(i, c)] for (i, c) in cells if i == r) for r in range(1, shape.rows + 1)))
    return out


def compositions(k, n):
    if n == 0:
        if k == 0:
            yield ()
        return
    for first in range(k + 1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def rising_over_factorial(k):
    acc = Poly(1)
    for j in range(k):
        acc = acc * (a + j) / (j + 1)
    return acc


def oracle_S(k, n):
    total = Poly()
    for comp in compositions(k, n):
        t = Poly(1)
        for m, e in enumerate(comp, start=1):
            t = t * rising_over_factorial(e) * Poly.var(f"x{m}") ** e
        total = total + t
    return total


small_shapes = st.sampled_from(list(skew_shapes(4)))
nvars = st.integers(1, 3)


# -- partitions ---------------------------------------------------------------


def test_partition_text_format():
    assert str(Partition.parse("(2,1)")) == "(2,1)"
    assert str(Partition.parse("( 3 , 1 )")) == "(3,1)"
    assert str(Partition.parse("()")) == "()"
    assert str(SkewShape.parse("(2,1)/(1)")) == "(2,1)/(1)"
    assert str(SkewShape.parse("(2,1)/()")) == "(2,1)"


@pytest.mark.parametrize("bad", ["2,1", "(1,2)", "(0)", "(a)", "(2,1)/(3)", "(1)/(1)/(1)", "(2,,1)", "(-1)"])
def test_partition_parse_errors(bad):
    with pytest.raises(ParseError):
        SkewShape.parse(bad)


@given(small_shapes)
def test_conjugation_is_an_involution(shape):
    assert shape.conjugate().conjugate() == shape
    assert shape.conjugate().size == shape.size


def test_partitions_count():
    assert [sum(1 for _ in partitions(k)) for k in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_intermediate_partitions():
    assert [str(p) for p in intermediate_partitions("()", "(1)")] == ["()", "(1)"]
    assert [str(p) for p in intermediate_partitions("(2,1)", "(2,1)")] == ["(2,1)"]
    assert [str(p) for p in intermediate_partitions("(1)", "(2,1)")] == ["(1)", "(2)", "(1,1)", "(2,1)"]
    with pytest.raises(ArgumentError):
        intermediate_partitions("(2)", "(1,1)")


# -- tableaux -----------------------------------------------------------------


@given(small_shapes, nvars)
def test_ssyt_enumeration_matches_brute_force(shape, n):
    found = [t.filling for t in enum_ssyt(shape, n)]
    assert len(found) == len(set(found))
    assert set(found) == brute_ssyt(shape, n)


def test_ssyt_counts():
    assert len(enum_ssyt("(1)", 2)) == 2
    assert len(enum_ssyt("(1,1)", 2)) == 1
    assert len(enum_ssyt("(2,1)/(1)", 2)) == 4
    assert len(enum_ssyt("(2,2)", 1)) == 0
    assert len(enum_ssyt("()", 3)) == 1


def test_schur_examples():
    assert schur_ssyt("(1)", 2) == x1 + x2
    assert schur_ssyt("(1,1)", 2) == x1 * x2
    assert schur_ssyt("(2,1)", 2) == x1**2 * x2 + x1 * x2**2


# -- generators ---------------------------------------------------------------


@given(st.integers(-2, 6), nvars)
def test_complete_homogeneous_matches_compositions(k, n):
    expect = Poly()
    for comp in compositions(k, n) if k >= 0 else ():
        t = Poly(1)
        for m, e in enumerate(comp, start=1):
            t = t * Poly.var(f"x{m}") ** e
        expect = expect + t
    assert complete_homogeneous(k, n) == expect


@given(st.integers(0, 5), nvars)
def test_ext_complete_matches_composition_oracle(k, n):
    assert ext_complete(k, ExtParams(n)) == oracle_S(k, n)


def test_generator_examples():
    assert complete_homogeneous(0, 2) == 1
    assert complete_homogeneous(-1, 2) == 0
    assert complete_homogeneous(2, 2) == x1**2 + x1 * x2 + x2**2
    assert ext_complete(0, ExtParams(2)) == 1
    assert ext_complete(-3, ExtParams(2)) == 0
    assert ext_complete(1, ExtParams(3)) == a * (x1 + x2 + x3)
    assert ext_complete(2, ExtParams(2)) == a * (a + 1) / 2 * (x1**2 + x2**2) + a**2 * x1 * x2


@given(st.integers(0, 6), nvars)
def test_a_equal_one_gives_h(k, n):
    assert ext_complete(k, ExtParams(n, 1)) == complete_homogeneous(k, n)


# -- determinants -------------------------------------------------------------


@given(small_shapes, nvars)
def test_jacobi_trudi_equals_tableau_sum(shape, n):
    assert jacobi_trudi(shape, "h", n) == schur_ssyt(shape, n)
    assert jacobi_trudi(shape, "S", ExtParams(n, 1)) == schur_ssyt(shape, n)


def test_extended_examples():
    assert jacobi_trudi("()", "S", ExtParams(2)) == 1
    assert ext_schur("(2,1)", ExtParams(1)) == a * (a**2 - 1) / 3 * x1**3
    assert str(ext_schur("(2,1)", ExtParams(1))) == "1/3*a^3*x1^3 - 1/3*a*x1^3"


@given(small_shapes, nvars)
def test_homogeneity(shape, n):
    s = ext_schur(shape, ExtParams(n))
    xs = [f"x{m}" for m in range(1, n + 1)]
    for exps, c in s.items():
        xdeg = sum(exps.get(x, 0) for x in xs)
        assert xdeg == shape.size
        if all(exps.get(x, 0) <= 1 for x in xs):
            assert exps.get("a", 0) == xdeg


def test_numeric_parameter_matches_substitution():
    sym = ext_schur("(2,1)", ExtParams(2))
    num = ext_schur("(2,1)", ExtParams(2, Fraction(1, 3)))
    assert num == sym.subs({"a": Fraction(1, 3)})


def test_unknown_generator():
    with pytest.raises(ArgumentError):
        jacobi_trudi("(1)", "e", 2)


# -- identities ---------------------------------------------------------------


@given(small_shapes, nvars)
def test_convolution(shape, n):
    assert convolution_check(shape, n).passed


def test_convolution_example_has_five_terms():
    rep = convolution_check("(2,1)", 2)
    assert [t["nu"] for t in rep.checks[0].details["terms"]] == ["()", "(1)", "(2)", "(1,1)", "(2,1)"]
    assert rep.passed
    assert convolution_check("(1)", 2).checks[0].lhs == (a + Poly.var("b")) * (x1 + x2)


@given(small_shapes, st.integers(1, 2))
def test_vertical_split(shape, k):
    assert vertical_split_check(shape, 3, k).passed


def test_vertical_split_example():
    rep = vertical_split_check("(2)", 2, 1)
    assert rep.passed and rep.checks[0].lhs == x1**2 + x1 * x2 + x2**2
    with pytest.raises(ArgumentError):
        vertical_split_check("(2)", 2, 2)


@given(small_shapes, nvars)
def test_conjugation_identity(shape, n):
    assert conjugate_check(shape, n).passed


def test_conjugation_examples():
    s11 = ext_schur("(1,1)", ExtParams(2))
    assert s11 == a * (a - 1) / 2 * (x1**2 + x2**2) + a**2 * x1 * x2
    assert s11 == ext_complete(2, ExtParams(2)).subs({"a": -a})
    s21 = ext_schur("(2,1)", ExtParams(3))
    assert s21 == -s21.subs({"a": -a})


# -- lattice paths -------------------------------------------------------------


@given(st.sampled_from(list(skew_shapes(3))), st.integers(1, 2))
def test_lattice_paths_equal_determinant(shape, n):
    rep = lattice_path_check(shape, n)
    assert rep.passed, [c.to_json() for c in rep.checks if not c.passed]


def test_lattice_examples():
    assert lattice_path_schur("(1)", ExtParams(2, 1)) == x1 + x2
    assert lattice_path_schur("(2,1)", ExtParams(2, 1)) == x1**2 * x2 + x1 * x2**2
    assert lattice_path_schur("(2,1)", ExtParams(1)) == a * (a**2 - 1) / 3 * x1**3


def test_lattice_translation_invariance():
    ref = lattice_path_schur("(2,1)/(1)", ExtParams(2), l=3, L=8)
    for l in (4, 5):
        assert lattice_path_schur("(2,1)/(1)", ExtParams(2), l=l, L=8) == ref


def test_lattice_truncation_errors():
    with pytest.raises(TruncationError):
        lattice_path_schur("(2,1)", ExtParams(1), l=1)
    with pytest.raises(TruncationError):
        lattice_path_schur("(3)", ExtParams(1), L=2)


def test_params_modes():
    assert ExtParams(2).mode == "symbolic-a"
    assert ExtParams.numeric(2, "1/2").mode == "numeric-a"
    assert ExtParams.a_plus_b(2).a_poly() == a + Poly.var("b")
    with pytest.raises(ArgumentError):
        ExtParams(0)
