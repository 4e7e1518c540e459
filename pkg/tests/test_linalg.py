from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grasscomb.errors import ShapeError, SingularMatrixError
from grasscomb.linalg import (
    PolyMatrix,
    det_bareiss,
    det_cofactor,
    det_poly,
    det_rational,
    matmul_rational,
    matrix_inverse_rational,
)
from grasscomb.poly import Poly


def perm_sign(p):
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz(rows):
    n = len(rows)
    total = Poly() if rows and isinstance(rows[0][0], Poly) else 0
    for p in permutations(range(n)):
        t = perm_sign(p)
        for i in range(n):
            t = t * rows[i][p[i]]
        total = total + t
    return total if n else 1


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def square(draw, max_n=5):
    n = draw(st.integers(0, max_n))
    return [[draw(rationals) for _ in range(n)] for _ in range(n)]


@given(square())
def test_rational_det_matches_leibniz(rows):
    assert det_rational(rows) == leibniz(rows)


@given(square(4))
def test_inverse_is_two_sided(rows):
    if leibniz(rows) == 0:
        with pytest.raises(SingularMatrixError):
            matrix_inverse_rational(rows)
        return
    inv = matrix_inverse_rational(rows)
    n = len(rows)
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    assert matmul_rational(rows, inv) == ident
    assert matmul_rational(inv, rows) == ident


def symbolic(n):
    return [[Poly.var(f"m{i}{j}") for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_cofactor_and_bareiss_match_leibniz_symbolically(n):
    rows = symbolic(n)
    expect = leibniz(rows)
    assert det_cofactor(PolyMatrix(rows)) == expect
    assert det_bareiss(PolyMatrix(rows)) == expect


def test_bareiss_large_sparse_symbolic():
    # 6x6 band matrix: Bareiss (used above the cutoff) against cofactor expansion
    rows = [[Poly.var(f"m{i}{j}") if abs(i - j) <= 1 else Poly() for j in range(6)] for i in range(6)]
    m = PolyMatrix(rows)
    assert det_poly(m) == det_cofactor(m)


def test_bareiss_needs_pivoting():
    m = PolyMatrix([[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, "a", 0, 0], [0, 0, 0, 0, "b"], [0, 0, 0, "c", 0]])
    assert det_bareiss(m) == Poly.parse("a*b*c")


def test_known_determinants():
    assert det_poly(PolyMatrix([["a", "b"], ["c", "d"]])) == Poly.parse("a*d - b*c")
    assert det_rational([[Fraction(1, 2), 1], [1, 2]]) == 0


def test_shape_errors():
    with pytest.raises(ShapeError):
        det_poly(PolyMatrix([[1, 2]]))
    with pytest.raises(ShapeError):
        PolyMatrix([[1, 2], [3]])
    with pytest.raises(ShapeError):
        PolyMatrix([[1]]) @ PolyMatrix([[1, 2], [3, 4]])


def test_matrix_ops():
    m = PolyMatrix([["a", 1], [0, "b"]])
    assert (m @ PolyMatrix.identity(2)) == m
    assert (m - m) == PolyMatrix.zeros(2, 2)
    assert m.delete([0], [1]).rows == ((Poly(0),),)
    assert m.eval({"a": 2, "b": 3}) == [[2, 1], [0, 3]]
