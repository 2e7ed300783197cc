"""Rational linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlocfrob.exact import (Echelon, RationalMatrix, as_rational, format_rational, kernel_basis, rank,
                            solve, solve_sparse)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_solve_identity():
    assert solve(RationalMatrix.from_dense([[1]]), [1]) == [1]


def test_solve_inconsistent():
    assert solve(RationalMatrix.from_dense([[1, 1], [1, 1]]), [1, 2]) is None


def test_solve_diagonal_by_hand():
    assert solve(RationalMatrix.from_dense([[2, 0], [0, 3]]), [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]


def test_solve_rejects_bad_rhs_length():
    with pytest.raises(ValueError):
        solve(RationalMatrix.from_dense([[1, 2]]), [1, 2])


def test_kernel_examples():
    assert kernel_basis(RationalMatrix.from_dense([[1, 0], [0, 1]])) == []
    (v,) = kernel_basis(RationalMatrix.from_dense([[1, 1]]))
    assert v[0] == -v[1] != 0
    assert len(kernel_basis(RationalMatrix.from_dense([[0, 0], [0, 0]]))) == 2


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("-1/12") == Fraction(-1, 12)
    assert format_rational(Fraction(-1, 12)) == "-1/12"
    assert format_rational(Fraction(4, 2)) == "2"


def test_big_integers_stay_exact():
    # entries far beyond 64 bits
    big = 10 ** 30 + 7
    x = solve(RationalMatrix.from_dense([[big, 1], [1, big]]), [1, 0])
    assert x == [Fraction(big, big * big - 1), Fraction(-1, big * big - 1)]


def test_entries_outside_shape_rejected():
    with pytest.raises(IndexError):
        RationalMatrix(1, 1, {(1, 0): 1})


@given(matrices())
def test_rank_nullity(rows):
    A = RationalMatrix.from_dense(rows)
    ker = kernel_basis(A)
    assert rank(A) + len(ker) == A.cols
    for v in ker:
        assert A.matvec(v) == [0] * A.rows


@given(matrices(), st.data())
def test_solutions_resubstitute(rows, data):
    A = RationalMatrix.from_dense(rows)
    x0 = data.draw(st.lists(small, min_size=A.cols, max_size=A.cols))
    b = A.matvec(x0)
    x = solve(A, b)
    assert x is not None and A.matvec(x) == b


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_none_only_when_inconsistent(rows, rhs):
    A = RationalMatrix.from_dense(rows)
    b = rhs[:A.rows] + [0] * (A.rows - len(rhs[:A.rows]))
    x = solve(A, b)
    aug = RationalMatrix.from_dense([r + [v] for r, v in zip(rows, b)])
    # consistent exactly when the augmented rank does not grow
    assert (x is None) == (rank(aug) > rank(A))


def test_echelon_reduce_is_normal_form():
    ech = Echelon()
    ech.add({0: 1, 1: 1})
    ech.add({1: 1, 2: 1})
    a = ech.reduce({0: 2, 2: 5})
    b = ech.reduce({0: 1, 1: -1, 2: 5, })
    assert a == ech.reduce({0: 2, 2: 5}) and set(a) <= {2}
    assert ech.reduce({0: 1, 1: 1}) == {}
    assert solve_sparse([{0: 1}], [Fraction(3)], 1) == {0: 3}
    assert b.keys() <= {2}
