"""Cellular chains on R^n and completed chains on R."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlocfrob.cells import (Chain, ChainError, CompletedChain, boundary, cell, cell_degree, completed_boundary,
                            from_text, h0_class, omega, periodic_class_deg1, tensor, to_text, translate)

half = Fraction(1, 2)


def c(*coords, coeff=1):
    return Chain.basis(cell(*coords), coeff)


def test_cell_coordinates_are_doubled():
    assert cell(0, half, "3/2") == (0, 1, 3)
    assert cell_degree(cell(half, 0, "-1/2")) == 2
    with pytest.raises(ChainError):
        cell(Fraction(1, 3))


def test_boundary_examples():
    assert boundary(c(half)) == c(1) - c(0)
    assert boundary(c(0)) == Chain.zero(1)
    d = c(1) - c(0)
    assert boundary(tensor(c(half), c(half))) == tensor(d, c(half)) - tensor(c(half), d)


def test_tensor_examples():
    assert tensor(c(0), c(0)) == c(0, 0)
    assert tensor(c(1) - c(0), c(half)) == c(1, half) - c(0, half)
    assert tensor(c(half, coeff=2), c(half, coeff=3)) == c(half, half, coeff=6)


def test_translate_examples():
    assert translate(c(0), 1) == c(1)
    assert translate(tensor(c(half), c(0)), -2) == c("-3/2", -2)
    x = c(half) + c(0, coeff=3)
    assert translate(x, 0) == x


def test_h0_class_examples():
    assert h0_class(c(0, 0)) == 1
    assert h0_class(c(1) - c(0)) == 0
    x = c(0, 0, coeff=3) - c(5, 7, coeff=2)
    assert h0_class(x) == 1
    # c_(5,7) - c_(0,0) is the boundary of a staircase of 1-cells
    path = Chain(2, {})
    for k in range(5):
        path = path + c(k + half, 0)
    for k in range(7):
        path = path + c(5, k + half)
    assert boundary(path) == c(5, 7) - c(0, 0)
    with pytest.raises(ChainError):
        h0_class(c(half))


def test_periodic_class_examples():
    assert periodic_class_deg1(omega()) == 1
    assert periodic_class_deg1(CompletedChain.finite(c(half))) == 0
    x = omega() * 5 + CompletedChain.finite(c("3/2") - c(half))
    assert periodic_class_deg1(x) == 5
    assert periodic_class_deg1(CompletedChain.finite(c(half))) == 0
    with pytest.raises(ChainError):
        periodic_class_deg1(CompletedChain.finite(c(0)))


def test_finite_degree_one_chain_is_exact_when_completed():
    # c_{1/2} = d(sum_{k >= 1} c_k), a completed 0-chain
    assert completed_boundary(omega()) == CompletedChain(1)


def test_text_round_trip():
    x = c(half, -3) * Fraction(-1, 12) + c(0, 1)
    assert from_text(to_text(x)) == x
    assert to_text(c("-1/2")) == "1 * (-1/2)"


def test_dimension_mismatch():
    with pytest.raises(ChainError):
        c(0) + c(0, 0)


cells_1d = st.integers(-6, 6)


@st.composite
def chains(draw, dim=None, degree=None):
    dim = dim or draw(st.integers(1, 4))
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        coords = draw(st.lists(cells_1d, min_size=dim, max_size=dim))
        if degree is not None:
            odd = draw(st.sets(st.integers(0, dim - 1), min_size=degree, max_size=degree)) if degree <= dim else set()
            coords = [2 * (k // 2) + (1 if i in odd else 0) for i, k in enumerate(coords)]
        terms[tuple(coords)] = draw(st.integers(-3, 3))
    return Chain(dim, terms)


@given(chains())
def test_d_squared(x):
    assert boundary(boundary(x)) == Chain.zero(x.dim)


@given(st.integers(1, 2).flatmap(lambda a: st.tuples(st.integers(0, a), st.just(a))).flatmap(
    lambda p: st.tuples(chains(p[1], p[0]), st.just(p[0]), chains(2))))
def test_tensor_leibniz(args):
    x, deg, y = args
    lhs = boundary(tensor(x, y))
    rhs = tensor(boundary(x), y) + tensor(x, boundary(y)) * (-1 if deg % 2 else 1)
    assert lhs == rhs


@given(chains(degree=1), st.integers(-5, 5))
def test_translate_is_a_chain_map(y, t):
    assert boundary(translate(y, t)) == translate(boundary(y), t)
    assert h0_class(boundary(y)) == 0


@given(chains(degree=0), st.integers(-5, 5))
def test_translate_preserves_h0(x, t):
    assert h0_class(translate(x, t)) == h0_class(x)
