"""Translation-invariant quasilocal operators."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlocfrob.cells import Chain, CompletedChain, boundary, cell, h0_class, omega, tensor
from qlocfrob.qloc import (DegreeMismatch, InvariantOperator, NoPrimitive, QlocError, Wiring,
                           WiringError, apply, apply_completed, basis_enumerate, class_coeff, compose, comult_paper,
                           from_text, homology_dims, identity_op, is_closed, is_thom_form, koszul_sign, mult_paper,
                           op_boundary, permute, random_operator, reference_class, sign_in_trivial_out, solve_primitive,
                           symmetrize, to_text, trivial_law, validate)

half = Fraction(1, 2)


def c(*coords, coeff=1):
    return Chain.basis(cell(*coords), coeff)


# ---------------------------------------------------------------- Thom forms and application

def test_comult_on_cells():
    D = comult_paper()
    assert apply(D, c(0)) == c(0, 0)
    s = c(0) + c(1)
    expect = (tensor(s, c(half)) + tensor(c(half), s)) * half
    assert apply(D, c(half)) == expect


def test_mult_on_cells():
    mu = mult_paper()
    assert apply(mu, c(0, 0)) == Chain.zero(1)
    assert apply(mu, c(half, half)) == c(half)
    assert apply(mu, c(0, half)) == c(0, coeff=-half)
    assert apply(mu, c(0, "-1/2")) == c(0, coeff=-half)
    assert apply(mu, c(half, 0)) == c(0, coeff=half)
    # entries are translation invariant
    assert apply(mu, c(7, "15/2")) == c(7, coeff=-half)


def test_thom_forms():
    for f in (comult_paper(), mult_paper(), identity_op()):
        assert is_closed(f) and is_thom_form(f)
        assert f.minimal_window() <= 1
    assert not is_thom_form(comult_paper() * 2)
    assert apply_completed(mult_paper(), [omega(), omega()]) == omega()
    assert apply_completed(identity_op(), [omega()]) == omega()
    assert h0_class(apply(comult_paper(), c(0))) == 1


def test_validate():
    r = validate(comult_paper())
    assert r.ok and r.minimal_window == half and r.degree == 0
    assert validate(identity_op()).minimal_window == 0
    bad = InvariantOperator(1, 1, 0, 1, {(0, 10): 1})
    assert not validate(bad).ok and validate(bad).window_violations == ((0, 10),)
    wrong_degree = InvariantOperator(1, 1, 0, 1, {(0, 1): 1})
    assert validate(wrong_degree).degree_violations == ((0, 1),)


def test_apply_completed_on_finite_input_matches_apply():
    f = comult_paper()
    x = c(half) * 3 - c(2)
    out = apply_completed(f, [CompletedChain.finite(x)])
    assert not out.pattern and out.correction == apply(f, x)


def test_apply_dimension_mismatch():
    with pytest.raises(QlocError):
        apply(comult_paper(), c(0, 0))


# ---------------------------------------------------------------- boundary

def test_boundary_of_thom_forms_and_identity_vanishes():
    for f in (comult_paper(), mult_paper(), identity_op()):
        assert op_boundary(f).is_zero()


def test_boundary_is_commutator():
    rng = random.Random(5)
    f = random_operator(rng, 1, 2, 0, 1, density=Fraction(1, 2))
    x = c(half) + c("3/2", coeff=2)
    lhs = apply(op_boundary(f), x)
    assert lhs == boundary(apply(f, x)) - apply(f, boundary(x))


def test_window_grows_by_at_most_half():
    rng = random.Random(9)
    for _ in range(30):
        f = random_operator(rng, 2, 1, rng.randint(-2, 1), 1, density=Fraction(1, 2))
        assert op_boundary(f).minimal_window() <= f.minimal_window() + half


# ---------------------------------------------------------------- symmetric groups

def test_permute_identity():
    f = mult_paper()
    assert permute(f, (0, 1), (0,)) == f


def test_permute_comult_outputs():
    D = comult_paper()
    assert permute(D, None, (1, 0)) == D


def test_permute_mult_inputs():
    swapped = permute(mult_paper(), (1, 0), None)
    # the value on c_0 (x) c_{1/2} is mult(c_{1/2} (x) c_0), both factors even-odd so no Koszul sign
    assert apply(swapped, c(0, half)) == c(0, coeff=half)
    assert swapped == mult_paper() * -1


def test_koszul_sign_of_odd_swap():
    assert koszul_sign((1, 0), [1, 1]) == -1
    assert koszul_sign((1, 0), [1, 0]) == 1
    f = InvariantOperator(2, 2, 0, 0, {(1, 1, 1, 1): 1})
    assert permute(f, (1, 0), None) == f * -1
    assert permute(f, (1, 0), (1, 0)) == f


def test_symmetrize():
    assert symmetrize(comult_paper(), trivial_law) == comult_paper()
    assert symmetrize(mult_paper(), sign_in_trivial_out) == mult_paper()
    z = InvariantOperator(2, 1, -1, 0)
    assert symmetrize(z, sign_in_trivial_out).is_zero()


# ---------------------------------------------------------------- composition

def test_compose_comult_into_mult():
    for w in (Wiring.single(0, 0), Wiring.single(1, 0)):
        g = compose(comult_paper(), mult_paper(), w)
        assert apply(g, c(0, half)) == c(0, 0, coeff=-half)


def test_identity_is_a_unit():
    f = comult_paper()
    assert compose(f, identity_op(), Wiring.single(1, 0)) == f
    assert compose(identity_op(), f, Wiring.single(0, 0)) == f


def test_two_edge_self_pairing_is_definite():
    g = compose(comult_paper(), mult_paper(), Wiring(((0, 0), (1, 1))))
    assert (g.m, g.n, g.degree) == (1, 1, -1)
    assert apply(g, c(0)) == Chain.zero(1)
    # the two half-weighted paths through the 1-cell cancel exactly
    assert g.is_zero()


def test_wiring_errors():
    with pytest.raises(WiringError):
        compose(comult_paper(), mult_paper(), Wiring(((0, 0), (0, 1))))
    with pytest.raises(WiringError):
        compose(comult_paper(), mult_paper(), Wiring(()))
    with pytest.raises(WiringError):
        compose(comult_paper(), mult_paper(), Wiring.single(2, 0))


# ---------------------------------------------------------------- finite models

def test_basis_enumerate_examples():
    b = basis_enumerate(1, 1, 0, 0)
    assert sorted(tuple(f.table) for f in b) == [((0, 0),), ((1, 1),)]
    assert basis_enumerate(1, 1, 1, 0) == []
    for w in (0, 1, 2):
        assert basis_enumerate(1, 1, -2, w) == []


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
def test_homology_examples(m, n):
    assert homology_dims(m, n, 2) == {-m: 1, 1 - m: 1}


def test_reference_classes():
    assert reference_class(1, 2) == comult_paper()
    assert reference_class(1, 1) == identity_op()
    r = reference_class(2, 2)
    assert is_closed(r) and class_coeff(r) == 1


def test_class_coeff_examples():
    assert class_coeff(identity_op()) == 1
    assert class_coeff(comult_paper()) == 1
    assert class_coeff(identity_op() * Fraction(-1, 12)) == Fraction(-1, 12)
    with pytest.raises(DegreeMismatch):
        class_coeff(InvariantOperator(1, 1, 1, 0))


def test_class_coeff_is_gauge_invariant():
    rng = random.Random(3)
    for _ in range(10):
        x = random_operator(rng, 2, 1, 0, 1)
        assert class_coeff(mult_paper() + op_boundary(x)) == 1


def test_class_coeff_refuses_too_wide_operators():
    wide = identity_op() + op_boundary(InvariantOperator(1, 1, 1, 4, {(0, 9): 1}))
    with pytest.raises(NoPrimitive):
        class_coeff(wide, 1)
    assert class_coeff(wide, 5) == 1


def test_solve_primitive_examples():
    assert solve_primitive(InvariantOperator(1, 2, -1, 0)).is_zero()
    for w in (0, half, 1, Fraction(3, 2), 2, Fraction(5, 2), 3):
        assert solve_primitive(identity_op() * Fraction(-1, 12), w) is None


def test_text_format_round_trip():
    for f in (comult_paper(), mult_paper(), reference_class(2, 2)):
        assert from_text(to_text(f)) == f
    assert "in: 1/2 1/2 | out: 1/2 | coeff: 1" in to_text(mult_paper())
    with pytest.raises(QlocError):
        from_text("op m=1 n=1 deg=0 window=0\nin: 0 0 | out: 0 | coeff: 1\n")


ops = st.builds(lambda seed, m, n, w: random_operator(random.Random(seed), m, n, random.Random(seed).randint(-m, n),
                                                      Fraction(w, 2), density=Fraction(1, 2)),
                st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2))


@given(ops)
def test_boundary_squares_to_zero(f):
    assert op_boundary(op_boundary(f)).is_zero()


@given(ops)
def test_text_round_trip_random(f):
    assert from_text(to_text(f)) == f
