"""Frob_1, graph words and the generator catalog."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlocfrob.frob import (FrobElement, FrobError, GraphTerm, UnassignedSymbol, Vertex, block_swap, catalog_by_id,
                           catalog_json, check_record, evaluate_graph, frob_act, frob_compose, frob_fold,
                           frob_wired_coeff, generator_catalog, graph_genus, mult_comult_counts, single_vertex,
                           two_vertex)
from qlocfrob.properties import frob_sign_agrees, frob_sign_cases, frob_symbolic_laws
from qlocfrob.qloc import (Diagram, InvariantOperator, Wiring, class_coeff, compose, comult_paper, evaluate_diagram,
                           mult_paper, random_operator, reference_class)

MULT = Vertex("mult", 2, 1, -1)
COMULT = Vertex("comult", 1, 2, 0)
THOM = {"mult": mult_paper(), "comult": comult_paper()}


# ---------------------------------------------------------------- Frob_1

def test_frob_act():
    assert frob_act(FrobElement(2, 1), (1, 0)).coeff == -1
    assert frob_act(FrobElement(1, 3), None, (2, 0, 1)).coeff == 1
    assert frob_act(FrobElement(3, 1), (1, 2, 0)).coeff == 1


def test_block_crossing_sign():
    for m1 in range(1, 4):
        for m2 in range(1, 4):
            assert frob_act(FrobElement(m1 + m2, 2), block_swap(m1, m2)).coeff == (-1) ** (m1 * m2)


def test_single_graft_sign():
    # comult under a (2,2) element whose own block is the one free input
    r = frob_compose(FrobElement(1, 2), FrobElement(2, 2), 1, 1)
    assert (r.m, r.n, r.coeff) == (2, 3, -1)
    r = frob_compose(FrobElement(1, 2), FrobElement(3, 2), 1, 2)
    assert r.coeff == 1


def test_multi_edge_grafts_vanish():
    assert frob_compose(FrobElement(1, 2), FrobElement(2, 1), 2, 0).coeff == 0
    assert frob_compose(FrobElement(1, 2, 0), FrobElement(2, 1), 1, 1).coeff == 0


def test_frob_element_domain():
    with pytest.raises(FrobError):
        FrobElement(1, 1)
    assert FrobElement(1, 1, 0).coeff == 0
    assert FrobElement(3, 2).degree == -2
    with pytest.raises(FrobError):
        frob_compose(FrobElement(1, 2), FrobElement(2, 1), 1, 0)


def test_symbolic_laws():
    assert all(frob_symbolic_laws().values())


def test_signs_match_evaluated_classes():
    cases = frob_sign_cases()
    assert len(cases) == 44
    assert all(frob_sign_agrees(*case) for case in cases)


@pytest.mark.parametrize("lo,up,edge", [((1, 2), (3, 1), (1, 2)), ((2, 1), (2, 2), (0, 1)),
                                        ((2, 2), (2, 1), (1, 0)), ((3, 1), (1, 2), (0, 0))])
def test_signs_match_on_larger_arities(lo, up, edge):
    assert frob_sign_agrees(lo, up, Wiring((edge,)))


def test_two_edge_composite_of_thom_forms_is_zero():
    g = compose(comult_paper(), mult_paper(), Wiring(((0, 0), (1, 1))))
    assert g.is_zero()


def test_fold_of_three_vertex_tree():
    # comult, a second comult on its output 1, then mult on that output 1 and a fresh input
    d = Diagram(((1, 2), (1, 2), (2, 1)), ((("in", 0),), ((0, 1),), ((1, 1), ("in", 1))),
                ((0, 0), (1, 0), (2, 0)), 2)
    els = [FrobElement(1, 2), FrobElement(1, 2), FrobElement(2, 1)]
    a, b = frob_fold(els, d, [0]), frob_fold(els, d, [1])
    assert a == b
    ops = [reference_class(1, 2), reference_class(1, 2), reference_class(2, 1)]
    assert class_coeff(evaluate_diagram(ops, d)) == a


def test_wired_coeff_refuses_multi_edges():
    assert frob_wired_coeff((1, 2), (2, 1), Wiring(((0, 0), (1, 1)))) == 0


# ---------------------------------------------------------------- graph words

def test_genus():
    assert graph_genus(single_vertex(COMULT)) == 0
    loop = two_vertex(COMULT, MULT, Wiring(((0, 0), (1, 1))))
    assert graph_genus(loop) == 1
    # comult, comult on the first output, mult on its outputs, mult with the remaining leg
    theta = GraphTerm((COMULT, COMULT, MULT, MULT),
                      ((("in", 0),), ((0, 0),), ((1, 0), (1, 1)), ((2, 0), (0, 1))), ((3, 0),), 1)
    assert graph_genus(theta) == 2
    assert mult_comult_counts(theta) == (2, 2)
    m, n, beta = theta.m, theta.n, graph_genus(theta)
    assert mult_comult_counts(theta) == (beta + m - 1, beta + n - 1)


def test_evaluate_graph():
    assert evaluate_graph(single_vertex(COMULT), THOM) == comult_paper()
    with pytest.raises(UnassignedSymbol):
        evaluate_graph(single_vertex(Vertex("G1", 1, 2, 1)), THOM)
    zero = dict(THOM, mult=InvariantOperator(2, 1, -1, 0))
    assert evaluate_graph(two_vertex(COMULT, MULT, Wiring.single(0, 0)), zero).is_zero()


def test_evaluation_order_does_not_matter():
    cat = catalog_by_id()
    for rec in generator_catalog():
        for t in rec.differential:
            if all(v.symbol in THOM for v in t.vertices):
                orders = t.diagram.topological_orders()
                vals = [evaluate_graph(t, THOM, o) for o in orders]
                assert all(v == vals[0] for v in vals)
    assert cat


def test_vertex_actions():
    v = MULT.acted(((1, 0), (0,), -1))
    assert v.value(mult_paper()) == mult_paper()
    assert "mult" in v.label()


# ---------------------------------------------------------------- catalog

def test_catalog_order_and_shapes():
    cat = generator_catalog()
    ids = [r.id for r in cat]
    assert ids == ["comult", "mult", "comult_assoc", "frobenius", "mult_assoc", "G1", "G1p", "G2"]
    by = catalog_by_id()
    assert [by[i].orbit_dim for i in ("comult_assoc", "frobenius", "mult_assoc")] == [2, 4, 2]
    assert sum(1 for r in cat if r.weight <= 2) == 5
    assert (by["G2"].degree, by["G2"].m, by["G2"].n, by["G2"].genus) == (1, 1, 1, 2)
    assert (by["G1"].degree, by["G1"].m, by["G1"].n, by["G1"].genus) == (1, 1, 2, 1)
    assert [r.weight for r in cat] == [1, 1, 2, 2, 2, 3, 3, 4]


def test_records_are_consistent():
    by = catalog_by_id()
    for rec in generator_catalog():
        assert check_record(rec, by) == []
        assert rec.degree == rec.genus + rec.n - 2


def test_G2_terms():
    g2 = catalog_by_id()["G2"]
    assert [t.scalar for t in g2.differential] == [1, 1, Fraction(1, 3)]
    assert [t.edge_count() for t in g2.differential] == [2, 2, 3]


def test_projectors_are_idempotent():
    rng = random.Random(0)
    for rec in generator_catalog():
        if rec.projector is None:
            continue
        f = random_operator(rng, rec.m, rec.n, rec.degree, 1)
        p = rec.project(f)
        assert rec.project(p) == p


def test_catalog_json():
    data = json.loads(catalog_json())
    assert [d["id"] for d in data][-1] == "G2"
    assert data[-1]["differential"][2]["scalar"] == "1/3"


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2), st.integers(1, 3), st.integers(-5, 5),
       st.integers(-5, 5))
def test_graft_coefficients_multiply(m1, n1, m2, n2, a, b):
    if (m1, n1) == (1, 1) or (m2 + 1, n2) == (1, 1):
        return
    r = frob_compose(FrobElement(m1, n1, a), FrobElement(m2 + 1, n2, b), 1, m2)
    assert r.coeff == a * b * (-1) ** m2
    assert r.degree == FrobElement(m1, n1).degree + FrobElement(m2 + 1, n2).degree
