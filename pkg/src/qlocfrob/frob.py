"""The symbolic side: Frob_1, graph words and the shFrob_1 generator catalog.

Frob_1(m, n) is one-dimensional in degree 1 - m for (m, n) != (1, 1).  Output
permutations act trivially and input permutations by their sign.  Grafting
one output of a lower element into an upper element is the basis element of
the composite arity times a sign; grafting along two or more edges is zero.

Graph words are diagrams whose vertices carry generator symbols.  A vertex
may also carry an element of the group algebra of S_m x S_n, which is how
other members of a generator's orbit are named.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import as_rational, format_rational
from .qloc import (Diagram, InvariantOperator, Perm, Wiring, WiringError,
                   check_perm, compose_perm, evaluate_diagram, group_action, identity_perm,
                   inverse_perm, koszul_sign, perm_sign, permute, wiring_diagram_for)


class FrobError(ValueError):
    pass


class UnassignedSymbol(KeyError):
    pass


# ---------------------------------------------------------------- Frob_1

@dataclass(frozen=True)
class FrobElement:
    """coeff times the basis vector of Frob_1(m, n)."""

    m: int
    n: int
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_rational(self.coeff))
        # Frob_1(1, 1) = 0 still has its zero vector
        if self.m < 1 or self.n < 1 or ((self.m, self.n) == (1, 1) and self.coeff):
            raise FrobError("Frob_1(%d,%d) has no basis vector" % (self.m, self.n))

    @property
    def degree(self) -> int:
        return 1 - self.m

    def scaled(self, k) -> "FrobElement":
        return FrobElement(self.m, self.n, self.coeff * as_rational(k))


def frob_act(a: FrobElement, sigma_in: Sequence[int] = None, sigma_out: Sequence[int] = None) -> FrobElement:
    si = check_perm(sigma_in if sigma_in is not None else identity_perm(a.m), a.m)
    if sigma_out is not None:
        check_perm(sigma_out, a.n)
    return a.scaled(perm_sign(si))


def frob_compose(a: FrobElement, b: FrobElement, k: int, m2: int) -> FrobElement:
    """Graft ``k`` outputs of the lower ``a`` into the last inputs of the upper ``b``.

    ``b`` has ``m2`` free inputs followed by the ``k`` grafted ones.  The
    result lists inputs as in the target P(m1 u m2, n1 u n2): the inputs of
    ``a`` first, then the free inputs of ``b``.
    """
    if k < 1 or k > a.n or b.m != m2 + k or m2 < 0:
        raise FrobError("cannot graft %d edges from (%d,%d) into (%d,%d) with %d free inputs"
                        % (k, a.m, a.n, b.m, b.n, m2))
    M, N = a.m + m2, a.n - k + b.n
    if k >= 2:
        return FrobElement(M, N, 0)
    return FrobElement(M, N, a.coeff * b.coeff * (-1) ** m2)


def block_swap(m1: int, m2: int) -> Perm:
    """Exchange a leading block of m1 legs with the following m2 legs."""
    return tuple(range(m2, m2 + m1)) + tuple(range(m2))


def frob_wired_coeff(lower: Tuple[int, int], upper: Tuple[int, int], wiring: Wiring) -> Fraction:
    """Frob_1 coefficient of a composite of basis vectors laid out by a wiring.

    The wiring uses the conventions of :func:`qlocfrob.qloc.compose`, whose
    natural input order (lower inputs, free upper inputs) is that of
    :func:`frob_compose`.  A graft into upper slot i is reduced to a graft
    into the last slot by the cycle moving slot i to the end.
    """
    io, _ = wiring.check_arities(lower, upper)
    if len(wiring.edges) >= 2:
        return Fraction(0)
    (m1, n1), (mu, nu) = lower, upper
    (_, i), = wiring.edges
    m2 = mu - 1
    upper_el = frob_act(FrobElement(mu, nu), tuple(range(i)) + (mu - 1,) + tuple(range(i, mu - 1)))
    base = frob_compose(FrobElement(m1, n1), upper_el, 1, m2).coeff
    return base * perm_sign(io)


# ---------------------------------------------------------------- graph words

Action = Tuple[Tuple[Perm, Perm, Fraction], ...]


@dataclass(frozen=True)
class Vertex:
    """A generator symbol of arity (m, n) and the given degree.

    ``action`` is a group-algebra element sum w * (s_in, s_out); the vertex
    then stands for that element applied to the symbol.  Empty means identity.
    """

    symbol: str
    m: int
    n: int
    degree: int
    action: Action = ()

    def __post_init__(self):
        act = tuple((tuple(si), tuple(so), as_rational(w)) for si, so, w in self.action)
        for si, so, _ in act:
            check_perm(si, self.m)
            check_perm(so, self.n)
        object.__setattr__(self, "action", act)

    def acted(self, *action) -> "Vertex":
        return Vertex(self.symbol, self.m, self.n, self.degree, tuple(action))

    def value(self, f: InvariantOperator) -> InvariantOperator:
        if not self.action:
            return f
        return group_action(f, {(si, so): w for si, so, w in self.action})

    def label(self) -> str:
        if not self.action:
            return self.symbol
        parts = ["%s*%s%s" % (format_rational(w), "".join(map(str, si)), "".join(map(str, so)))
                 for si, so, w in self.action]
        return "(%s).%s" % (" + ".join(parts), self.symbol)


@dataclass(frozen=True)
class GraphTerm:
    """scalar times a connected acyclic diagram of generator symbols."""

    vertices: Tuple[Vertex, ...]
    sources: Tuple[Tuple[tuple, ...], ...]
    outputs: Tuple[tuple, ...]
    n_inputs: int
    scalar: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "scalar", as_rational(self.scalar))
        d = self.diagram  # validates wiring
        if not d.topological_orders():
            raise WiringError("graph has a directed cycle")

    @property
    def diagram(self) -> Diagram:
        return Diagram(tuple((v.m, v.n) for v in self.vertices), self.sources, self.outputs, self.n_inputs)

    @property
    def m(self) -> int:
        return self.n_inputs

    @property
    def n(self) -> int:
        return len(self.outputs)

    @property
    def degree(self) -> int:
        return sum(v.degree for v in self.vertices)

    def edge_count(self) -> int:
        return len(self.diagram.internal_edges())

    def times(self, k) -> "GraphTerm":
        return GraphTerm(self.vertices, self.sources, self.outputs, self.n_inputs, self.scalar * as_rational(k))

    def encode(self) -> str:
        """A canonical text encoding, used for ordering and export."""
        vs = ",".join(v.label() for v in self.vertices)
        src = ";".join(",".join("%s%s" % s for s in srcs) for srcs in self.sources)
        out = ",".join("%s%s" % s for s in self.outputs)
        return "[%s | %s | %s]" % (vs, src, out)


def single_vertex(v: Vertex, scalar=1) -> GraphTerm:
    return GraphTerm((v,), (tuple(("in", i) for i in range(v.m)),),
                     tuple((0, j) for j in range(v.n)), v.m, scalar)


def two_vertex(lower: Vertex, upper: Vertex, wiring: Wiring, scalar=1) -> GraphTerm:
    """The graph word matching ``compose(lower, upper, wiring)``."""
    d = wiring_diagram_for((lower.m, lower.n), (upper.m, upper.n), wiring)
    return GraphTerm((lower, upper), d.sources, d.outputs, d.n_inputs, scalar)


def _components(g: GraphTerm) -> int:
    parent = list(range(len(g.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, _, v, _ in g.diagram.internal_edges():
        parent[find(u)] = find(v)
    return len({find(a) for a in range(len(parent))})


def graph_genus(g: GraphTerm) -> int:
    if _components(g) != 1:
        raise FrobError("graph is disconnected")
    return g.edge_count() - len(g.vertices) + 1


def mult_comult_counts(g: GraphTerm) -> Tuple[int, int]:
    syms = [v.symbol for v in g.vertices]
    if any(s not in ("mult", "comult") for s in syms):
        raise FrobError("counts are defined for words in mult and comult only")
    return syms.count("mult"), syms.count("comult")


def evaluate_graph(g: GraphTerm, eta: Mapping[str, InvariantOperator],
                   order: Optional[Sequence[int]] = None) -> InvariantOperator:
    """Evaluate a graph word in End(C(R)) under the assignment ``eta``."""
    ops = []
    for v in g.vertices:
        if v.symbol not in eta:
            raise UnassignedSymbol(v.symbol)
        ops.append(v.value(eta[v.symbol]))
    return evaluate_diagram(ops, g.diagram, order) * g.scalar


# ---------------------------------------------------------------- folding

def _reorder(d: Diagram, order: Sequence[int]) -> Diagram:
    """Relabel vertices so that ``order`` becomes 0, 1, ..."""
    new = {v: k for k, v in enumerate(order)}
    ren = lambda s: s if s[0] == "in" else (new[s[0]], s[1])
    return Diagram(tuple(d.arities[v] for v in order),
                   tuple(tuple(ren(s) for s in d.sources[v]) for v in order),
                   tuple(ren(s) for s in d.outputs), d.n_inputs)


def contraction_order(d: Diagram, u: int, v: int) -> Optional[Tuple[int, ...]]:
    """A topological order placing v right after u, or None if impossible."""
    for o in d.topological_orders():
        if o.index(v) == o.index(u) + 1:
            return o
    return None


def contract(d: Diagram, p: int) -> Tuple[Diagram, Diagram]:
    """Merge vertices p and p + 1 of a diagram listed in topological order.

    Returns (merged diagram, two-vertex subdiagram).  The merged vertex sits
    at position p; its inputs are the inputs of p followed by the inputs of
    p + 1 not fed by p, and its outputs are the outputs of p not consumed by
    p + 1 followed by the outputs of p + 1.
    """
    q = p + 1
    sp, sq = d.sources[p], d.sources[q]
    ext_in = list(sp) + [s for s in sq if s[0] != p]
    fed = {s[1] for s in sq if s[0] == p}
    outs = [(p, j) for j in range(d.arities[p][1]) if j not in fed] + [(q, j) for j in range(d.arities[q][1])]
    sub_src = (tuple(("in", i) for i in range(len(sp))),
               tuple((0, s[1]) if s[0] == p else ("in", len(sp) + [t for t in sq if t[0] != p].index(s))
                     for s in sq))
    sub_out = tuple((0, j) if w == p else (1, j) for w, j in outs)
    sub = Diagram((d.arities[p], d.arities[q]), sub_src, sub_out, len(ext_in))
    where = {s: k for k, s in enumerate(outs)}

    def ren(s):
        if s[0] == "in":
            return s
        if s[0] in (p, q):
            return (p, where[s])
        return (s[0] - 1, s[1]) if s[0] > q else s

    arities = list(d.arities[:p]) + [(len(ext_in), len(outs))] + list(d.arities[q + 1:])
    sources = [tuple(ren(s) for s in d.sources[w]) for w in range(len(d.arities)) if w not in (p, q)]
    sources.insert(p, tuple(ren(s) for s in ext_in))
    merged = Diagram(tuple(arities), tuple(sources), tuple(ren(s) for s in d.outputs), d.n_inputs)
    return merged, sub


def fold_operators(ops: Sequence[InvariantOperator], d: Diagram, edge_choices: Sequence[int]) -> InvariantOperator:
    """Evaluate by contracting one edge at a time with two-vertex composites.

    ``edge_choices[k]`` picks (modulo the number of contractible edges) the
    edge contracted at step k.  Every choice gives the same operator.
    """
    ops = list(ops)
    sign = 1
    step = 0
    while len(ops) > 1:
        cands = []
        for u, _, v, _ in d.internal_edges():
            o = contraction_order(d, u, v)
            if o is not None and (u, v) not in [c[:2] for c in cands]:
                cands.append((u, v, o))
        u, v, o = cands[edge_choices[step % len(edge_choices)] % len(cands)] if edge_choices else cands[0]
        step += 1
        sign *= koszul_sign(inverse_perm(o), [f.degree for f in ops]) if o != tuple(range(len(ops))) else 1
        d = _reorder(d, o)
        ops = [ops[w] for w in o]
        p = o.index(u)
        d, sub = contract(d, p)
        merged = evaluate_diagram(ops[p:p + 2], sub)
        ops = ops[:p] + [merged] + ops[p + 2:]
    srcs = d.sources[0]
    sigma = [0] * len(srcs)
    for slot, s in enumerate(srcs):
        sigma[s[1]] = slot
    tau = [0] * len(d.outputs)
    for glob, s in enumerate(d.outputs):
        tau[s[1]] = glob
    return permute(ops[0], tuple(sigma), tuple(tau)) * sign


def frob_fold(elements: Sequence[FrobElement], d: Diagram, edge_choices: Sequence[int]) -> Fraction:
    """Frob_1 coefficient of a diagram of basis multiples, folded edge by edge."""
    coeffs = [e.coeff for e in elements]
    degs = [e.degree for e in elements]
    arities = [(e.m, e.n) for e in elements]
    if list(d.arities) != arities:
        raise FrobError("elements do not match the diagram arities")
    sign = Fraction(1)
    step = 0
    while len(coeffs) > 1:
        cands = []
        for u, _, v, _ in d.internal_edges():
            o = contraction_order(d, u, v)
            if o is not None and (u, v) not in [c[:2] for c in cands]:
                cands.append((u, v, o))
        u, v, o = cands[edge_choices[step % len(edge_choices)] % len(cands)] if edge_choices else cands[0]
        step += 1
        if o != tuple(range(len(coeffs))):
            sign *= koszul_sign(inverse_perm(o), degs)
        d = _reorder(d, o)
        coeffs = [coeffs[w] for w in o]
        degs = [degs[w] for w in o]
        p = o.index(u)
        d, sub = contract(d, p)
        edges = [(s[1], i) for i, s in enumerate(sub.sources[1]) if s[0] == 0]
        (lm, ln), (um, un) = sub.arities
        if len(edges) >= 2 or (sub.n_inputs, len(sub.outputs)) == (1, 1):
            return Fraction(0)
        c = frob_wired_coeff((lm, ln), (um, un), Wiring(tuple(edges))) * coeffs[p] * coeffs[p + 1]
        coeffs = coeffs[:p] + [c] + coeffs[p + 2:]
        degs = degs[:p] + [1 - sub.n_inputs] + degs[p + 2:]
    sigma = [0] * d.n_inputs
    for slot, s in enumerate(d.sources[0]):
        sigma[s[1]] = slot
    return coeffs[0] * sign * perm_sign(tuple(sigma))


# ---------------------------------------------------------------- catalog

@dataclass(frozen=True)
class GeneratorRecord:
    """One shFrob_1 generator orbit with its cobar differential.

    ``projector`` is a group-algebra element (tuple of (s_in, s_out, w)) whose
    image is the equivariance type of the value; None means no constraint.
    """

    id: str
    m: int
    n: int
    genus: int
    differential: Tuple[GraphTerm, ...]
    sign_law: str
    projector: Optional[Action] = None
    orbit_dim: int = 1

    @property
    def weight(self) -> int:
        return 2 * self.genus + self.m + self.n - 2

    @property
    def degree(self) -> int:
        return self.genus + self.n - 2

    @property
    def vertex(self) -> Vertex:
        return Vertex(self.id, self.m, self.n, self.degree)

    def project(self, f: InvariantOperator) -> InvariantOperator:
        if self.projector is None:
            return f
        return group_action(f, {(si, so): w for si, so, w in self.projector})

    def sort_key(self):
        return (self.weight, self.m, self.n, ";".join(t.encode() for t in self.differential))


def _group_product(a: Action, b: Action) -> Action:
    """The group-algebra product a * b (apply b first)."""
    acc: Dict[Tuple[Perm, Perm], Fraction] = {}
    for si, so, w in a:
        for ti, to, u in b:
            # inputs are precomposed, outputs postcomposed
            key = (compose_perm(ti, si), compose_perm(so, to))
            acc[key] = acc.get(key, 0) + w * u
    return tuple((si, so, w) for (si, so), w in sorted(acc.items()) if w)


def _s3_projector(side: str, eps: int) -> Action:
    """e_V (1 + eps tau13) / 2 on the inputs or outputs of a (3,1)/(1,3) slot."""
    third = Fraction(1, 3)
    idt = (0,)
    def el(p):
        return (p, idt) if side == "in" else (idt, p)
    e_v = tuple(el(p) + (w,) for p, w in [((0, 1, 2), 2 * third), ((1, 2, 0), -third), ((2, 0, 1), -third)])
    half = Fraction(1, 2)
    t = tuple(el(p) + (w,) for p, w in [((0, 1, 2), half), ((2, 1, 0), eps * half)])
    return _group_product(e_v, t)


SWAP = (1, 0)


def generator_catalog() -> List[GeneratorRecord]:
    """Generators through weight 4 that the pipeline needs, in well-order."""
    mult = Vertex("mult", 2, 1, -1)
    comult = Vertex("comult", 1, 2, 0)
    A = Vertex("comult_assoc", 1, 3, 1)
    B = Vertex("frobenius", 2, 2, 0)
    C = Vertex("mult_assoc", 3, 1, -1)
    G1 = Vertex("G1", 1, 2, 1)
    G1p = Vertex("G1p", 2, 1, 0)
    two = Wiring(((0, 0), (1, 1)))
    # other orbit members used by later differentials
    B_mirror = B.acted((SWAP, SWAP, -1))
    C_twist = C.acted(((0, 2, 1), (0,), 1))

    recs = [
        GeneratorRecord("comult", 1, 2, 0, (), "trivial on outputs",
                        ((((0,), (0, 1), Fraction(1, 2)), ((0,), SWAP, Fraction(1, 2))))),
        GeneratorRecord("mult", 2, 1, 0, (), "sign on inputs",
                        (((0, 1), (0,), Fraction(1, 2)), (SWAP, (0,), Fraction(-1, 2)))),
        GeneratorRecord(
            "comult_assoc", 1, 3, 0,
            (two_vertex(comult, comult, Wiring(((0, 0),), None, (2, 0, 1))),
             two_vertex(comult, comult, Wiring(((1, 0),)), -1)),
            "two-dimensional irreducible on outputs, odd under the outer swap",
            _s3_projector("out", -1), 2),
        GeneratorRecord(
            "frobenius", 2, 2, 0,
            (two_vertex(mult, comult, Wiring.single(0, 0)),
             two_vertex(comult, mult, Wiring(((0, 1),), SWAP, SWAP), -1)),
            "free orbit", None, 4),
        GeneratorRecord(
            "mult_assoc", 3, 1, 0,
            (two_vertex(mult, mult, Wiring(((0, 1),), (1, 2, 0), None)),
             two_vertex(mult, mult, Wiring.single(0, 0))),
            "two-dimensional irreducible on inputs, even under the outer swap",
            _s3_projector("in", 1), 2),
        GeneratorRecord(
            "G1", 1, 2, 1,
            (two_vertex(A, mult, Wiring(((0, 0), (1, 1)), None, SWAP)),
             two_vertex(comult, B, two)),
            "sign on outputs", (((0,), (0, 1), Fraction(1, 2)), ((0,), SWAP, Fraction(-1, 2)))),
        GeneratorRecord(
            "G1p", 2, 1, 1,
            (two_vertex(B_mirror, mult, two),
             two_vertex(comult, C, two, -1)),
            "trivial on inputs", (((0, 1), (0,), Fraction(1, 2)), (SWAP, (0,), Fraction(1, 2)))),
        GeneratorRecord(
            "G2", 1, 1, 2,
            (two_vertex(G1, mult, two),
             two_vertex(comult, G1p, two),
             two_vertex(A, C_twist, Wiring(((0, 0), (1, 1), (2, 2))), Fraction(1, 3))),
            "trivial"),
    ]
    recs.sort(key=GeneratorRecord.sort_key)
    return recs


def catalog_by_id() -> Dict[str, GeneratorRecord]:
    return {r.id: r for r in generator_catalog()}


def check_record(rec: GeneratorRecord, catalog: Mapping[str, GeneratorRecord]) -> List[str]:
    """Consistency problems of a record (empty list when fine)."""
    problems = []
    if rec.degree != rec.genus + rec.n - 2:
        problems.append("degree formula")
    for t in rec.differential:
        label = t.encode()
        if (t.m, t.n) != (rec.m, rec.n):
            problems.append("term arity " + label)
        if t.degree != rec.degree - 1:
            problems.append("term degree " + label)
        if any(catalog[v.symbol].sort_key() >= rec.sort_key() for v in t.vertices):
            problems.append("term uses a later generator " + label)
        if sum(catalog[v.symbol].weight for v in t.vertices) != rec.weight:
            problems.append("term weight " + label)
        if graph_genus(t) + sum(catalog[v.symbol].genus for v in t.vertices) != rec.genus:
            problems.append("term genus " + label)
    return problems


def catalog_json() -> str:
    out = []
    for r in generator_catalog():
        out.append({
            "id": r.id, "m": r.m, "n": r.n, "genus": r.genus, "weight": r.weight, "degree": r.degree,
            "orbit_dim": r.orbit_dim, "sign_law": r.sign_law,
            "differential": [{"scalar": format_rational(t.scalar), "graph": t.encode(),
                              "genus": graph_genus(t)} for t in r.differential],
        })
    return json.dumps(out, indent=2)
