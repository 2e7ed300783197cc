"""Translation-invariant quasilocal operators C(R)^{(x)m} -> C(R)^{(x)n}.

An operator is stored through its graph: a table sending a combined cell
tuple ``(x_1, ..., x_m, y_1, ..., y_n)`` (doubled coordinates) to the matrix
coefficient of ``c_y`` in ``f(c_x)``.  One representative per Z-orbit is
kept, translated so that the smallest coordinate lies in [0, 1).

The window of an entry is max - min over all m + n coordinates (midpoints of
the cells).  Tensor factors are permuted with the Koszul rule and an operator
``g`` acting on a block of factors picks up ``(-1)^{deg g * deg(left)}``.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cells import Cell, Chain, CompletedChain, anchor_shift, cell_boundary, format_half, parse_half
from .exact import Echelon, as_rational, format_rational, solve_sparse

Pattern = Tuple[int, ...]
Perm = Tuple[int, ...]


class QlocError(ValueError):
    pass


class WiringError(QlocError):
    pass


class DegreeMismatch(QlocError):
    pass


class NoPrimitive(QlocError):
    """The target is not a boundary at the requested window."""


class ClassUndetermined(QlocError):
    """The reference class is itself exact at the requested window."""


# ---------------------------------------------------------------- permutations

def identity_perm(k: int) -> Perm:
    return tuple(range(k))


def check_perm(p: Sequence[int], k: int) -> Perm:
    p = tuple(p)
    if sorted(p) != list(range(k)):
        raise QlocError("%r is not a permutation of %d letters" % (p, k))
    return p


def permute_seq(p: Perm, seq: Sequence) -> tuple:
    """Move the element in slot i to slot p[i]."""
    out = [None] * len(seq)
    for i, v in enumerate(seq):
        out[p[i]] = v
    return tuple(out)


def inverse_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def compose_perm(p: Perm, q: Perm) -> Perm:
    """First q, then p."""
    return tuple(p[q[i]] for i in range(len(q)))


def perm_sign(p: Perm) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def koszul_sign(p: Perm, degrees: Sequence[int]) -> int:
    """Sign of moving graded factors of the given degrees by p."""
    s = 1
    for i in range(len(p)):
        if not degrees[i] & 1:
            continue
        for j in range(i + 1, len(p)):
            if p[i] > p[j] and degrees[j] & 1:
                s = -s
    return s


def _degs(cells: Sequence[int]) -> List[int]:
    return [k & 1 for k in cells]


def _deg_sum(cells: Iterable[int]) -> int:
    return sum(k & 1 for k in cells)


# ---------------------------------------------------------------- operators

def _anchor(p: Pattern) -> Pattern:
    s = anchor_shift(p)
    return tuple(k - s for k in p) if s else p


def _as_half(w) -> Fraction:
    w = as_rational(w)
    if (2 * w).denominator != 1 or w < 0:
        raise QlocError("window must be a non-negative half-integer, got %s" % w)
    return w


class InvariantOperator:
    """A translation-invariant operator given by its anchored graph."""

    __slots__ = ("m", "n", "degree", "window", "table", "_index")

    def __init__(self, m: int, n: int, degree: int, window, table: Mapping[Pattern, Fraction] = ()):
        if m < 1 or n < 1:
            raise QlocError("arities must be positive, got (%d, %d)" % (m, n))
        clean: Dict[Pattern, Fraction] = {}
        for p, v in dict(table).items():
            if len(p) != m + n:
                raise QlocError("entry %r has the wrong length for (%d, %d)" % (p, m, n))
            v = as_rational(v)
            if v:
                a = _anchor(tuple(p))
                clean[a] = clean.get(a, 0) + v
        self.m, self.n, self.degree = m, n, degree
        self.window = _as_half(window)
        self.table = {p: v for p, v in clean.items() if v}
        self._index = None

    # -- basic protocol
    @classmethod
    def zero(cls, m, n, degree, window=0):
        return cls(m, n, degree, window)

    def is_zero(self) -> bool:
        return not self.table

    def __bool__(self):
        return bool(self.table)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.table
        if not isinstance(other, InvariantOperator):
            return NotImplemented
        return (self.m, self.n, self.degree, self.table) == (other.m, other.n, other.degree, other.table)

    def __hash__(self):
        return hash((self.m, self.n, self.degree, frozenset(self.table.items())))

    def _check(self, other):
        if (self.m, self.n, self.degree) != (other.m, other.n, other.degree):
            raise QlocError("operators of shapes (%d,%d,deg %d) and (%d,%d,deg %d) cannot be added"
                            % (self.m, self.n, self.degree, other.m, other.n, other.degree))

    def __add__(self, other):
        self._check(other)
        t = dict(self.table)
        for p, v in other.table.items():
            t[p] = t.get(p, 0) + v
        return InvariantOperator(self.m, self.n, self.degree, max(self.window, other.window), t)

    def __neg__(self):
        return InvariantOperator(self.m, self.n, self.degree, self.window,
                                 {p: -v for p, v in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_rational(k)
        return InvariantOperator(self.m, self.n, self.degree, self.window,
                                 {p: k * v for p, v in self.table.items()})

    __rmul__ = __mul__

    def with_window(self, w) -> "InvariantOperator":
        return InvariantOperator(self.m, self.n, self.degree, w, self.table)

    def minimal_window(self) -> Fraction:
        if not self.table:
            return Fraction(0)
        return Fraction(max(max(p) - min(p) for p in self.table), 2)

    def index(self) -> Dict[Pattern, List[Tuple[Pattern, Fraction]]]:
        """Input pattern (anchored by the inputs alone) -> [(outputs, coeff)]."""
        if self._index is None:
            idx: Dict[Pattern, List[Tuple[Pattern, Fraction]]] = {}
            m = self.m
            for p, v in self.table.items():
                ins = p[:m]
                s = anchor_shift(ins)
                key = tuple(k - s for k in ins)
                idx.setdefault(key, []).append((tuple(k - s for k in p[m:]), v))
            self._index = idx
        return self._index

    def images(self, ins: Sequence[int]) -> List[Tuple[Pattern, Fraction]]:
        """f(c_ins) as a list of (output cells, coefficient)."""
        s = anchor_shift(ins)
        hits = self.index().get(tuple(k - s for k in ins))
        if not hits:
            return []
        if not s:
            return hits
        return [(tuple(k + s for k in outs), v) for outs, v in hits]

    def __repr__(self):
        return "InvariantOperator(m=%d, n=%d, deg=%d, window=%s, %d entries)" % (
            self.m, self.n, self.degree, format_rational(self.window), len(self.table))


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree: int
    minimal_window: Fraction
    degree_violations: Tuple[Pattern, ...] = ()
    window_violations: Tuple[Pattern, ...] = ()


def validate(f: InvariantOperator) -> ValidationReport:
    bad_deg, bad_win = [], []
    w2 = 2 * f.window
    for p in sorted(f.table):
        if _deg_sum(p[f.m:]) - _deg_sum(p[:f.m]) != f.degree:
            bad_deg.append(p)
        if max(p) - min(p) > w2:
            bad_win.append(p)
    return ValidationReport(not bad_deg and not bad_win, f.degree, f.minimal_window(),
                            tuple(bad_deg), tuple(bad_win))


# ---------------------------------------------------------------- application

def apply(f: InvariantOperator, x: Chain) -> Chain:
    if x.dim != f.m:
        raise QlocError("operator expects %d tensor factors, chain lives in R^%d" % (f.m, x.dim))
    out: Dict[Cell, Fraction] = {}
    for c, v in x.terms.items():
        for outs, u in f.images(c):
            out[outs] = out.get(outs, 0) + u * v
    return Chain(f.n, out)


def apply_completed(f: InvariantOperator, xs: Sequence[CompletedChain]) -> CompletedChain:
    """Apply f to the tensor product of m completed chains on R."""
    if len(xs) != f.m:
        raise QlocError("expected %d completed factors, got %d" % (f.m, len(xs)))
    for x in xs:
        if x.dim != 1:
            raise QlocError("factors must be completed chains on R")
    w2 = int(2 * max(f.window, f.minimal_window()))
    pattern: Dict[Cell, Fraction] = {}
    finite: Dict[Cell, Fraction] = {}
    for choice in itertools.product((0, 1), repeat=f.m):
        parts = [list(xs[i].pattern.items()) if choice[i] == 0 else list(xs[i].correction.terms.items())
                 for i in range(f.m)]
        if any(not p for p in parts):
            continue
        fixed = [i for i in range(f.m) if choice[i] == 1]
        free = [i for i in range(f.m) if choice[i] == 0]
        if not fixed:
            # all-periodic: fix the first factor's representative, vary the rest relatively
            for terms in itertools.product(*parts):
                base = terms[0][0][0]
                coeff0 = 1
                for t in terms:
                    coeff0 *= t[1]
                rels = []
                for i in range(1, f.m):
                    k = terms[i][0][0]
                    lo = base - w2 - k
                    hi = base + w2 - k
                    rels.append([d for d in range(lo - (lo % 2), hi + 1, 2)])
                for shifts in itertools.product(*rels):
                    ins = (base,) + tuple(terms[i + 1][0][0] + shifts[i] for i in range(f.m - 1))
                    if max(ins) - min(ins) > w2:
                        continue
                    for outs, u in f.images(ins):
                        pattern[outs] = pattern.get(outs, 0) + u * coeff0
            continue
        for terms in itertools.product(*parts):
            fixed_cells = [terms[i][0][0] for i in fixed]
            lo, hi = min(fixed_cells) - w2, max(fixed_cells) + w2
            coeff0 = 1
            for t in terms:
                coeff0 *= t[1]
            ranges = []
            for i in free:
                k = terms[i][0][0]
                a = lo - k
                start = a + ((-a) % 2)
                ranges.append(range(start, hi - k + 1, 2))
            for shifts in itertools.product(*ranges):
                ins = [0] * f.m
                for i in fixed:
                    ins[i] = terms[i][0][0]
                for i, s in zip(free, shifts):
                    ins[i] = terms[i][0][0] + s
                if max(ins) - min(ins) > w2:
                    continue
                for outs, u in f.images(ins):
                    finite[outs] = finite.get(outs, 0) + u * coeff0
    return CompletedChain(f.n, pattern, Chain(f.n, finite))


# ---------------------------------------------------------------- boundary

def _cofaces(ins: Pattern) -> Iterable[Tuple[Pattern, int]]:
    """Pairs (x, e) with [d c_x : c_ins] = e."""
    sign = 1
    for i, k in enumerate(ins):
        if k & 1:
            sign = -sign
            continue
        yield ins[:i] + (k + 1,) + ins[i + 1:], -sign
        yield ins[:i] + (k - 1,) + ins[i + 1:], sign


def _boundary_terms(p: Pattern, v: Fraction, m: int, degree: int, out: Dict[Pattern, Fraction]):
    ins, outs = p[:m], p[m:]
    for o, s in cell_boundary(outs):
        q = _anchor(ins + o)
        out[q] = out.get(q, 0) + s * v
    e0 = -1 if degree & 1 else 1
    for x, s in _cofaces(ins):
        q = _anchor(x + outs)
        out[q] = out.get(q, 0) - e0 * s * v


def op_boundary(f: InvariantOperator) -> InvariantOperator:
    """[d, f] = d o f - (-1)^{deg f} f o d."""
    out: Dict[Pattern, Fraction] = {}
    for p, v in f.table.items():
        _boundary_terms(p, v, f.m, f.degree, out)
    g = InvariantOperator(f.m, f.n, f.degree - 1, 0, out)
    return g.with_window(max(f.window, g.minimal_window()))


def is_closed(f: InvariantOperator) -> bool:
    return op_boundary(f).is_zero()


# ---------------------------------------------------------------- symmetric groups

def permute(f: InvariantOperator, sigma_in: Sequence[int] = None, sigma_out: Sequence[int] = None) -> InvariantOperator:
    """The operator x -> P_out f(P_in x), where P moves factor i to slot p[i]."""
    si = check_perm(sigma_in if sigma_in is not None else identity_perm(f.m), f.m)
    so = check_perm(sigma_out if sigma_out is not None else identity_perm(f.n), f.n)
    m = f.m
    out: Dict[Pattern, Fraction] = {}
    for p, v in f.table.items():
        ins, outs = p[:m], p[m:]
        x = tuple(ins[si[i]] for i in range(m))
        e_in = koszul_sign(si, _degs(x))
        e_out = koszul_sign(so, _degs(outs))
        q = x + permute_seq(so, outs)
        out[q] = out.get(q, 0) + e_in * e_out * v
    return InvariantOperator(f.m, f.n, f.degree, f.window, out)


def all_perms(k: int) -> List[Perm]:
    return [tuple(p) for p in itertools.permutations(range(k))]


def group_action(f: InvariantOperator, weights: Mapping[Tuple[Perm, Perm], Fraction]) -> InvariantOperator:
    """Sum of weight * permute(f, s_in, s_out) over a group-algebra element."""
    acc: Dict[Pattern, Fraction] = {}
    for (si, so), wgt in weights.items():
        wgt = as_rational(wgt)
        if not wgt:
            continue
        for p, v in permute(f, si, so).table.items():
            acc[p] = acc.get(p, 0) + wgt * v
    return InvariantOperator(f.m, f.n, f.degree, f.window, acc)


def symmetrize(f: InvariantOperator, sign_law: Callable[[Perm, Perm], int],
               group: Optional[Sequence[Tuple[Perm, Perm]]] = None) -> InvariantOperator:
    """Average of sign_law(s) * permute(f, s) over the group (default S_m x S_n).

    The result transforms by ``sign_law`` under the group, and inputs that
    already do are left unchanged.
    """
    if group is None:
        group = [(a, b) for a in all_perms(f.m) for b in all_perms(f.n)]
    k = Fraction(1, len(group))
    return group_action(f, {g: k * sign_law(*g) for g in group})


def sign_in_trivial_out(sigma_in: Perm, sigma_out: Perm) -> int:
    return perm_sign(sigma_in)


def trivial_law(sigma_in: Perm, sigma_out: Perm) -> int:
    return 1


# ---------------------------------------------------------------- composition

@dataclass(frozen=True)
class Wiring:
    """Edges join lower output slots to upper input slots (0-based).

    ``input_order`` sends position i of (lower inputs, free upper inputs in
    upper order) to a result input slot; ``output_order`` sends position j of
    (free lower outputs, upper outputs) to a result output slot.  ``None``
    means the identity.
    """

    edges: Tuple[Tuple[int, int], ...]
    input_order: Optional[Perm] = None
    output_order: Optional[Perm] = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.input_order is not None:
            object.__setattr__(self, "input_order", tuple(self.input_order))
        if self.output_order is not None:
            object.__setattr__(self, "output_order", tuple(self.output_order))

    @classmethod
    def single(cls, out_slot: int = 0, in_slot: int = 0, input_order=None, output_order=None) -> "Wiring":
        return cls(((out_slot, in_slot),), input_order, output_order)

    def check(self, lower: "InvariantOperator", upper: "InvariantOperator") -> Tuple[Perm, Perm]:
        return self.check_arities((lower.m, lower.n), (upper.m, upper.n))

    def check_arities(self, lower: Tuple[int, int], upper: Tuple[int, int]) -> Tuple[Perm, Perm]:
        if not self.edges:
            raise WiringError("a wiring needs at least one edge")
        outs = [a for a, _ in self.edges]
        ins = [b for _, b in self.edges]
        if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
            raise WiringError("edges must form an injective matching")
        if any(not 0 <= a < lower[1] for a in outs) or any(not 0 <= b < upper[0] for b in ins):
            raise WiringError("edge slot out of range")
        k = len(self.edges)
        M = lower[0] + upper[0] - k
        N = lower[1] + upper[1] - k
        try:
            io = check_perm(self.input_order if self.input_order is not None else identity_perm(M), M)
            oo = check_perm(self.output_order if self.output_order is not None else identity_perm(N), N)
        except QlocError as e:
            raise WiringError(str(e))
        return io, oo


@dataclass(frozen=True)
class Diagram:
    """A connected acyclic wiring of vertices.

    ``sources[v][i]`` names what feeds input i of vertex v: ``("in", k)`` for
    global input k or ``(u, j)`` for output j of vertex u.  ``outputs[s]``
    names the vertex output that becomes global output s.
    """

    arities: Tuple[Tuple[int, int], ...]
    sources: Tuple[Tuple[tuple, ...], ...]
    outputs: Tuple[tuple, ...]
    n_inputs: int

    def __post_init__(self):
        used = set()
        ins = set()
        for v, srcs in enumerate(self.sources):
            if len(srcs) != self.arities[v][0]:
                raise WiringError("vertex %d has %d inputs but %d sources" % (v, self.arities[v][0], len(srcs)))
            for s in srcs:
                if s in used:
                    raise WiringError("wire %r used twice" % (s,))
                used.add(s)
                if s[0] == "in":
                    ins.add(s[1])
        for s in self.outputs:
            if s in used or s[0] == "in":
                raise WiringError("bad global output %r" % (s,))
            used.add(s)
        if ins != set(range(self.n_inputs)):
            raise WiringError("every global input must feed exactly one vertex")
        for u, (_, n) in enumerate(self.arities):
            for j in range(n):
                if (u, j) not in used:
                    raise WiringError("output %d of vertex %d is dangling" % (j, u))

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def internal_edges(self) -> List[Tuple[int, int, int, int]]:
        return [(s[0], s[1], v, i) for v, srcs in enumerate(self.sources)
                for i, s in enumerate(srcs) if s[0] != "in"]

    def is_topological(self, order: Sequence[int]) -> bool:
        pos = {v: k for k, v in enumerate(order)}
        return all(pos[u] < pos[v] for u, _, v, _ in self.internal_edges())

    def topological_orders(self) -> List[Tuple[int, ...]]:
        return [o for o in itertools.permutations(range(len(self.arities))) if self.is_topological(o)]


def _enumerate_inputs(M: int, w2: int) -> Iterable[Pattern]:
    """Anchored input tuples of length M with spread at most w2 (doubled)."""
    for a in (0, 1):
        for rest in itertools.product(range(a, a + w2 + 1), repeat=M):
            if min(rest) == a:
                yield rest


def _run_machine(ops: Sequence[InvariantOperator], diagram: Diagram, order: Sequence[int],
                 x: Pattern) -> Dict[Pattern, Fraction]:
    labels = [("in", k) for k in range(diagram.n_inputs)]
    state: Dict[Pattern, Fraction] = {tuple(x): Fraction(1)}
    for v in order:
        f = ops[v]
        srcs = diagram.sources[v]
        pos = [labels.index(s) for s in srcs]
        rest = [i for i in range(len(labels)) if i not in pos]
        # slot i moves to p[i]: the untouched wires first, then the inputs of v in order
        p = [0] * len(labels)
        for new, old in enumerate(rest + pos):
            p[old] = new
        p = tuple(p)
        keep = len(rest)
        new_state: Dict[Pattern, Fraction] = {}
        for cells, c in state.items():
            moved = permute_seq(p, cells)
            c = c * koszul_sign(p, _degs(cells))
            prefix, block = moved[:keep], moved[keep:]
            if f.degree & 1 and _deg_sum(prefix) & 1:
                c = -c
            for outs, u in f.images(block):
                key = prefix + outs
                new_state[key] = new_state.get(key, 0) + c * u
        state = {k: v for k, v in new_state.items() if v}
        labels = [labels[i] for i in rest] + [(v, j) for j in range(f.n)]
        if not state:
            return {}
    pos = [labels.index(s) for s in diagram.outputs]
    p = [0] * len(labels)
    for new, old in enumerate(pos):
        p[old] = new
    p = tuple(p)
    out: Dict[Pattern, Fraction] = {}
    for cells, c in state.items():
        key = permute_seq(p, cells)
        out[key] = out.get(key, 0) + c * koszul_sign(p, _degs(cells))
    return out


def evaluate_diagram(ops: Sequence[InvariantOperator], diagram: Diagram,
                     order: Optional[Sequence[int]] = None) -> InvariantOperator:
    """The composite in End(C(R)) with vertices applied in list order.

    Another topological ``order`` may be supplied; the result is multiplied
    by the Koszul sign of reordering the vertex degrees, so it does not
    depend on the order.
    """
    if len(ops) != len(diagram.arities):
        raise WiringError("diagram has %d vertices, got %d operators" % (len(diagram.arities), len(ops)))
    for f, (m, n) in zip(ops, diagram.arities):
        if (f.m, f.n) != (m, n):
            raise WiringError("operator of arity (%d,%d) placed at a (%d,%d) vertex" % (f.m, f.n, m, n))
    V = len(ops)
    if order is None:
        order = tuple(range(V)) if diagram.is_topological(range(V)) else diagram.topological_orders()[0]
    order = tuple(order)
    if sorted(order) != list(range(V)) or not diagram.is_topological(order):
        raise WiringError("%r is not a topological order" % (order,))
    sign = koszul_sign(inverse_perm(order), [f.degree for f in ops]) if order != tuple(range(V)) else 1
    degree = sum(f.degree for f in ops)
    window = sum((f.window for f in ops), Fraction(0))
    M, N = diagram.n_inputs, diagram.n_outputs
    if any(f.is_zero() for f in ops):
        return InvariantOperator(M, N, degree, window)
    w2 = int(2 * window)
    table: Dict[Pattern, Fraction] = {}
    for x in _enumerate_inputs(M, w2):
        for outs, c in _run_machine(ops, diagram, order, x).items():
            if c:
                table[x + outs] = table.get(x + outs, 0) + sign * c
    return InvariantOperator(M, N, degree, window, table)


def wiring_diagram(lower: InvariantOperator, upper: InvariantOperator, wiring: Wiring) -> Diagram:
    return wiring_diagram_for((lower.m, lower.n), (upper.m, upper.n), wiring)


def wiring_diagram_for(lower: Tuple[int, int], upper: Tuple[int, int], wiring: Wiring) -> Diagram:
    """The two-vertex diagram (vertex 0 = lower, 1 = upper) described by a wiring."""
    (lm, ln), (um, un) = lower, upper
    io, oo = wiring.check_arities(lower, upper)
    plugged = {b: a for a, b in wiring.edges}
    used_outs = set(plugged.values())
    free_upper = [b for b in range(um) if b not in plugged]
    free_lower = [a for a in range(ln) if a not in used_outs]
    lower_src = tuple(("in", io[i]) for i in range(lm))
    upper_src = []
    for b in range(um):
        if b in plugged:
            upper_src.append((0, plugged[b]))
        else:
            upper_src.append(("in", io[lm + free_upper.index(b)]))
    inter = [(0, a) for a in free_lower] + [(1, j) for j in range(un)]
    outputs = permute_seq(oo, inter)
    return Diagram(((lm, ln), (um, un)), (lower_src, tuple(upper_src)), tuple(outputs), len(io))


def compose(lower: InvariantOperator, upper: InvariantOperator, wiring: Wiring) -> InvariantOperator:
    """Feed outputs of ``lower`` into inputs of ``upper`` along ``wiring``."""
    return evaluate_diagram([lower, upper], wiring_diagram(lower, upper, wiring))


# ---------------------------------------------------------------- finite models

def pattern_degree(p: Pattern, m: int) -> int:
    return _deg_sum(p[m:]) - _deg_sum(p[:m])


@functools.lru_cache(maxsize=None)
def _patterns(m: int, n: int, degree: int, w2: int) -> Tuple[Pattern, ...]:
    out = []
    for p in _enumerate_inputs(m + n, w2):
        if pattern_degree(p, m) == degree:
            out.append(p)
    out.sort()
    return tuple(out)


def basis_enumerate(m: int, n: int, degree: int, w) -> List[InvariantOperator]:
    """One operator per anchored pattern of the given shape within window w."""
    w = _as_half(w)
    return [InvariantOperator(m, n, degree, w, {p: 1}) for p in _patterns(m, n, degree, int(2 * w))]


def _boundary_column(p: Pattern, m: int, degree: int) -> Dict[Pattern, Fraction]:
    out: Dict[Pattern, Fraction] = {}
    _boundary_terms(p, Fraction(1), m, degree, out)
    return {q: v for q, v in out.items() if v}


@functools.lru_cache(maxsize=None)
def _boundary_columns(m: int, n: int, degree: int, w2: int) -> Tuple[Dict[Pattern, Fraction], ...]:
    return tuple(_boundary_column(p, m, degree) for p in _patterns(m, n, degree, w2))


def _rank(columns: Sequence[Mapping[Pattern, Fraction]], keep=None) -> int:
    """Column rank, optionally after dropping rows that fail ``keep``."""
    ech = Echelon()
    labels: Dict[Pattern, int] = {}
    for col in columns:
        row = {}
        for q, v in col.items():
            if keep is not None and not keep(q):
                continue
            row[labels.setdefault(q, len(labels))] = v
        ech.add(row)
    return len(ech)


@functools.lru_cache(maxsize=None)
def homology_dims(m: int, n: int, w) -> Dict[int, int]:
    """Homology of the window-w model of qloc^inv(m, n).

    The boundary can move a cell half a step outside the window, so the
    complex used is K = {f within w : [d, f] within w}, which is closed under d.
    dim H_d = dim ker D_d - (dim ker (P D_{d+1}) - dim ker D_{d+1}), where P
    projects onto patterns outside the window.
    """
    w2 = int(2 * _as_half(w))
    outside = lambda q: max(q) - min(q) > w2
    dims = {}
    for d in range(-m, n + 1):
        cols = _boundary_columns(m, n, d, w2)
        up = _boundary_columns(m, n, d + 1, w2)
        ker_d = len(cols) - _rank(cols)
        ker_up = len(up) - _rank(up)
        ker_up_out = len(up) - _rank(up, outside)
        h = ker_d - (ker_up_out - ker_up)
        if h:
            dims[d] = h
    return dims


# ---------------------------------------------------------------- Thom forms

def identity_op() -> InvariantOperator:
    return InvariantOperator(1, 1, 0, 0, {(0, 0): 1, (1, 1): 1})


def comult_paper() -> InvariantOperator:
    h = Fraction(1, 2)
    return InvariantOperator(1, 2, 0, h, {
        (0, 0, 0): 1,
        (1, 0, 1): h, (1, 2, 1): h, (1, 1, 0): h, (1, 1, 2): h,
    })


def mult_paper() -> InvariantOperator:
    h = Fraction(1, 2)
    return InvariantOperator(2, 1, -1, h, {
        (1, 1, 1): 1,
        (0, 1, 0): -h, (2, 1, 2): -h,
        (1, 0, 0): h, (1, 2, 2): h,
    })


@functools.lru_cache(maxsize=None)
def reference_class(m: int, n: int) -> InvariantOperator:
    """Caterpillar composites of the two Thom forms, normalising every class."""
    if m < 1 or n < 1:
        raise QlocError("arities must be positive")
    if (m, n) == (1, 1):
        return identity_op()
    if (m, n) == (1, 2):
        return comult_paper()
    if (m, n) == (2, 1):
        return mult_paper()
    if m == 1:
        lower = reference_class(1, n - 1)
        return _tight(compose(lower, comult_paper(), Wiring.single(n - 2, 0)))
    upper = reference_class(m - 1, n)
    return _tight(compose(mult_paper(), upper, Wiring.single(0, 0)))


def _tight(f: InvariantOperator) -> InvariantOperator:
    return f.with_window(f.minimal_window())


def class_degree(m: int, n: int) -> int:
    return 1 - m


def _solve_columns(columns: Sequence[Mapping[Pattern, Fraction]], target: Mapping[Pattern, Fraction]):
    labels: Dict[Pattern, int] = {}
    rows: Dict[int, Dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for q, v in col.items():
            i = labels.setdefault(q, len(labels))
            rows.setdefault(i, {})[j] = v
    rhs: Dict[int, Fraction] = {}
    for q, v in target.items():
        i = labels.setdefault(q, len(labels))
        rows.setdefault(i, {})
        rhs[i] = v
    order = sorted(rows)
    return solve_sparse([rows[i] for i in order], [rhs.get(i, 0) for i in order], len(columns))


@functools.lru_cache(maxsize=None)
def _class_data(m: int, n: int, w2: int):
    """Echelon form of the boundaries at the class degree, and U's normal form."""
    ech = Echelon()
    for col in _boundary_columns(m, n, class_degree(m, n) + 1, w2):
        ech.add(col)
    ref = ech.reduce(reference_class(m, n).table)
    return ech, ref


def class_coeff(f: InvariantOperator, w_solve=2) -> Fraction:
    """q with f - q * reference_class(m, n) exact at window w_solve.

    Patterns serve directly as (ordered) column keys.  Modulo the span of
    the boundaries a fully reduced vector is a normal form, so f is
    q * U + boundary exactly when its normal form is q times that of U.
    """
    if f.degree != class_degree(f.m, f.n):
        raise DegreeMismatch("class degree of (%d,%d) is %d, operator has degree %d"
                             % (f.m, f.n, class_degree(f.m, f.n), f.degree))
    if not is_closed(f):
        raise QlocError("class_coeff needs a closed operator")
    ech, ref = _class_data(f.m, f.n, int(2 * _as_half(w_solve)))
    if not ref:
        raise ClassUndetermined("reference class of (%d,%d) is exact at window %s" % (f.m, f.n, w_solve))
    r = ech.reduce(f.table)
    key = min(ref)
    q = r.get(key, Fraction(0)) / ref[key]
    if set(r) != {k for k in ref if q} or any(r[k] != q * ref[k] for k in r):
        raise NoPrimitive("no solution of f = q U + [d, x] at window %s" % w_solve)
    return q


def solve_primitive(target: InvariantOperator, w_solve=2,
                    support: Optional[Callable[[Pattern], bool]] = None) -> Optional[InvariantOperator]:
    """Some x with [d, x] = target and window <= w_solve, or None.

    ``support`` restricts the anchored patterns allowed in x.
    """
    w = _as_half(w_solve)
    w2 = int(2 * w)
    if target.is_zero():
        return InvariantOperator(target.m, target.n, target.degree + 1, 0)
    pats = _patterns(target.m, target.n, target.degree + 1, w2)
    cols = _boundary_columns(target.m, target.n, target.degree + 1, w2)
    if support is not None:
        keep = [j for j, p in enumerate(pats) if support(p)]
        pats = [pats[j] for j in keep]
        cols = [cols[j] for j in keep]
    sol = _solve_columns(cols, target.table)
    if sol is None:
        return None
    x = InvariantOperator(target.m, target.n, target.degree + 1, w, {pats[j]: v for j, v in sol.items()})
    return _tight(x).with_window(min(w, max(x.minimal_window(), Fraction(0))))


def is_thom_form(f: InvariantOperator, w_solve=2) -> bool:
    return is_closed(f) and class_coeff(f, w_solve) == 1


def random_operator(rng, m: int, n: int, degree: int, w, density=Fraction(1, 3), max_coeff=3) -> InvariantOperator:
    """A random operator with small integer coefficients (for property tests)."""
    pats = _patterns(m, n, degree, int(2 * _as_half(w)))
    table = {}
    for p in pats:
        if rng.random() < density:
            c = rng.randint(-max_coeff, max_coeff)
            if c:
                table[p] = c
    return InvariantOperator(m, n, degree, w, table)


# ---------------------------------------------------------------- text format

_HEADER = re.compile(r"^op m=(\d+) n=(\d+) deg=(-?\d+) window=(\S+)$")
_ENTRY = re.compile(r"^in:(.*)\|\s*out:(.*)\|\s*coeff:\s*(\S+)$")


def to_text(f: InvariantOperator) -> str:
    lines = ["op m=%d n=%d deg=%d window=%s" % (f.m, f.n, f.degree, format_half(int(2 * f.window)))]
    for p in sorted(f.table):
        lines.append("in: %s | out: %s | coeff: %s" % (
            " ".join(format_half(k) for k in p[:f.m]),
            " ".join(format_half(k) for k in p[f.m:]),
            format_rational(f.table[p])))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> InvariantOperator:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines:
        raise QlocError("empty operator text")
    h = _HEADER.match(lines[0])
    if not h:
        raise QlocError("bad header %r" % lines[0])
    m, n, deg = int(h.group(1)), int(h.group(2)), int(h.group(3))
    window = Fraction(parse_half(h.group(4)), 2)
    table: Dict[Pattern, Fraction] = {}
    for line in lines[1:]:
        e = _ENTRY.match(line)
        if not e:
            raise QlocError("bad entry %r" % line)
        ins = tuple(parse_half(t) for t in e.group(1).split())
        outs = tuple(parse_half(t) for t in e.group(2).split())
        if len(ins) != m or len(outs) != n:
            raise QlocError("entry %r does not match arity (%d,%d)" % (line, m, n))
        p = ins + outs
        table[p] = table.get(p, 0) + Fraction(e.group(3))
    return InvariantOperator(m, n, deg, window, table)
