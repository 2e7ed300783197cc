"""Randomized structural checks shared by the test suite and ``qlocfrob axioms``.

Every check takes a ``random.Random`` and returns True when the identity
holds exactly on the instance it drew.  Instances stay within window 1 per
operator and arity 3, which keeps one draw to a few milliseconds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .cells import Chain, CompletedChain, boundary, completed_boundary, tensor
from .frob import (FrobElement, block_swap, fold_operators, frob_act, frob_compose, frob_fold,
                   frob_wired_coeff)
from .qloc import (Diagram, InvariantOperator, Wiring, all_perms, apply, apply_completed, class_coeff,
                   compose, compose_perm, evaluate_diagram, inverse_perm, op_boundary, permute,
                   random_operator, reference_class)


def sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------- generators

def random_chain(rng: random.Random, dim: int, degree: int = None, terms: int = 3, spread: int = 3) -> Chain:
    """A chain on R^dim, homogeneous when ``degree`` is given."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for _ in range(terms):
        if degree is None:
            c = tuple(rng.randint(-spread, spread) for _ in range(dim))
        else:
            odd = set(rng.sample(range(dim), degree))
            c = tuple(2 * rng.randint(-spread, spread) + (1 if i in odd else 0) for i in range(dim))
        out[c] = out.get(c, 0) + rng.randint(-3, 3)
    return Chain(dim, out)


def random_op(rng: random.Random, m: int = None, n: int = None, max_arity: int = 3,
              max_window: Fraction = Fraction(1)) -> InvariantOperator:
    m = m if m is not None else rng.randint(1, max_arity)
    n = n if n is not None else rng.randint(1, max_arity)
    w = Fraction(rng.randint(0, int(2 * max_window)), 2)
    return random_operator(rng, m, n, rng.randint(-m, n), w, density=Fraction(1, 2))


def random_wiring(rng: random.Random, lower: Tuple[int, int], upper: Tuple[int, int]) -> Wiring:
    k = rng.randint(1, min(lower[1], upper[0]))
    outs = rng.sample(range(lower[1]), k)
    ins = rng.sample(range(upper[0]), k)
    M = lower[0] + upper[0] - k
    N = lower[1] + upper[1] - k
    io = tuple(rng.sample(range(M), M))
    oo = tuple(rng.sample(range(N), N))
    return Wiring(tuple(zip(outs, ins)), io, oo)


def random_completed(rng: random.Random, degree: int) -> CompletedChain:
    pattern = {(degree,): rng.randint(-2, 2)} if rng.random() < 0.7 else {}
    return CompletedChain(1, pattern, random_chain(rng, 1, degree, terms=2, spread=2))


# ---------------------------------------------------------------- chains

def chain_d_squared(rng: random.Random) -> bool:
    x = random_chain(rng, rng.randint(1, 3), terms=4)
    return boundary(boundary(x)).terms == {}


def tensor_leibniz(rng: random.Random) -> bool:
    da, db = rng.randint(1, 2), rng.randint(1, 2)
    x = random_chain(rng, da, rng.randint(0, da))
    y = random_chain(rng, db, rng.randint(0, db))
    if not x:
        return True
    lhs = boundary(tensor(x, y))
    rhs = tensor(boundary(x), y) + tensor(x, boundary(y)) * sign(x.degree())
    return lhs == rhs


# ---------------------------------------------------------------- operators

def operator_d_squared(rng: random.Random) -> bool:
    return op_boundary(op_boundary(random_op(rng))).is_zero()


def compose_leibniz(rng: random.Random) -> bool:
    """[d, upper o lower] = [d, upper] o lower + (-1)^{|upper|} upper o [d, lower]."""
    f = random_op(rng, max_arity=2)
    g = random_op(rng, max_arity=2)
    w = random_wiring(rng, (f.m, f.n), (g.m, g.n))
    lhs = op_boundary(compose(f, g, w))
    rhs = compose(f, op_boundary(g), w) + compose(op_boundary(f), g, w) * sign(g.degree)
    return lhs == rhs


def koszul_double_swap(rng: random.Random) -> bool:
    """Swapping twice is the identity, and the action is a group action."""
    f = random_op(rng)
    si = tuple(rng.sample(range(f.m), f.m))
    so = tuple(rng.sample(range(f.n), f.n))
    back = permute(permute(f, si, so), inverse_perm(si), inverse_perm(so))
    ti = tuple(rng.sample(range(f.m), f.m))
    to = tuple(rng.sample(range(f.n), f.n))
    twice = permute(permute(f, si, so), ti, to)
    # inputs are precomposed, outputs postcomposed
    once = permute(f, compose_perm(si, ti), compose_perm(to, so))
    return back == f and twice == once


def intertwining(rng: random.Random) -> bool:
    """apply is a chain map up to [d, f], on finite and on completed chains."""
    f = random_op(rng)
    degs = [rng.randint(0, 1) for _ in range(f.m)]
    xs = [random_chain(rng, 1, d, terms=2, spread=2) for d in degs]
    x = xs[0]
    for y in xs[1:]:
        x = tensor(x, y)
    ok = boundary(apply(f, x)) - apply(f, boundary(x)) * sign(f.degree) == apply(op_boundary(f), x)
    fin = apply_completed(f, [CompletedChain.finite(y) for y in xs])
    ok = ok and fin.correction == apply(f, x) and not fin.pattern
    cs = [random_completed(rng, d) for d in degs]
    acc = CompletedChain(f.n)
    e = 1
    for i in range(f.m):
        ys = list(cs)
        ys[i] = completed_boundary(cs[i])
        acc = acc + apply_completed(f, ys) * e
        e *= sign(degs[i])
    lhs = completed_boundary(apply_completed(f, cs))
    return ok and lhs == apply_completed(op_boundary(f), cs) + acc * sign(f.degree)


# ---------------------------------------------------------------- associativity

def _diagram(shape: str, rng: random.Random) -> Tuple[Diagram, List[Tuple[int, int]]]:
    """Three-vertex diagrams: the four ways two compositions can nest."""
    if shape == "sequential":
        # a -> b -> c
        ar = [(rng.randint(1, 2), rng.randint(1, 2)), (None, rng.randint(1, 2)), (None, rng.randint(1, 2))]
        ar[1] = (ar[0][1], ar[1][1])
        ar[2] = (ar[1][1], ar[2][1])
        src = (tuple(("in", i) for i in range(ar[0][0])),
               tuple((0, j) for j in range(ar[0][1])),
               tuple((1, j) for j in range(ar[1][1])))
        outs = tuple((2, j) for j in range(ar[2][1]))
        return Diagram(tuple(ar), src, outs, ar[0][0]), ar
    if shape == "parallel_in":
        # a and b both feed c
        a, b = (rng.randint(1, 2), 1), (rng.randint(1, 2), 1)
        c = (2 + rng.randint(0, 1), rng.randint(1, 2))
        src = (tuple(("in", i) for i in range(a[0])),
               tuple(("in", a[0] + i) for i in range(b[0])),
               ((0, 0), (1, 0)) + tuple(("in", a[0] + b[0] + i) for i in range(c[0] - 2)))
        return Diagram((a, b, c), src, tuple((2, j) for j in range(c[1])), a[0] + b[0] + c[0] - 2), [a, b, c]
    if shape == "parallel_out":
        # a feeds both b and c
        a = (rng.randint(1, 2), 2 + rng.randint(0, 1))
        b, c = (1, rng.randint(1, 2)), (1, rng.randint(1, 2))
        src = (tuple(("in", i) for i in range(a[0])), ((0, 0),), ((0, 1),))
        outs = tuple((0, j) for j in range(2, a[1])) + tuple((1, j) for j in range(b[1])) + \
            tuple((2, j) for j in range(c[1]))
        return Diagram((a, b, c), src, outs, a[0]), [a, b, c]
    if shape == "loop":
        # a -> b, a -> c, b -> c: a genus-one triangle
        a = (rng.randint(1, 2), 2)
        b = (1, rng.randint(1, 2))
        c = (2, rng.randint(1, 2))
        src = (tuple(("in", i) for i in range(a[0])), ((0, 0),), ((0, 1), (1, 0)))
        outs = tuple((1, j) for j in range(1, b[1])) + tuple((2, j) for j in range(c[1]))
        return Diagram((a, b, c), src, outs, a[0]), [a, b, c]
    raise ValueError("unknown shape %r" % shape)


ASSOCIATIVITY_SHAPES = ("sequential", "parallel_in", "parallel_out", "loop")


def associativity(shape: str) -> Callable[[random.Random], bool]:
    """Nested two-vertex composites agree with each other and with the direct evaluation."""

    def check(rng: random.Random) -> bool:
        d, ar = _diagram(shape, rng)
        ops = [random_operator(rng, m, n, rng.randint(-m, n), Fraction(rng.randint(0, 2), 2),
                               density=Fraction(1, 2)) for m, n in ar]
        direct = evaluate_diagram(ops, d)
        folds = [fold_operators(ops, d, [c]) for c in (0, 1)]
        orders = [evaluate_diagram(ops, d, o) for o in d.topological_orders()]
        return all(f == direct for f in folds + orders)

    check.__name__ = "associativity_" + shape
    return check


# ---------------------------------------------------------------- Frob_1 signs

def frob_sign_cases(max_total: int = 3) -> List[Tuple[Tuple[int, int], Tuple[int, int], Wiring]]:
    """Every single-edge wiring of basis arities with m + n <= max_total."""
    shapes = [(m, n) for m in range(1, max_total) for n in range(1, max_total)
              if m + n <= max_total and (m, n) != (1, 1)]
    out = []
    for lo in shapes:
        for up in shapes:
            M, N = lo[0] + up[0] - 1, lo[1] + up[1] - 1
            for j, i in itertools.product(range(lo[1]), range(up[0])):
                for io in all_perms(M):
                    for oo in all_perms(N):
                        out.append((lo, up, Wiring(((j, i),), io, oo)))
    return out


def frob_sign_agrees(lo, up, w: Wiring) -> bool:
    """Symbolic coefficient = class of the composite of reference classes."""
    c = class_coeff(compose(reference_class(*lo), reference_class(*up), w), 2)
    return c == frob_wired_coeff(lo, up, w)


def frob_fold_consistent(rng: random.Random) -> bool:
    """Folding a sequential Frob_1 tree in either order gives one coefficient."""
    d, ar = _diagram("sequential", rng)
    if any(a == (1, 1) for a in ar):
        return True
    els = [FrobElement(m, n, rng.randint(1, 3)) for m, n in ar]
    return frob_fold(els, d, [0]) == frob_fold(els, d, [1])


# ---------------------------------------------------------------- driver

@dataclass
class PropertyResult:
    name: str
    trials: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


PROPERTIES: Dict[str, Callable[[random.Random], bool]] = {
    "chain d^2 = 0": chain_d_squared,
    "operator d^2 = 0": operator_d_squared,
    "tensor Leibniz": tensor_leibniz,
    "compose Leibniz": compose_leibniz,
    **{"associativity (%s)" % s: associativity(s) for s in ASSOCIATIVITY_SHAPES},
    "Koszul double swap": koszul_double_swap,
    "apply intertwining": intertwining,
    "Frob_1 fold order": frob_fold_consistent,
}


def run_property(name: str, trials: int, seed: int) -> PropertyResult:
    fn = PROPERTIES[name]
    rng = random.Random("%s:%s" % (seed, name))
    failures = sum(1 for _ in range(trials) if not fn(rng))
    return PropertyResult(name, trials, failures)


def frob_symbolic_laws() -> Dict[str, bool]:
    """The two permutation-composition displays and the vanishing rule, symbolically."""
    out = {}
    ok = True
    for m1, n1, m2, n2 in itertools.product(range(1, 4), repeat=4):
        if (m1, n1) == (1, 1) or (m2 + 1, n2) == (1, 1):
            continue
        a, b = FrobElement(m1, n1), FrobElement(m2 + 1, n2)
        ok = ok and frob_compose(a, b, 1, m2).coeff == sign(m2)
    out["single graft coefficient (-1)^m2"] = ok
    ok = True
    for m1, m2 in itertools.product(range(1, 4), repeat=2):
        el = FrobElement(m1 + m2, 1)
        ok = ok and frob_act(el, block_swap(m1, m2)).coeff == sign(m1 * m2)
    out["block swap coefficient (-1)^(m1 m2)"] = ok
    ok = True
    for k in (2, 3):
        for m2 in range(0, 2):
            ok = ok and frob_compose(FrobElement(1, k), FrobElement(m2 + k, 1), k, m2).coeff == 0
    out["grafts along k >= 2 edges vanish"] = ok
    return out
