"""Cellular chains on the cubulation of R^n by integer hyperplanes.

A cell is stored as a tuple of *doubled* coordinates: the cell ``c_z`` with
``z`` in Z u (Z + 1/2) is the integer ``2z``.  Odd entries are the
half-integer (1-dimensional) directions, so the degree of a cell is the
number of odd entries.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

from .exact import as_rational, format_rational

Cell = Tuple[int, ...]


class ChainError(ValueError):
    pass


def cell(*coords) -> Cell:
    """Build a cell from real coordinates (ints, Fractions or ``"p/q"``)."""
    out = []
    for x in coords:
        q = as_rational(x) * 2
        if q.denominator != 1:
            raise ChainError("coordinate %s is not a half-integer" % (x,))
        out.append(int(q))
    return tuple(out)


def cell_degree(c: Cell) -> int:
    return sum(k & 1 for k in c)


def anchor_shift(c: Cell) -> int:
    """Doubled translation bringing the minimal coordinate into [0, 1)."""
    lo = min(c)
    return lo - (lo % 2)


def shift_cell(c: Cell, s2: int) -> Cell:
    return tuple(k + s2 for k in c)


def anchored(c: Cell) -> Tuple[Cell, int]:
    s = anchor_shift(c)
    return tuple(k - s for k in c), s


def spread(c: Cell) -> int:
    """max - min of the doubled coordinates."""
    return max(c) - min(c)


def cell_boundary(c: Cell) -> Iterator[Tuple[Cell, int]]:
    sign = 1
    for i, k in enumerate(c):
        if k & 1:
            yield c[:i] + (k + 1,) + c[i + 1:], sign
            yield c[:i] + (k - 1,) + c[i + 1:], -sign
            sign = -sign


def format_half(k: int) -> str:
    if k & 1:
        return "%d/2" % k
    return str(k // 2)


def parse_half(text: str) -> int:
    text = text.strip()
    if "/" in text:
        p, q = text.split("/")
        if int(q) != 2:
            raise ChainError("expected a half-integer, got %r" % text)
        k = int(p)
        if not k & 1:
            raise ChainError("non-reduced half-integer %r" % text)
        return k
    return 2 * int(text)


def format_cell(c: Cell) -> str:
    return "(" + ",".join(format_half(k) for k in c) + ")"


class Chain:
    """A finite Q-linear combination of cells of R^n."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Cell, Fraction] = ()):
        clean: Dict[Cell, Fraction] = {}
        for c, v in dict(terms).items():
            if len(c) != dim:
                raise ChainError("cell %r does not live in R^%d" % (c, dim))
            v = as_rational(v)
            if v:
                clean[tuple(c)] = clean.get(tuple(c), 0) + v
        self.dim = dim
        self.terms = {c: v for c, v in clean.items() if v}

    @classmethod
    def basis(cls, c: Cell, coeff=1) -> "Chain":
        return cls(len(c), {c: coeff})

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def _check(self, other: "Chain"):
        if self.dim != other.dim:
            raise ChainError("ambient dimensions differ: %d vs %d" % (self.dim, other.dim))

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        t = dict(self.terms)
        for c, v in other.terms.items():
            t[c] = t.get(c, 0) + v
        return Chain(self.dim, t)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain(self.dim, {c: -v for c, v in self.terms.items()})

    def __mul__(self, k) -> "Chain":
        k = as_rational(k)
        return Chain(self.dim, {c: k * v for c, v in self.terms.items()})

    __rmul__ = __mul__

    def degrees(self) -> set:
        return {cell_degree(c) for c in self.terms}

    def degree(self) -> int:
        """Common degree of a homogeneous non-zero chain."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ChainError("chain is not homogeneous (degrees %s)" % sorted(ds))
        return ds.pop()

    def __repr__(self):
        return "Chain(%d, %s)" % (self.dim, to_text(self) or "0")


def boundary(x: Chain) -> Chain:
    out: Dict[Cell, Fraction] = {}
    for c, v in x.terms.items():
        for d, s in cell_boundary(c):
            out[d] = out.get(d, 0) + s * v
    return Chain(x.dim, out)


def tensor(x: Chain, y: Chain) -> Chain:
    out = {}
    for a, u in x.terms.items():
        for b, v in y.terms.items():
            out[a + b] = u * v
    return Chain(x.dim + y.dim, out)


def translate(x: Chain, t: int) -> Chain:
    return Chain(x.dim, {shift_cell(c, 2 * t): v for c, v in x.terms.items()})


def h0_class(x: Chain) -> Fraction:
    """Class of a degree-0 chain in H_0(R^n) = Q, with [c_0] = 1."""
    if any(cell_degree(c) for c in x.terms):
        raise ChainError("h0_class expects a chain of degree 0")
    return sum(x.terms.values(), Fraction(0))


class CompletedChain:
    """A 1-periodic infinite chain plus a finite correction.

    ``pattern`` maps anchored cells (minimal coordinate in [0, 1)) to
    coefficients; the element represented is the sum of all simultaneous
    integer translates of the pattern, plus ``correction``.
    """

    __slots__ = ("dim", "pattern", "correction")

    def __init__(self, dim: int, pattern: Mapping[Cell, Fraction] = (), correction: Chain = None):
        pat: Dict[Cell, Fraction] = {}
        for c, v in dict(pattern).items():
            if len(c) != dim:
                raise ChainError("cell %r does not live in R^%d" % (c, dim))
            a, _ = anchored(tuple(c))
            pat[a] = pat.get(a, 0) + as_rational(v)
        self.dim = dim
        self.pattern = {c: v for c, v in pat.items() if v}
        self.correction = correction if correction is not None else Chain(dim)
        if self.correction.dim != dim:
            raise ChainError("correction lives in the wrong dimension")

    @classmethod
    def finite(cls, x: Chain) -> "CompletedChain":
        return cls(x.dim, {}, x)

    def __eq__(self, other):
        if not isinstance(other, CompletedChain):
            return NotImplemented
        return (self.dim == other.dim and self.pattern == other.pattern
                and self.correction == other.correction)

    def __add__(self, other: "CompletedChain") -> "CompletedChain":
        if self.dim != other.dim:
            raise ChainError("ambient dimensions differ")
        pat = dict(self.pattern)
        for c, v in other.pattern.items():
            pat[c] = pat.get(c, 0) + v
        return CompletedChain(self.dim, pat, self.correction + other.correction)

    def __neg__(self):
        return CompletedChain(self.dim, {c: -v for c, v in self.pattern.items()}, -self.correction)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_rational(k)
        return CompletedChain(self.dim, {c: k * v for c, v in self.pattern.items()}, self.correction * k)

    __rmul__ = __mul__

    def __repr__(self):
        return "CompletedChain(%d, pattern=%s, correction=%s)" % (
            self.dim, to_text(Chain(self.dim, self.pattern)) or "0", to_text(self.correction) or "0")


def omega() -> CompletedChain:
    """The fundamental cochain: the sum of every 1-cell of R."""
    return CompletedChain(1, {(1,): 1})


def completed_boundary(x: CompletedChain) -> CompletedChain:
    return CompletedChain(x.dim, boundary(Chain(x.dim, x.pattern)).terms, boundary(x.correction))


def periodic_class_deg1(x: CompletedChain) -> Fraction:
    """Class of a degree-1 completed element on R, normalised by [omega] = 1.

    Degree 1 is the top degree on R, so in the completed (cochain) reading
    every such element is closed; a finite part is the boundary of a
    one-sided infinite 0-chain and carries no class.  What remains is the
    coefficient of c_{1/2} in the periodic pattern.
    """
    if x.dim != 1:
        raise ChainError("periodic_class_deg1 is defined on R only")
    if any(cell_degree(c) != 1 for c in x.pattern) or any(cell_degree(c) != 1 for c in x.correction.terms):
        raise ChainError("expected a homogeneous degree-1 completed chain")
    return x.pattern.get((1,), Fraction(0))


_TERM = re.compile(r"^\s*([-+]?\s*\d+(?:/\d+)?)\s*\*\s*\(([^)]*)\)\s*$")


def to_text(x: Chain) -> str:
    """One ``coeff * (x1,...,xn)`` line per term, in sorted cell order."""
    return "\n".join("%s * %s" % (format_rational(v), format_cell(c)) for c, v in sorted(x.terms.items()))


def from_text(text: str, dim: int = None) -> Chain:
    terms: Dict[Cell, Fraction] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        m = _TERM.match(line)
        if not m:
            raise ChainError("cannot parse chain line %r" % line)
        coeff = Fraction(m.group(1).replace(" ", ""))
        c = tuple(parse_half(p) for p in m.group(2).split(","))
        terms[c] = terms.get(c, 0) + coeff
    if dim is None:
        if not terms:
            raise ChainError("empty chain text needs an explicit dimension")
        dim = len(next(iter(terms)))
    return Chain(dim, terms)
