"""Exact linear algebra over the rationals.

Everything here works on sparse data: a matrix is a mapping
``(row, col) -> Fraction`` and elimination proceeds row by row, keeping an
echelon basis keyed by pivot column.  No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction
SparseRow = Dict[int, Fraction]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted: %r" % (x,))
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (i, j, self.rows, self.cols))
            v = as_rational(v)
            if v:
                clean[i, j] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "RationalMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    entries[i, j] = as_rational(v)
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, Fraction]]) -> "RationalMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[i, j] = v
        return cls(rows, len(columns), entries)

    def row_dicts(self) -> List[SparseRow]:
        out: List[SparseRow] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def matvec(self, x: Sequence) -> List[Fraction]:
        if len(x) != self.cols:
            raise ValueError("vector length %d does not match %d columns" % (len(x), self.cols))
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out


class Echelon:
    """Incremental row echelon form.

    Rows are reduced against the stored pivots, always eliminating the
    smallest column first, so every stored row has its pivot as its smallest
    column.  Pivot rows are normalised to have pivot coefficient 1.
    """

    def __init__(self):
        self.pivots: Dict[int, SparseRow] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Fraction]) -> SparseRow:
        r = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while r:
            hit = [c for c in r if c in pivots]
            if not hit:
                break
            c = min(hit)
            factor = r[c]
            for k, v in pivots[c].items():
                nv = r.get(k, 0) - factor * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    def add(self, row: Mapping[int, Fraction]) -> Optional[int]:
        """Insert a row; returns the new pivot column, or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        c = min(r)
        inv = 1 / r[c]
        if inv != 1:
            r = {k: v * inv for k, v in r.items()}
        self.pivots[c] = r
        return c

    def back_substitute(self, free_values: Mapping[int, Fraction], rhs_col: Optional[int] = None) -> Dict[int, Fraction]:
        """Solve the echelon system with given values on free columns.

        ``rhs_col`` names a column holding the right-hand side (it is moved to
        the other side of the equations); it must not be a pivot.
        """
        x: Dict[int, Fraction] = {k: as_rational(v) for k, v in free_values.items() if v}
        for c in sorted(self.pivots, reverse=True):
            row = self.pivots[c]
            acc = Fraction(0)
            for k, v in row.items():
                if k == c:
                    continue
                if k == rhs_col:
                    acc += v
                else:
                    xv = x.get(k)
                    if xv:
                        acc -= v * xv
            if acc:
                x[c] = acc
            else:
                x.pop(c, None)
        return x


def rank(A: RationalMatrix) -> int:
    ech = Echelon()
    for row in A.row_dicts():
        ech.add(row)
    return len(ech)


def rank_of_rows(rows: Iterable[Mapping[int, Fraction]]) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return len(ech)


def solve(A: RationalMatrix, b: Sequence) -> Optional[List[Fraction]]:
    """Return some x with A x = b, or None when the system is inconsistent."""
    if len(b) != A.rows:
        raise ValueError("right-hand side has length %d, matrix has %d rows" % (len(b), A.rows))
    sol = solve_sparse(A.row_dicts(), [as_rational(v) for v in b], A.cols)
    if sol is None:
        return None
    return [sol.get(j, Fraction(0)) for j in range(A.cols)]


def solve_sparse(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction], ncols: int) -> Optional[Dict[int, Fraction]]:
    """Sparse variant of :func:`solve`; returns {col: value} with zeros omitted."""
    B = ncols  # augmented column sorts after every unknown
    ech = Echelon()
    for row, bv in zip(rows, rhs):
        aug = dict(row)
        if bv:
            aug[B] = as_rational(bv)
        reduced = ech.reduce(aug)
        if not reduced:
            continue
        if min(reduced) == B:
            return None
        ech.add(reduced)
    return ech.back_substitute({}, rhs_col=B)


def kernel_basis(A: RationalMatrix) -> List[List[Fraction]]:
    """A basis of the null space of A (empty when A is injective)."""
    ech = Echelon()
    for row in A.row_dicts():
        ech.add(row)
    free = [j for j in range(A.cols) if j not in ech.pivots]
    basis = []
    for f in free:
        x = ech.back_substitute({f: Fraction(1)})
        basis.append([x.get(j, Fraction(0)) for j in range(A.cols)])
    return basis


def nullity_of_columns(columns: Sequence[Mapping], restrict=None) -> int:
    """dim ker of the map whose j-th column is ``columns[j]``.

    Column entries are keyed by arbitrary hashable row labels.  With
    ``restrict`` (a predicate on row labels) only those rows are kept, which
    computes the kernel of the composite with a coordinate projection.
    """
    label_index: Dict = {}
    rows: Dict[int, SparseRow] = {}
    for j, col in enumerate(columns):
        for label, v in col.items():
            if restrict is not None and not restrict(label):
                continue
            i = label_index.setdefault(label, len(label_index))
            rows.setdefault(i, {})[j] = v
    r = rank_of_rows(rows.values())
    return len(columns) - r
