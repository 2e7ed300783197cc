#!/usr/bin/env python3
"""Print homology dimensions of the invariant operator complexes for a range of arities and windows.

    python3 scripts/homology_table.py [--max-arity 3] [--windows 1 2 3]
"""

import argparse
from fractions import Fraction

from qlocfrob.exact import format_rational
from qlocfrob.qloc import homology_dims


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-arity", type=int, default=3)
    ap.add_argument("--windows", type=Fraction, nargs="+", default=[Fraction(1), Fraction(2), Fraction(3)])
    args = ap.parse_args()
    print("(m,n)   " + "  ".join("w=%-14s" % format_rational(w) for w in args.windows))
    for m in range(1, args.max_arity + 1):
        for n in range(1, args.max_arity + 1):
            if m + n > args.max_arity + 1:
                continue
            cells = []
            for w in args.windows:
                d = homology_dims(m, n, w)
                cells.append("%-16s" % ", ".join("%d:%d" % kv for kv in sorted(d.items())))
            print("(%d,%d)   %s" % (m, n, "  ".join(cells)))


if __name__ == "__main__":
    main()
