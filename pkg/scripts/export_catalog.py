#!/usr/bin/env python3
"""Write the generator catalog (arities, genus, weight, differential terms) as JSON."""

import sys

from qlocfrob.frob import catalog_json

if __name__ == "__main__":
    text = catalog_json()
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
