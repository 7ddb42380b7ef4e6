"""Regenerate ``src/qseq/data/stripped_fixture.txt``.

The sandbox that produced the fixture had no route to oeis.org, so the term
lists are expanded with sympy from each entry's closed-form generating
function (or defining formula) rather than copied from the stripped dump.
None of the qseq generators are used here.

    python scripts/build_oeis_fixture.py > src/qseq/data/stripped_fixture.txt
"""

from math import comb, factorial

import sympy as sp

TERMS = 24
x = sp.symbols("x")


def expand(expr, terms=TERMS):
    poly = sp.series(expr, x, 0, terms).removeO()
    return [int(poly.coeff(x, n)) for n in range(terms)]


def busy_gf(s):
    psi = sp.sqrt(1 - 2 * (1 + 2 * s) * x + x**2)
    return (1 + 2 * s - x - psi) / (2 * s)


def emptiness_gf(s):
    psi = sp.sqrt(1 - 2 * (1 + 2 * s) * x + x**2)
    return 2 / (1 + x + psi)


ENTRIES = {
    "A000045": [int(sp.fibonacci(n)) for n in range(TERMS)],
    "A000079": [2**n for n in range(TERMS)],
    "A000108": expand((1 - sp.sqrt(1 - 4 * x)) / (2 * x)),
    "A000142": [factorial(n) for n in range(TERMS)],
    "A000984": [comb(2 * n, n) for n in range(TERMS)],
    "A001003": expand((1 + x - sp.sqrt(1 - 6 * x + x**2)) / (4 * x)),
    "A006318": expand((1 - x - sp.sqrt(1 - 6 * x + x**2)) / (2 * x)),
    "A103210": expand(busy_gf(2)),
    "A103211": expand(busy_gf(3)),
    "A107841": expand(emptiness_gf(2)),
    "A131763": expand(emptiness_gf(3)),
    "A155069": expand((3 - x - sp.sqrt(1 - 6 * x + x**2)) / 2),
}

def main():
    print("# OEIS Sequence Data (stripped format), hermetic test subset")
    print("# Terms expanded from closed-form generating functions; see scripts/build_oeis_fixture.py")
    for anumber in sorted(ENTRIES):
        print(anumber + " ," + ",".join(str(t) for t in ENTRIES[anumber]) + ",")


if __name__ == "__main__":
    main()
