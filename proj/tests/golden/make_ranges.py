#!/usr/bin/env python3
"""Independent oracle for the stability-range grid, written directly from the
theorem statements with exact fractions. Regenerate with:

    python3 tests/golden/make_ranges.py > tests/golden/ranges.tsv
"""
from fractions import Fraction as F
from math import floor


def constant(case, n, v):
    # Cases 1-4 use the ring-side invariant, 5-8 the same shapes on the quotient side.
    shape = (case - 1) % 4
    if shape == 0:
        return F(n - v - 1, 3), F(n - v - 2, 3)
    if shape == 1:
        return F(n - v, 2), F(n - v - 1, 2)
    if shape == 2:
        return F(n - 3 - 2 * v, 2 * v + 1), F(n - 4 - 2 * v, 2 * v + 1)
    return F(n - 2 - v, v + 1), F(n - 3 - v, v + 1)


def abelian(case, n, v):
    shape = (case - 1) % 3
    if shape == 0:
        return F(n - v - 2, 3), F(n - v - 4, 3)
    if shape == 1:
        return F(n - 2 * v - 2 * v - 2, 2 * v + 1), F(n - 2 * v - 2 * v - 4, 2 * v + 1)
    d = max(3, v + 1)
    return F(n - v - d, d), F(n - v - 2 - d, d)


def polynomial(case, n, v, r):
    shape = (case - 1) % 4
    base = [F(n - v - 1, 3), F(n - v, 2), F(n - 3 - 2 * v, 2 * v + 1), F(n - 2 - v, v + 1)][shape]
    return base - r, base - r - 1


def corollary1(item, n, v, d):
    if item == "a":
        return F(n - v - 3 * d - 4, 3)
    if item == "b":
        return F(n - v - 2 * d - 2, 2)
    if item == "c":
        return F(n - 3 - 2 * v - (d + 1) * (2 * v + 1), 2 * v + 1)
    return F(n - 2 - v - (d + 1) * (v + 1), v + 1)


def corollary2(item, n, v):
    if item == "a":
        return F(n - v - 10, 3)
    if item == "b":
        return F(n - v - 6, 2)
    if item == "c":
        return F(n - 3 - 2 * v, 2 * v + 1) - 3
    return F(n - 2 - v, v + 1) - 3


ROMAN = ["", "i", "ii", "iii", "iv", "v", "vi", "vii", "viii"]


def row(theorem, label, n, v, r, surj, iso):
    cells = [theorem, label, str(n), str(v), str(r), str(surj), str(floor(surj))]
    cells += ["-", "-"] if iso is None else [str(iso), str(floor(iso))]
    return "\t".join(cells)


def main():
    print("theorem\tcase\tn\tinvariant\tdegree\tsurj_bound\tsurj_up_to\tiso_bound\tiso_up_to")
    for c in range(1, 9):
        for j in range(8):
            n, v = 5 + 4 * j + c, 1 + (j + c) % 4
            print(row("constant", ROMAN[c], n, v, 0, *constant(c, n, v)))
    for c in range(1, 7):
        for j in range(6):
            n, v = 7 + 5 * j + c, 1 + (j + 2 * c) % 4
            print(row("abelian", ROMAN[c], n, v, 0, *abelian(c, n, v)))
    for c in range(1, 9):
        for j in range(8):
            n, v, r = 10 + 3 * j + 2 * c, 1 + (c + j) % 3, -1 + j % 4
            print(row("polynomial", ROMAN[c], n, v, r, *polynomial(c, n, v, r)))
    for k, item in enumerate("abcd"):
        for j in range(4):
            n, v, d = 20 + 7 * j + k, 1 + (j + k) % 3, 1 + j % 3
            print(row("corollary1", item, n, v, d, corollary1(item, n, v, d), None))
    for k, item in enumerate("abcd"):
        for j in range(3):
            n, v = 25 + 9 * j + k, 1 + (j + k) % 3
            print(row("corollary2", item, n, v, 2, corollary2(item, n, v), None))
    for j in range(8):
        n = 8 + 5 * j
        print(row("corollary3", "-", n, 0, 1, F(n - 8, 2), None))


if __name__ == "__main__":
    main()
