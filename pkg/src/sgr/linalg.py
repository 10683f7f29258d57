"""Fraction-free Gauss-Jordan elimination over the integers."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = math.lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def rref_fraction_free(rows: list[list[int]]):
    """Reduce an integer matrix to scaled reduced row echelon form.

    One-step fraction-free Gauss-Jordan: every division by the previous
    pivot is exact, and at the end all pivot entries equal the last pivot
    ``d``.  Returns ``(matrix, pivot_columns, d)`` with zero rows removed.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], [], 1
    ncols = len(m[0])
    prev = 1
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        pr = m[r]
        for i in range(len(m)):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f:
                new = []
                for a, b in zip(row, pr):
                    num = p * a - f * b
                    q, rem = divmod(num, prev)
                    assert rem == 0, "fraction-free division not exact"
                    new.append(q)
                m[i] = new
            elif p != prev:
                new = []
                for a in row:
                    q, rem = divmod(p * a, prev)
                    assert rem == 0, "fraction-free division not exact"
                    new.append(q)
                m[i] = new
        prev = p
        pivots.append(c)
        r += 1
    return m[:r], pivots, prev


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Integer basis of the right kernel, one primitive vector per free column."""
    mat = integer_rows(rows)
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    red, pivots, d = rref_fraction_free(mat)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = d
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        g = 0
        for x in v:
            g = math.gcd(g, x)
        basis.append([x // g for x in v] if g > 1 else v)
    return basis


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref_fraction_free(integer_rows(rows))[1])
