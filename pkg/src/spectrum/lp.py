"""Exact rational simplex for packing LPs ``max c'x, Ax <= b, x >= 0`` with ``b >= 0``.

The slack basis is feasible, so no phase one is needed. Pivoting follows
Bland's rule, which cannot cycle. The dual solution is read off the reduced
costs of the slack columns in the final tableau.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

MAX_PIVOTS = 100_000


@dataclass
class LPSolution:
    value: Fraction
    x: list  # primal optimum of the packing problem
    y: list  # dual optimum: min b'y, A'y >= c, y >= 0
    pivots: int


class UnboundedLP(ValueError):
    pass


def solve_packing(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPSolution:
    m = len(A)
    n = len(c)
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    if any(v < 0 for v in b):
        raise ValueError("packing form needs b >= 0")
    # tableau rows: [A | I | b]; objective row holds reduced costs -c
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        if len(row) != n:
            raise ValueError("constraint row has the wrong length")
        row += [Fraction(int(i == j)) for j in range(m)]
        row.append(b[i])
        rows.append(row)
    obj = [-v for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    width = n + m
    pivots = 0
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        best_ratio, leave = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])):
                    best_ratio, leave = ratio, i
        if leave is None:
            raise UnboundedLP("objective is unbounded")
        piv_row = rows[leave]
        p = piv_row[enter]
        if p != 1:
            piv_row = [v / p for v in piv_row]
            rows[leave] = piv_row
        nz = [j for j, v in enumerate(piv_row) if v]
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    r = rows[i]
                    for j in nz:
                        r[j] -= f * piv_row[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * piv_row[j]
        basis[leave] = enter
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise RuntimeError("pivot limit reached")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    y = obj[n:n + m]
    return LPSolution(obj[-1], x, y, pivots)
