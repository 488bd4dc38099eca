"""Exact rational simplex method (two phases, Bland's rule).

Solves ``max c.x  s.t.  A x = b, x >= 0`` over :class:`fractions.Fraction`.
Problem sizes in this package are tiny, so a dense tableau is adequate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(T, obj, basis, r, j):
    row = T[r]
    p = row[j]
    if p != 1:
        row[:] = [a / p for a in row]
    for i, other in enumerate(T):
        if i != r and other[j] != 0:
            f = other[j]
            other[:] = [a - f * b for a, b in zip(other, row)]
    if obj[j] != 0:
        f = obj[j]
        obj[:] = [a - f * b for a, b in zip(obj, row)]
    basis[r] = j


def _run(T, obj, basis, ncols):
    """Iterate until optimal; returns False if unbounded."""
    while True:
        entering = next((j for j in range(ncols) if obj[j] > 0), None)
        if entering is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                key = (row[-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, obj, basis, best[1], entering)


def maximize(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    n = len(c)
    m = len(A_eq)
    A = [[Fraction(a) for a in row] for row in A_eq]
    b = [Fraction(x) for x in b_eq]
    for i in range(m):
        if len(A[i]) != n:
            raise ValueError("constraint row length differs from objective length")
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]

    # phase 1: artificial columns n..n+m-1, maximize -(sum of artificials)
    T = [A[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [sum((A[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    obj += [Fraction(0)] * m + [sum(b, Fraction(0))]
    _run(T, obj, basis, n)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(T):
        if basis[r] >= n:
            j = next((j for j in range(n) if T[r][j] != 0), None)
            if j is None:
                del T[r]
                del basis[r]
                continue
            _pivot(T, obj, basis, r, j)
        r += 1
    T = [row[:n] + row[-1:] for row in T]

    cf = [Fraction(x) for x in c]
    obj = cf[:] + [Fraction(0)]
    for i, bi in enumerate(basis):
        cb = cf[bi]
        if cb != 0:
            obj = [a - cb * t for a, t in zip(obj, T[i])]
    if not _run(T, obj, basis, n):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = T[i][-1]
    return LPResult(OPTIMAL, -obj[-1], tuple(x))
