"""Exact phase-one simplex over :class:`fractions.Fraction`.

Decides whether ``A x = b, x >= 0`` has a solution.  On infeasibility a
Farkas vector ``y`` is returned with ``A^T y <= 0`` and ``b . y > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class PhaseOneResult:
    feasible: bool
    x: list[Fraction] | None
    farkas: list[Fraction] | None
    pivots: int


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError(f"float {v!r} in exact mode; pass Fraction or int")
    return Fraction(v)


def phase_one(A: Sequence[Sequence], b: Sequence) -> PhaseOneResult:
    """Minimize the sum of artificial variables with Bland's rule.

    Parameters
    ----------
    A : rows of rationals, shape (m, n)
    b : rationals, length m
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m or any(len(row) != n for row in A):
        raise ValueError("inconsistent constraint shapes")

    sign = []
    rows = []
    for row, bi in zip(A, b):
        row = [_frac(v) for v in row]
        bi = _frac(bi)
        s = -1 if bi < 0 else 1
        sign.append(s)
        # columns: n structural, m artificial, then rhs
        rows.append([s * v for v in row] + [Fraction(int(i == len(rows))) for i in range(m)] + [s * bi])

    basis = [n + i for i in range(m)]
    # reduced costs for min sum(artificial): structural cols get -sum(column)
    ncol = n + m
    cost = [Fraction(0)] * ncol + [Fraction(0)]
    for j in range(ncol + 1):
        if n <= j < ncol:
            continue
        cost[j] = -sum(r[j] for r in rows)
    # cost[-1] holds -objective

    pivots = 0
    while True:
        enter = next((j for j in range(ncol) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen: objective is bounded below by 0
            raise RuntimeError("phase one unbounded")
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [v / piv for v in rows[i]]
        for k, r in enumerate(rows):
            if k != i and r[enter] != 0:
                f = r[enter]
                rows[k] = [a - f * p for a, p in zip(r, rows[i])]
        f = cost[enter]
        cost = [a - f * p for a, p in zip(cost, rows[i])]
        basis[i] = enter
        pivots += 1

    objective = -cost[-1]
    if objective == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = rows[i][-1]
        return PhaseOneResult(True, x, None, pivots)

    # reduced cost of artificial i is 1 - y_i
    y = [sign[i] * (1 - cost[n + i]) for i in range(m)]
    return PhaseOneResult(False, None, y, pivots)


def check_farkas(A: Sequence[Sequence], b: Sequence, y: Sequence, tol=0) -> bool:
    """Verify ``A^T y <= tol`` column-wise and ``b . y > tol``."""
    m, n = len(A), len(A[0])
    if len(y) != m:
        return False
    for j in range(n):
        if sum(A[i][j] * y[i] for i in range(m)) > tol:
            return False
    return sum(bi * yi for bi, yi in zip(b, y)) > tol
