"""Exact linear programming over the rationals.

A dense two-phase simplex with Bland's anti-cycling rule.  Problems are tiny
(at most ~14 variables and ~50 constraints), so a tableau with Fraction
arithmetic is both simple and fast enough; exactness is the point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

Rat = Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass
class LPResult:
    status: str
    x: Optional[List[Rat]]
    value: Optional[Rat]


def lp_maximize(
    c: Sequence[Rat], A: Sequence[Sequence[Rat]], b: Sequence[Rat]
) -> LPResult:
    """Maximize c.x subject to A x <= b with x unrestricted in sign.

    Free variables are split as x = u - v; slack variables close the rows;
    rows with negative right-hand side get a phase-1 artificial.
    """
    m = len(A)
    n = len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    if m == 0:
        if all(cj == 0 for cj in c):
            return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0))
        return LPResult(UNBOUNDED, None, None)

    nstruct = 2 * n
    ncols = nstruct + m  # artificials appended later
    T: List[List[Rat]] = []
    basis: List[int] = []
    art_rows: List[int] = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [-Fraction(x) for x in A[i]]
        row += [Fraction(1 if j == i else 0) for j in range(m)]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
            art_rows.append(i)
            basis.append(-1)  # patched once artificial columns exist
        else:
            basis.append(nstruct + i)
        row.append(rhs)
        T.append(row)

    nart = len(art_rows)
    if nart:
        for idx, i in enumerate(art_rows):
            col = ncols + idx
            basis[i] = col
        for i in range(m):
            art_part = [
                Fraction(1 if (i == art_rows[idx]) else 0) for idx in range(nart)
            ]
            T[i] = T[i][:-1] + art_part + [T[i][-1]]
        total = ncols + nart
        # phase 1: maximize -(sum of artificials)
        obj = [Fraction(0)] * (total + 1)
        for idx in range(nart):
            obj[ncols + idx] = Fraction(-1)
        _canonicalize(T, obj, basis)
        status = _iterate(T, obj, basis)
        if status != OPTIMAL or obj[-1] != 0:
            return LPResult(INFEASIBLE, None, None)
        _evict_artificials(T, basis, ncols)
        drop = [i for i, bv in enumerate(basis) if bv >= ncols]
        for i in reversed(drop):  # redundant rows: artificial basic, no pivot left
            del T[i]
            del basis[i]
        T = [row[:ncols] + [row[-1]] for row in T]

    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = Fraction(c[j])
        obj[n + j] = -Fraction(c[j])
    _canonicalize(T, obj, basis)
    status = _iterate(T, obj, basis)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    values = [Fraction(0)] * ncols
    for i, bv in enumerate(basis):
        values[bv] = T[i][-1]
    x = [values[j] - values[n + j] for j in range(n)]
    return LPResult(OPTIMAL, x, -obj[-1])


def _canonicalize(T, obj, basis) -> None:
    """Zero the objective row on all basic columns."""
    for i, bv in enumerate(basis):
        f = obj[bv]
        if f != 0:
            row = T[i]
            pv = row[bv]
            if pv != 1:  # normalize the basic row first
                T[i] = row = [x / pv for x in row]
            for j in range(len(obj)):
                obj[j] -= f * row[j]


def _iterate(T, obj, basis) -> str:
    ncols = len(obj) - 1
    while True:
        col = next((j for j in range(ncols) if obj[j] > 0), None)
        if col is None:
            return OPTIMAL
        pivot_row = None
        best_ratio = None
        for i, row in enumerate(T):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[pivot_row])
                ):
                    best_ratio = ratio
                    pivot_row = i
        if pivot_row is None:
            return UNBOUNDED
        _pivot(T, obj, basis, pivot_row, col)


def _pivot(T, obj, basis, row, col) -> None:
    pv = T[row][col]
    T[row] = [x / pv for x in T[row]]
    prow = T[row]
    for i, other in enumerate(T):
        if i != row and other[col] != 0:
            f = other[col]
            T[i] = [x - f * y for x, y in zip(other, prow)]
    if obj[col] != 0:
        f = obj[col]
        for j in range(len(obj)):
            obj[j] -= f * prow[j]
    basis[row] = col


def _evict_artificials(T, basis, ncols) -> None:
    """Pivot artificial variables (columns >= ncols) out of the basis when possible."""
    for i in range(len(T)):
        if basis[i] >= ncols:
            col = next((j for j in range(ncols) if T[i][j] != 0), None)
            if col is not None:
                dummy = [Fraction(0)] * len(T[i])
                _pivot(T, dummy, basis, i, col)
