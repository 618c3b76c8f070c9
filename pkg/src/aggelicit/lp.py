"""Exact two-phase simplex over the rationals.

Solves ``maximize c.x  s.t.  A x <= b, x >= 0`` with Bland's rule, so it
always terminates.  Arithmetic is done with ``gmpy2.mpq`` internally and the
results are handed back as :class:`fractions.Fraction`.

Every outcome carries a certificate that can be checked independently:

* optimal: primal ``x`` and dual ``y >= 0`` with ``A^T y >= c`` and
  ``b.y == c.x``
* unbounded: a ray ``r >= 0`` with ``A r <= 0`` and ``c.r > 0``
* infeasible: Farkas multipliers ``y >= 0`` with ``A^T y >= 0`` and
  ``b.y < 0``
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = mpq(0)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _mpq(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    if isinstance(v, float):
        raise TypeError("floats are not accepted in exact LP data")
    return mpq(v)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    duals: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows: list[list], basis: list[int], ncols: int):
        self.T = rows
        self.basis = basis
        self.ncols = ncols

    def objective_row(self, cost: list) -> list:
        obj = [-cj for cj in cost] + [_ZERO]
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.T[i]
                obj = [o + cb * r for o, r in zip(obj, row)]
        return obj

    def pivot(self, obj: list, r: int, j: int) -> None:
        T = self.T
        prow = T[r]
        piv = prow[j]
        if piv != 1:
            prow = [v / piv for v in prow]
            T[r] = prow
        for i, row in enumerate(T):
            if i != r:
                f = row[j]
                if f:
                    T[i] = [a - f * p for a, p in zip(row, prow)]
        f = obj[j]
        if f:
            obj[:] = [a - f * p for a, p in zip(obj, prow)]
        self.basis[r] = j

    def run(self, obj: list, allowed: int) -> int | None:
        """Pivot to optimality.  Returns the entering column of an unbounded
        direction, or None at the optimum.  Only columns < allowed may enter."""
        T = self.T
        while True:
            j = -1
            for col in range(allowed):
                if obj[col] < 0:
                    j = col
                    break
            if j < 0:
                return None
            best = -1
            best_ratio = None
            for i, row in enumerate(T):
                a = row[j]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best < 0
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best])
                    ):
                        best, best_ratio = i, ratio
            if best < 0:
                return j
            self.pivot(obj, best, j)


def maximize(
    c: Sequence, A: Sequence[Sequence], b: Sequence
) -> LPResult:
    """Maximize ``c.x`` subject to ``A x <= b`` and ``x >= 0``."""
    n = len(c)
    m = len(A)
    if len(b) != m:
        raise ValueError("A and b disagree on the number of rows")
    cq = [_mpq(v) for v in c]
    Aq = []
    for row in A:
        if len(row) != n:
            raise ValueError("row length does not match objective length")
        Aq.append([_mpq(v) for v in row])
    bq = [_mpq(v) for v in b]

    flipped = [bi < 0 for bi in bq]
    n_art = sum(flipped)
    ncols = n + m + n_art
    rows = []
    basis = []
    art = n + m
    for i in range(m):
        row = [_ZERO] * (ncols + 1)
        sign = -1 if flipped[i] else 1
        for j in range(n):
            if Aq[i][j]:
                row[j] = sign * Aq[i][j]
        row[n + i] = mpq(sign)
        row[-1] = sign * bq[i]
        if flipped[i]:
            row[art] = mpq(1)
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)
        rows.append(row)
    tab = _Tableau(rows, basis, ncols)

    if n_art:
        cost1 = [_ZERO] * (n + m) + [mpq(-1)] * n_art
        obj = tab.objective_row(cost1)
        tab.run(obj, ncols)
        if obj[-1] < 0:
            farkas = tuple(_frac(v) for v in obj[n : n + m])
            return LPResult(INFEASIBLE, farkas=farkas)
        # drive artificial variables out of the basis where possible
        for i in range(m):
            if tab.basis[i] >= n + m:
                row = tab.T[i]
                for j in range(n + m):
                    if row[j] != 0:
                        tab.pivot(obj, i, j)
                        break

    cost = cq + [_ZERO] * (m + n_art)
    obj = tab.objective_row(cost)
    enter = tab.run(obj, n + m)
    if enter is not None:
        ray = [_ZERO] * ncols
        ray[enter] = mpq(1)
        for i, bi in enumerate(tab.basis):
            ray[bi] = -tab.T[i][enter]
        return LPResult(UNBOUNDED, ray=tuple(_frac(v) for v in ray[:n]))

    x = [_ZERO] * ncols
    for i, bi in enumerate(tab.basis):
        x[bi] = tab.T[i][-1]
    return LPResult(
        OPTIMAL,
        x=tuple(_frac(v) for v in x[:n]),
        value=_frac(obj[-1]),
        duals=tuple(_frac(v) for v in obj[n : n + m]),
    )


def check_result(c, A, b, res: LPResult) -> bool:
    """Independently verify the certificate attached to an LP result."""
    n, m = len(c), len(A)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    if res.status == OPTIMAL:
        x, y = res.x, res.duals
        if any(v < 0 for v in x) or any(v < 0 for v in y):
            return False
        for i in range(m):
            if sum(A[i][j] * x[j] for j in range(n)) > b[i]:
                return False
        for j in range(n):
            if sum(A[i][j] * y[i] for i in range(m)) < c[j]:
                return False
        cx = sum(cj * xj for cj, xj in zip(c, x))
        by = sum(bi * yi for bi, yi in zip(b, y))
        return cx == by == res.value
    if res.status == UNBOUNDED:
        r = res.ray
        if any(v < 0 for v in r):
            return False
        if any(sum(A[i][j] * r[j] for j in range(n)) > 0 for i in range(m)):
            return False
        return sum(cj * rj for cj, rj in zip(c, r)) > 0
    if res.status == INFEASIBLE:
        y = res.farkas
        if any(v < 0 for v in y):
            return False
        if any(sum(A[i][j] * y[i] for i in range(m)) < 0 for j in range(n)):
            return False
        return sum(bi * yi for bi, yi in zip(b, y)) < 0
    return False
