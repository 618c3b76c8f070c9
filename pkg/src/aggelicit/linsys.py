"""Homogeneous linear systems with mixed weak and strict rows.

A system is a list of rows ``a.d REL 0`` with ``REL`` one of ``<=, >=, ==``
(weak) or ``<, >`` (strict).  This module decides feasibility exactly and
returns either a witness point or a Motzkin transposition certificate,
optimizes linear objectives over the weak part, and eliminates variables by
Fourier-Motzkin projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .rational import Q, as_vector

LE, GE, EQ, LT, GT = "<=", ">=", "==", "<", ">"
WEAK_RELS = (LE, GE, EQ)
STRICT_RELS = (LT, GT)


def _sign(rel: str) -> int:
    # orientation that makes the row read "expr <= 0" or "expr < 0"
    return -1 if rel in (GE, GT) else 1


def _dot(a: Sequence[Fraction], d: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, d)), Fraction(0))


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    rel: str

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_vector(self.coeffs))
        if self.rel not in WEAK_RELS + STRICT_RELS:
            raise ValueError(f"unknown relation {self.rel!r}")

    @property
    def strict(self) -> bool:
        return self.rel in STRICT_RELS

    def oriented(self) -> tuple[Fraction, ...]:
        s = _sign(self.rel)
        return self.coeffs if s == 1 else tuple(-c for c in self.coeffs)

    def holds(self, d: Sequence[Fraction]) -> bool:
        v = _dot(self.coeffs, d)
        return {
            LE: v <= 0,
            GE: v >= 0,
            EQ: v == 0,
            LT: v < 0,
            GT: v > 0,
        }[self.rel]

    def negated(self) -> "Row":
        """The complement of an inequality row (strictness flips)."""
        flip = {LE: GT, GE: LT, LT: GE, GT: LE}
        if self.rel == EQ:
            raise ValueError("an equality row has no single-row complement")
        return Row(self.coeffs, flip[self.rel])

    def __str__(self) -> str:
        return f"{[str(c) for c in self.coeffs]} {self.rel} 0"


@dataclass(frozen=True)
class LinearSystem:
    dimension: int
    weak_rows: tuple[Row, ...] = ()
    strict_rows: tuple[Row, ...] = ()

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("dimension must be nonnegative")
        object.__setattr__(self, "weak_rows", tuple(self.weak_rows))
        object.__setattr__(self, "strict_rows", tuple(self.strict_rows))
        for r in self.weak_rows:
            if r.strict:
                raise ValueError("strict row listed among weak rows")
        for r in self.strict_rows:
            if not r.strict:
                raise ValueError("weak row listed among strict rows")
        for r in self.weak_rows + self.strict_rows:
            if len(r.coeffs) != self.dimension:
                raise ValueError(
                    f"row of length {len(r.coeffs)} in a system of dimension {self.dimension}"
                )

    @classmethod
    def from_rows(cls, dimension: int, rows: Iterable) -> "LinearSystem":
        """Build from ``Row`` objects or ``(coeffs, rel)`` pairs."""
        weak, strict = [], []
        for r in rows:
            if not isinstance(r, Row):
                r = Row(*r)
            (strict if r.strict else weak).append(r)
        return cls(dimension, tuple(weak), tuple(strict))

    @property
    def rows(self) -> tuple[Row, ...]:
        return self.weak_rows + self.strict_rows

    def contains(self, d: Sequence) -> bool:
        d = as_vector(d)
        if len(d) != self.dimension:
            raise ValueError("point dimension mismatch")
        return all(r.holds(d) for r in self.rows)

    def conjoin(self, *others: "LinearSystem") -> "LinearSystem":
        weak, strict = list(self.weak_rows), list(self.strict_rows)
        for o in others:
            if o.dimension != self.dimension:
                raise ValueError("cannot conjoin systems of different dimension")
            weak.extend(o.weak_rows)
            strict.extend(o.strict_rows)
        return LinearSystem(self.dimension, tuple(weak), tuple(strict))

    def add_rows(self, rows: Iterable) -> "LinearSystem":
        return self.conjoin(LinearSystem.from_rows(self.dimension, rows))

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rows) or "(no rows)"


@dataclass(frozen=True)
class Witness:
    point: tuple[Fraction, ...]
    feasible = True


@dataclass(frozen=True)
class MotzkinCertificate:
    weak_multipliers: tuple[Fraction, ...]
    strict_multipliers: tuple[Fraction, ...]
    feasible = False


FeasibilityResult = Witness | MotzkinCertificate


def verify_certificate(system: LinearSystem, cert: MotzkinCertificate) -> bool:
    if len(cert.weak_multipliers) != len(system.weak_rows):
        return False
    if len(cert.strict_multipliers) != len(system.strict_rows):
        return False
    for row, m in zip(system.weak_rows, cert.weak_multipliers):
        # equality rows may take either sign
        if row.rel != EQ and m < 0:
            return False
    if any(m < 0 for m in cert.strict_multipliers):
        return False
    if not any(m > 0 for m in cert.strict_multipliers):
        return False
    total = [Fraction(0)] * system.dimension
    pairs = zip(system.rows, cert.weak_multipliers + cert.strict_multipliers)
    for row, m in pairs:
        if m:
            for j, a in enumerate(row.oriented()):
                total[j] += m * a
    return all(t == 0 for t in total)


def _split_rows(system: LinearSystem):
    """Oriented weak rows as LP rows over (d+, d-) plus the map back to
    per-row multipliers."""
    n = system.dimension
    lp_rows = []
    owner = []  # (weak row index, sign) for each LP row
    for i, r in enumerate(system.weak_rows):
        a = r.oriented()
        lp_rows.append(list(a) + [-x for x in a])
        owner.append((i, 1))
        if r.rel == EQ:
            lp_rows.append([-x for x in a] + list(a))
            owner.append((i, -1))
    return lp_rows, owner


def decide_feasible(system: LinearSystem) -> FeasibilityResult:
    """Exact feasibility of a mixed strict/weak homogeneous system."""
    n = system.dimension
    if not system.strict_rows:
        return Witness(tuple(Fraction(0) for _ in range(n)))
    weak_lp, owner = _split_rows(system)
    # maximize t with strict rows reading a.d + t <= 0 and the box |d_i| <= 1
    A = [row + [0] for row in weak_lp]
    for r in system.strict_rows:
        a = r.oriented()
        A.append(list(a) + [-x for x in a] + [1])
    for j in range(2 * n):
        unit = [0] * (2 * n + 1)
        unit[j] = 1
        A.append(unit)
    n_cone = len(weak_lp) + len(system.strict_rows)
    b = [0] * n_cone + [1] * (2 * n)
    c = [0] * (2 * n) + [1]
    res = lp.maximize(c, A, b)
    if res.status == lp.UNBOUNDED:
        # t is unbounded only when the box is empty, which cannot happen
        raise AssertionError("box-normalized feasibility LP reported unbounded")
    if res.status != lp.OPTIMAL:
        raise AssertionError("feasibility LP is always feasible at d = 0")
    if res.value > 0:
        point = tuple(res.x[j] - res.x[n + j] for j in range(n))
        if not system.contains(point):
            raise AssertionError("witness failed exact verification")
        return Witness(point)
    y = res.duals
    weak = [Fraction(0)] * len(system.weak_rows)
    for (i, s), yi in zip(owner, y[: len(weak_lp)]):
        weak[i] += s * yi
    strict = list(y[len(weak_lp) : n_cone])
    cert = MotzkinCertificate(tuple(weak), tuple(strict))
    if not verify_certificate(system, cert):
        raise AssertionError("Motzkin certificate failed verification")
    return cert


# -- optimization -----------------------------------------------------------


@dataclass(frozen=True)
class Optimum:
    value: Fraction
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    ray: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple[Fraction, ...]


def optimize(
    objective: Sequence,
    system: LinearSystem,
    normalization: Sequence | None = None,
) -> Optimum | Unbounded | Infeasible:
    """Maximize ``objective.d`` over the weak rows of ``system`` plus an
    optional affine row ``(coeffs, rel, rhs)``.

    The returned point is a vertex of the split (d+, d-) polyhedron; for
    systems that include ``d >= 0`` rows it is a vertex in d as well.
    """
    if system.strict_rows:
        raise ValueError("optimize accepts weak rows only")
    n = system.dimension
    obj = as_vector(objective)
    if len(obj) != n:
        raise ValueError("objective dimension mismatch")
    A, _ = _split_rows(system)
    b: list = [0] * len(A)
    if normalization is not None:
        coeffs, rel, rhs = normalization
        coeffs, rhs = as_vector(coeffs), Q(rhs)
        if len(coeffs) != n:
            raise ValueError("normalization row dimension mismatch")
        split = list(coeffs) + [-x for x in coeffs]
        if rel in (LE, EQ):
            A.append(split)
            b.append(rhs)
        if rel in (GE, EQ):
            A.append([-x for x in split])
            b.append(-rhs)
        if rel not in (LE, GE, EQ):
            raise ValueError("normalization must be a weak relation")
    c = list(obj) + [-x for x in obj]
    res = lp.maximize(c, A, b)
    if res.status == lp.INFEASIBLE:
        return Infeasible(res.farkas)
    if res.status == lp.UNBOUNDED:
        return Unbounded(tuple(res.ray[j] - res.ray[n + j] for j in range(n)))
    point = tuple(res.x[j] - res.x[n + j] for j in range(n))
    return Optimum(res.value, point)


# -- substitution helpers ---------------------------------------------------


def section(system: LinearSystem, fixed: dict[int, Sequence | Fraction]) -> LinearSystem:
    """Fix some coordinates and homogenize.

    The result lives over the free coordinates (in their original order)
    followed by one homogenizing coordinate ``s`` with ``s > 0``; it is
    feasible iff the original system has a point with the given values.
    """
    n = system.dimension
    free = [j for j in range(n) if j not in fixed]
    rows = []
    for r in system.rows:
        const = sum((r.coeffs[j] * Q(v) for j, v in fixed.items()), Fraction(0))
        rows.append(Row(tuple(r.coeffs[j] for j in free) + (const,), r.rel))
    rows.append(Row(tuple([Fraction(0)] * len(free)) + (Fraction(1),), GT))
    return LinearSystem.from_rows(len(free) + 1, rows)


# -- Fourier-Motzkin projection ---------------------------------------------

# Internally rows are (primitive integer vector, strict flag) meaning
# a.d <= 0 or a.d < 0.


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _int_primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


class _Empty(Exception):
    pass


def _add_row(store: dict, vec: tuple[int, ...], strict: bool) -> None:
    if not any(vec):
        if strict:
            raise _Empty
        return
    if strict or vec not in store:
        store[vec] = store.get(vec, False) or strict


def _to_system(n: int, store: dict) -> LinearSystem:
    rows = [
        Row(tuple(Fraction(v) for v in vec), LT if s else LE)
        for vec, s in store.items()
    ]
    return LinearSystem.from_rows(n, rows)


def _empty_system(n: int) -> LinearSystem:
    return LinearSystem(n, (), (Row(tuple([Fraction(0)] * n), LT),))


def _prune(n: int, store: dict) -> dict:
    """Drop rows implied by the others (exact LP redundancy test)."""
    items = list(store.items())
    keep = list(items)
    i = 0
    while i < len(keep):
        vec, s = keep[i]
        others = keep[:i] + keep[i + 1 :]
        rows = [Row(tuple(Fraction(v) for v in o), LT if os_ else LE) for o, os_ in others]
        # complement of the row under test
        rows.append(Row(tuple(Fraction(v) for v in vec), GE if s else GT))
        test = LinearSystem.from_rows(n, rows)
        if isinstance(decide_feasible(test), MotzkinCertificate):
            keep.pop(i)
        else:
            i += 1
    return dict(keep)


def project(
    system: LinearSystem,
    eliminate: Iterable[int],
    redundancy_threshold: int = 64,
    prune: bool = False,
) -> LinearSystem:
    """Fourier-Motzkin elimination of the given coordinates.

    The result is over the remaining coordinates in their original order.
    Every returned row reads ``a.y <= 0`` or ``a.y < 0``.  A projected system
    describing the empty set is returned as the single row ``0 < 0``.
    """
    n = system.dimension
    elim = set(eliminate)
    if not elim <= set(range(n)):
        raise ValueError("eliminated indices out of range")
    keep_idx = [j for j in range(n) if j not in elim]
    store: dict = {}
    try:
        for r in system.rows:
            vec = _primitive(r.oriented())
            _add_row(store, vec, r.strict)
            if r.rel == EQ:
                _add_row(store, tuple(-v for v in vec), False)
        remaining = set(elim)
        while remaining:
            # eliminate the variable producing the fewest new rows
            def cost(j):
                pos = sum(1 for v in store if v[j] > 0)
                neg = sum(1 for v in store if v[j] < 0)
                return (pos * neg - pos - neg, j)

            j = min(remaining, key=cost)
            remaining.discard(j)
            pos = [(v, s) for v, s in store.items() if v[j] > 0]
            neg = [(v, s) for v, s in store.items() if v[j] < 0]
            new: dict = {v: s for v, s in store.items() if v[j] == 0}
            for vp, sp in pos:
                for vn, sn in neg:
                    a, b = vp[j], -vn[j]
                    vec = _int_primitive(tuple(b * x + a * y for x, y in zip(vp, vn)))
                    _add_row(new, vec, sp or sn)
            store = new
            if len(store) > redundancy_threshold:
                store = _prune(n, store)
        if prune:
            store = _prune(n, store)
    except _Empty:
        return _empty_system(len(keep_idx))
    reduced = {tuple(v[j] for j in keep_idx): s for v, s in store.items()}
    out: dict = {}
    try:
        for v, s in reduced.items():
            _add_row(out, _int_primitive(v), s)
    except _Empty:
        return _empty_system(len(keep_idx))
    return _to_system(len(keep_idx), out)
