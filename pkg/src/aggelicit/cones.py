"""Direction sets used by the elicitability characterizations.

* budget-reducing directions ``B_{S,V}``: keep binding conic rows, keep
  off-support coordinates nonnegative, strictly decrease the coordinate sum
* the feature-improving cone ``{d : alpha d >= 0}``
* the reachable cone of an input: ``{d : exists v >= 0, d + v in B_{S,V}}``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linsys import (
    GE,
    LE,
    LT,
    LinearSystem,
    MotzkinCertificate,
    Row,
    Witness,
    decide_feasible,
    project,
    section,
)
from .model import Instance, Matrix, SufficientStatistic
from .rational import as_matrix, as_vector


@dataclass(frozen=True)
class BudgetReducing:
    statistic: SufficientStatistic


@dataclass(frozen=True)
class FeatureCone:
    alpha: Matrix


@dataclass(frozen=True)
class ReachableCone:
    statistic: SufficientStatistic


@dataclass(frozen=True)
class DirectionSet:
    description: LinearSystem
    provenance: BudgetReducing | FeatureCone | ReachableCone
    # reachable cones keep the unprojected (d, v) system for certification
    lifted: LinearSystem | None = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return self.description.dimension

    def contains(self, d: Sequence) -> bool:
        d = as_vector(d)
        if self.lifted is None:
            return self.description.contains(d)
        fixed = {j: d[j] for j in range(len(d))}
        return isinstance(decide_feasible(section(self.lifted, fixed)), Witness)


def _unit(M: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(i == j)) for i in range(M))


def _ones(M: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) for _ in range(M))


def budget_rows(stat: SufficientStatistic, instance: Instance) -> list[Row]:
    M = instance.M
    rows = [Row(instance.C[l], LE) for l in sorted(stat.binding)]
    rows += [Row(_unit(M, j), GE) for j in range(M) if j not in stat.support]
    rows.append(Row(_ones(M), LT))
    return rows


def budget_reducing_directions(stat: SufficientStatistic, instance: Instance) -> DirectionSet:
    system = LinearSystem.from_rows(instance.M, budget_rows(stat, instance))
    return DirectionSet(system, BudgetReducing(stat))


def feature_cone(alpha: Sequence[Sequence]) -> DirectionSet:
    alpha = as_matrix(alpha)
    M = len(alpha[0])
    return DirectionSet(
        LinearSystem.from_rows(M, [Row(r, GE) for r in alpha]), FeatureCone(alpha)
    )


def reachable_lifted(stat: SufficientStatistic, instance: Instance) -> LinearSystem:
    """``{(d, v) : v >= 0, d + v in B_{S,V}}`` over 2M coordinates."""
    M = instance.M
    zero = (Fraction(0),) * M
    rows = [Row(zero + _unit(M, j), GE) for j in range(M)]
    for r in budget_rows(stat, instance):
        rows.append(Row(r.coeffs + r.coeffs, r.rel))
    return LinearSystem.from_rows(2 * M, rows)


def reachable_cone(stat: SufficientStatistic, instance: Instance) -> DirectionSet:
    lifted = reachable_lifted(stat, instance)
    M = instance.M
    projected = project(lifted, range(M, 2 * M), prune=True)
    return DirectionSet(projected, ReachableCone(stat), lifted)


def normalize_direction(d: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Rescale so the coordinates sum to -1 whenever the sum is negative."""
    d = as_vector(d)
    s = sum(d, Fraction(0))
    if s < 0:
        return tuple(x / -s for x in d)
    return d


@dataclass(frozen=True)
class Empty:
    certificate: MotzkinCertificate
    system: LinearSystem


@dataclass(frozen=True)
class Nonempty:
    witness: tuple[Fraction, ...]


def intersect_empty(a: DirectionSet, b: DirectionSet) -> Empty | Nonempty:
    if a.dimension != b.dimension:
        raise ValueError("direction sets of different dimension")
    system = a.description.conjoin(b.description)
    res = decide_feasible(system)
    if isinstance(res, Witness):
        return Nonempty(normalize_direction(res.point))
    return Empty(res, system)
