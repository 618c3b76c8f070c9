"""Aggregation rules and the three mechanism predicates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, EmptyList, NegativeEntry
from .model import (
    AggregationOperation,
    Instance,
    OutputVector,
    as_output,
    is_feasible,
    sufficient_statistic,
)
from .rational import as_vector


def aggregate_intersection(inputs: Sequence) -> OutputVector:
    vecs = [as_output(x) for x in inputs]
    if not vecs:
        raise EmptyList("intersection of an empty list")
    M = len(vecs[0])
    if any(len(v) != M for v in vecs):
        raise DimensionMismatch("inputs have differing dimensions")
    return OutputVector(tuple(min(col) for col in zip(*(v.entries for v in vecs))))


def aggregate_addition(inputs: Sequence, weights: Sequence) -> OutputVector:
    vecs = [as_output(x) for x in inputs]
    w = as_vector(weights)
    if not vecs:
        raise EmptyList("sum of an empty list")
    if len(w) != len(vecs):
        raise DimensionMismatch(f"{len(w)} weights for {len(vecs)} inputs")
    if any(v < 0 for v in w):
        raise NegativeEntry("aggregation weights must be nonnegative")
    M = len(vecs[0])
    if any(len(v) != M for v in vecs):
        raise DimensionMismatch("inputs have differing dimensions")
    out = [Fraction(0)] * M
    for wk, v in zip(w, vecs):
        for j in range(M):
            out[j] += wk * v[j]
    return OutputVector(tuple(out))


def apply_rule(rule: str, inputs: Sequence, weights: Sequence | None = None) -> OutputVector:
    if rule == "intersection":
        return aggregate_intersection(inputs)
    if rule == "addition":
        if weights is None:
            weights = [1] * len(inputs)
        return aggregate_addition(inputs, weights)
    raise ValueError(f"unknown aggregation rule {rule!r}")


@dataclass(frozen=True)
class MechanismReport:
    feasibility_expansion: bool
    support_expansion: tuple[bool, ...]
    binding_contraction: tuple[bool, ...]

    def weak_necessity(self) -> bool:
        """Feasibility expansion, or for every input support expansion or
        binding contraction."""
        return self.feasibility_expansion or all(
            s or b for s, b in zip(self.support_expansion, self.binding_contraction)
        )


def mechanisms(op: AggregationOperation, instance: Instance) -> MechanismReport:
    op.check(instance)
    agg = sufficient_statistic(op.aggregate, instance)
    stats = [sufficient_statistic(x, instance) for x in op.inputs]
    return MechanismReport(
        feasibility_expansion=not is_feasible(op.aggregate, instance),
        support_expansion=tuple(not agg.support <= s.support for s in stats),
        binding_contraction=tuple(not s.binding <= agg.binding for s in stats),
    )
