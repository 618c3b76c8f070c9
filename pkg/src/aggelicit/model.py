"""Domain types: instances, output vectors, aggregation operations, rewards.

Indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import lp
from .errors import (
    DimensionForcedZero,
    DimensionMismatch,
    EmptyList,
    InfeasibleInput,
    InvalidReward,
    NegativeAlphaEntry,
    NegativeEntry,
    ZeroAlphaRow,
)
from .rational import Q, as_matrix, as_vector, dot, matvec

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


@lru_cache(maxsize=4096)
def forced_zero_dimensions(M: int, C: Matrix) -> tuple[int, ...]:
    """Coordinates i for which {x >= 0, x_i >= 1, Cx <= 0} is empty."""
    bad = []
    for i in range(M):
        A = [list(row) for row in C]
        unit = [0] * M
        unit[i] = -1
        A.append(unit)
        res = lp.maximize([0] * M, A, [0] * len(C) + [-1])
        if res.status == lp.INFEASIBLE:
            bad.append(i)
    return tuple(bad)


@dataclass(frozen=True)
class Instance:
    M: int
    N: int
    L: int
    C: Matrix
    alpha: Matrix

    def __post_init__(self):
        object.__setattr__(self, "C", as_matrix(self.C))
        object.__setattr__(self, "alpha", as_matrix(self.alpha))
        if self.M < 1 or self.N < 1 or self.L < 0:
            raise DimensionMismatch("need M >= 1, N >= 1, L >= 0")
        if len(self.C) != self.L:
            raise DimensionMismatch(f"C has {len(self.C)} rows, expected L = {self.L}")
        if any(len(r) != self.M for r in self.C):
            raise DimensionMismatch(f"every row of C must have M = {self.M} entries")
        if len(self.alpha) != self.N:
            raise DimensionMismatch(f"alpha has {len(self.alpha)} rows, expected N = {self.N}")
        if any(len(r) != self.M for r in self.alpha):
            raise DimensionMismatch(f"every row of alpha must have M = {self.M} entries")
        for n, row in enumerate(self.alpha):
            for m, a in enumerate(row):
                if a < 0:
                    raise NegativeAlphaEntry(n, m)
            if not any(a > 0 for a in row):
                raise ZeroAlphaRow(n)
        forced = forced_zero_dimensions(self.M, self.C)
        if forced:
            raise DimensionForcedZero(forced[0])

    @classmethod
    def build(cls, C: Sequence[Sequence], alpha: Sequence[Sequence], M: int | None = None) -> "Instance":
        """Infer dimensions from the matrices.  ``M`` is needed when C and
        alpha are both empty, which cannot happen for a valid alpha."""
        alpha = as_matrix(alpha)
        C = as_matrix(C)
        if M is None:
            M = len(alpha[0]) if alpha else (len(C[0]) if C else 0)
        return cls(M, len(alpha), len(C), C, alpha)

    def with_alpha(self, alpha: Sequence[Sequence]) -> "Instance":
        alpha = as_matrix(alpha)
        return Instance(self.M, len(alpha), self.L, self.C, alpha)

    def features(self, x: Sequence[Fraction]) -> Vector:
        return matvec(self.alpha, x)


def validate_instance(raw: dict) -> Instance:
    """Build an Instance from a parsed document (dict with M, N, L, C, alpha)."""
    try:
        M, N, L = int(raw["M"]), int(raw["N"]), int(raw["L"])
        C, alpha = raw["C"], raw["alpha"]
    except KeyError as e:
        raise DimensionMismatch(f"missing field {e.args[0]!r}") from None
    return Instance(M, N, L, as_matrix(C), as_matrix(alpha))


def alpha_q(q) -> Matrix:
    """The two-feature family [[1,0,q],[0,1,q]] used throughout the examples."""
    q = Q(q)
    return ((Fraction(1), Fraction(0), q), (Fraction(0), Fraction(1), q))


@dataclass(frozen=True)
class OutputVector:
    entries: Vector

    def __post_init__(self):
        object.__setattr__(self, "entries", as_vector(self.entries))
        for i, v in enumerate(self.entries):
            if v < 0:
                raise NegativeEntry(f"output coordinate {i} is negative ({v})")

    @classmethod
    def of(cls, values: Iterable) -> "OutputVector":
        return cls(as_vector(values))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.entries) if v > 0)

    @property
    def l1(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def scaled(self, lam) -> "OutputVector":
        lam = Q(lam)
        return OutputVector(tuple(lam * v for v in self.entries))


def as_output(x) -> OutputVector:
    return x if isinstance(x, OutputVector) else OutputVector(as_vector(x))


@dataclass(frozen=True)
class SufficientStatistic:
    support: frozenset[int]
    binding: frozenset[int]


def _check_dim(x: OutputVector, instance: Instance) -> None:
    if len(x) != instance.M:
        raise DimensionMismatch(f"vector of length {len(x)} for an instance with M = {instance.M}")


def sufficient_statistic(x, instance: Instance) -> SufficientStatistic:
    x = as_output(x)
    _check_dim(x, instance)
    binding = frozenset(l for l, row in enumerate(instance.C) if dot(row, x.entries) == 0)
    return SufficientStatistic(x.support, binding)


def is_feasible(x, instance: Instance) -> bool:
    x = as_output(x)
    _check_dim(x, instance)
    return all(dot(row, x.entries) <= 0 for row in instance.C)


@dataclass(frozen=True)
class AggregationOperation:
    inputs: tuple[OutputVector, ...]
    aggregate: OutputVector

    def __post_init__(self):
        inputs = tuple(as_output(x) for x in self.inputs)
        aggregate = as_output(self.aggregate)
        if not inputs:
            raise EmptyList("an aggregation operation needs at least one input")
        M = len(aggregate)
        if any(len(x) != M for x in inputs):
            raise DimensionMismatch("aggregation vectors have differing dimensions")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "aggregate", aggregate)

    @property
    def K(self) -> int:
        return len(self.inputs)

    def check(self, instance: Instance) -> None:
        """Raise unless every input is feasible for this instance."""
        if len(self.aggregate) != instance.M:
            raise DimensionMismatch("operation dimension differs from instance M")
        for k, x in enumerate(self.inputs):
            if not is_feasible(x, instance):
                raise InfeasibleInput(k)


@dataclass(frozen=True)
class LinearReward:
    nu: Vector
    budget: Fraction

    def __post_init__(self):
        object.__setattr__(self, "nu", as_vector(self.nu))
        object.__setattr__(self, "budget", Q(self.budget))
        if any(v < 0 for v in self.nu):
            raise InvalidReward("reward coefficients must be nonnegative")
        if not any(v > 0 for v in self.nu):
            raise InvalidReward("reward must weight at least one feature positively")
        if self.budget <= 0:
            raise InvalidReward("budget must be positive")

    def value(self, x, instance: Instance) -> Fraction:
        return dot(self.nu, instance.features(as_output(x).entries))
