"""Brute-force oracles and seeded random instances.

Everything here is deliberately independent of the Motzkin machinery: the
grid oracles enumerate rewards or directions and test them directly against
the agent program.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .aggregate import aggregate_addition, aggregate_intersection, mechanisms
from .cones import normalize_direction
from .elicit import is_best_response, verify_improving_direction
from .errors import ClosedLoopFailure, GenerationExhausted, InstanceError
from .model import (
    AggregationOperation,
    Instance,
    LinearReward,
    Matrix,
    as_output,
    is_feasible,
    sufficient_statistic,
)
from .power import (
    BindingBranch,
    DirectionRoute,
    FeasibilityRoute,
    SupportBranch,
    Unsatisfied,
    decide_expansion_existential,
    decide_power_alternate,
    expansion_fixed_alpha,
    extract_branches,
    search_margin_witness,
    verify_power_witness,
)
from .rational import fmt_matrix, fmt_vector

RULES = ("intersection", "addition", "arbitrary")


# -- exact small linear algebra --------------------------------------------


def solve_square(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Gaussian elimination; None when the matrix is singular."""
    n = len(A)
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for i in range(n):
            if i != col and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[col])]
    return tuple(r[-1] for r in rows)


def slice_vertices(M: int, C: Matrix) -> list[tuple[Fraction, ...]]:
    """Vertices of {x >= 0, Cx <= 0, 1.x = 1}: the normalized extreme rays of
    the feasible cone."""
    ineq = [tuple(-Fraction(int(i == j)) for i in range(M)) for j in range(M)] + list(C)
    ones = tuple(Fraction(1) for _ in range(M))
    out = []
    for active in itertools.combinations(range(len(ineq)), M - 1):
        A = [ineq[i] for i in active] + [ones]
        b = [Fraction(0)] * (M - 1) + [Fraction(1)]
        x = solve_square(A, b)
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) <= 0 for row in ineq) and x not in out:
            out.append(x)
    return sorted(out)


# -- random instances -------------------------------------------------------


@dataclass
class InstanceGenerator:
    seed: int
    M: int = 3
    N: int = 2
    L: int = 1
    K: int = 2
    rule: str | None = None  # None picks uniformly among RULES
    max_retries: int = 200
    rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        if not (1 <= self.M <= 6 and 1 <= self.N <= 4 and 0 <= self.L <= 3 and 1 <= self.K <= 4):
            raise ValueError("dimensions outside the supported desk scale")
        self.rng = random.Random(self.seed)

    def coefficient(self) -> Fraction:
        return Fraction(self.rng.randint(-2, 2), self.rng.randint(1, 4))


def random_alpha(rng: random.Random, N: int, M: int) -> Matrix:
    rows = []
    for _ in range(N):
        while True:
            row = tuple(Fraction(rng.randint(0, 2), rng.randint(1, 4)) for _ in range(M))
            if any(row):
                break
        rows.append(row)
    return tuple(rows)


def _random_feasible(rng: random.Random, vertices) -> tuple[Fraction, ...]:
    picks = rng.sample(vertices, min(len(vertices), rng.randint(1, 2)))
    M = len(vertices[0])
    x = [Fraction(0)] * M
    for v in picks:
        w = Fraction(rng.randint(1, 3), rng.randint(1, 2))
        for j in range(M):
            x[j] += w * v[j]
    return tuple(x)


def random_instance(gen: InstanceGenerator) -> tuple[Instance, AggregationOperation]:
    rng = gen.rng
    for _ in range(gen.max_retries):
        C = tuple(tuple(gen.coefficient() for _ in range(gen.M)) for _ in range(gen.L))
        alpha = random_alpha(rng, gen.N, gen.M)
        try:
            inst = Instance(gen.M, gen.N, gen.L, C, alpha)
        except InstanceError:
            continue
        vertices = slice_vertices(gen.M, inst.C)
        inputs = [_random_feasible(rng, vertices) for _ in range(gen.K)]
        rule = gen.rule or rng.choice(RULES)
        if rule == "intersection":
            agg = aggregate_intersection(inputs)
        elif rule == "addition":
            weights = [Fraction(rng.randint(0, 4), 2) for _ in range(gen.K)]
            if not any(weights):
                weights[rng.randrange(gen.K)] = Fraction(1)
            agg = aggregate_addition(inputs, weights)
        else:
            agg = as_output(Fraction(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(gen.M))
        if agg.is_zero():
            # the characterizations concern nonzero outputs
            continue
        return inst, AggregationOperation(tuple(inputs), agg)
    raise GenerationExhausted(f"no valid instance after {gen.max_retries} attempts (seed {gen.seed})")


def random_feasible_output(rng: random.Random, instance: Instance) -> tuple[Fraction, ...]:
    return _random_feasible(rng, slice_vertices(instance.M, instance.C))


# -- grid oracles -----------------------------------------------------------


@dataclass(frozen=True)
class FoundReward:
    nu: tuple[Fraction, ...]


@dataclass(frozen=True)
class FoundDirection:
    d: tuple[Fraction, ...]


@dataclass(frozen=True)
class NotFound:
    searched: int


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``, in
    lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_elicitability_oracle(x, instance: Instance, grid_denominator: int = 5) -> FoundReward | NotFound:
    x = as_output(x)
    if x.is_zero() or not is_feasible(x, instance):
        return NotFound(0)
    count = 0
    for c in compositions(grid_denominator, instance.N):
        count += 1
        nu = tuple(Fraction(v, grid_denominator) for v in c)
        if is_best_response(x, LinearReward(nu, x.l1), instance):
            return FoundReward(nu)
    return NotFound(count)


def _integer_rows(rows) -> list[tuple[int, ...]]:
    out = []
    for r in rows:
        den = 1
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append(tuple(int(v * den) for v in r))
    return out


def grid_direction_oracle(x, instance: Instance, grid_denominator: int = 5) -> FoundDirection | NotFound:
    x = as_output(x)
    if not is_feasible(x, instance):
        return NotFound(0)
    M, g = instance.M, grid_denominator
    stat = sufficient_statistic(x, instance)
    binding = _integer_rows(instance.C[l] for l in sorted(stat.binding))
    feats = _integer_rows(instance.alpha)
    ranges = [range(0, g + 1) if j not in stat.support else range(-g, g + 1) for j in range(M)]
    count = 0
    for m in itertools.product(*ranges):
        if sum(m) >= 0:
            continue
        if any(sum(a * v for a, v in zip(row, m)) > 0 for row in binding):
            continue
        if any(sum(a * v for a, v in zip(row, m)) < 0 for row in feats):
            continue
        count += 1
        d = tuple(Fraction(v, g) for v in m)
        if verify_improving_direction(x, d, instance):
            return FoundDirection(normalize_direction(d))
    return NotFound(count)


# -- property battery -------------------------------------------------------


@dataclass
class CrossCheckReport:
    verdict: str = ""
    alternate: str = ""
    equivalence: str = ""  # same-d, other-d, boundary, violation, n/a
    boundary_ambiguous: bool = False
    alphas_tested: int = 0
    violations: list[dict] = field(default_factory=list)

    def violate(self, prop: str, **detail) -> None:
        self.violations.append({"property": prop, **detail})

    @property
    def ok(self) -> bool:
        return not self.violations


def _op_doc(op: AggregationOperation, instance: Instance) -> dict:
    return {
        "C": fmt_matrix(instance.C),
        "alpha": fmt_matrix(instance.alpha),
        "inputs": [fmt_vector(x.entries) for x in op.inputs],
        "aggregate": fmt_vector(op.aggregate.entries),
    }


def classify_equivalence(op: AggregationOperation, instance: Instance, alt) -> str:
    """Compare the alternate decision with the margin form.

    same-d / other-d: a verified margin-form witness exists (for the decided
    direction, or for some other direction); agree: both forms unsatisfied;
    boundary: only the closure of the margin form is satisfiable;
    violation: the two forms disagree beyond the boundary.
    """
    if isinstance(alt, Unsatisfied):
        w = search_margin_witness(op, instance)
        if w is None:
            return "agree"
        return "violation" if verify_power_witness(op, instance, w) else "agree"
    if alt.route == "feasibility":
        return "agree" if verify_power_witness(op, instance, FeasibilityRoute()) else "violation"
    w = extract_branches(op, instance, alt.d)
    if w is not None and verify_power_witness(op, instance, w):
        return "same-d"
    w = search_margin_witness(op, instance)
    if w is not None and verify_power_witness(op, instance, w):
        return "other-d"
    weak = search_margin_witness(op, instance, strict=False)
    if weak is not None and verify_power_witness(op, instance, weak, strict=False):
        return "boundary"
    return "violation"


def cross_check(
    op: AggregationOperation,
    instance: Instance,
    trials: int = 20,
    seed: int = 0,
) -> CrossCheckReport:
    """Run the expansion property battery on one operation."""
    rep = CrossCheckReport()
    rng = random.Random(seed)
    doc = _op_doc(op, instance)
    mech = mechanisms(op, instance)
    alt = decide_power_alternate(op, instance)
    rep.alternate = "unsatisfied" if isinstance(alt, Unsatisfied) else alt.route
    try:
        verdict = decide_expansion_existential(op, instance)
    except ClosedLoopFailure as e:
        rep.violate("closed-loop", message=str(e), operation=doc)
        return rep
    rep.verdict = "expanding" if verdict.expanding else "not-expanding"

    if verdict.expanding and not mech.weak_necessity():
        rep.violate("weak-necessity", operation=doc)
    if mech.feasibility_expansion and not verdict.expanding:
        rep.violate("feasibility-sufficiency", operation=doc)
    if not verdict.expanding:
        for _ in range(trials):
            N = rng.randint(1, 3)
            alpha = random_alpha(rng, N, instance.M)
            rep.alphas_tested += 1
            if expansion_fixed_alpha(op, instance.with_alpha(alpha)).expanding:
                rep.violate("necessity", alpha=fmt_matrix(alpha), operation=doc)
                break

    rep.equivalence = classify_equivalence(op, instance, alt)
    rep.boundary_ambiguous = rep.equivalence == "boundary"
    if rep.equivalence == "violation":
        rep.violate("equivalence", alternate=rep.alternate, d=fmt_vector(alt.d) if getattr(alt, "d", None) else None, operation=doc)

    # a margin-form witness implies the matching mechanisms
    w = getattr(verdict, "witness", None)
    if isinstance(w, FeasibilityRoute) and not mech.feasibility_expansion:
        rep.violate("mechanism-consistency", route="feasibility", operation=doc)
    if isinstance(w, DirectionRoute):
        for k, branch in enumerate(w.per_k):
            if isinstance(branch, SupportBranch) and not mech.support_expansion[k]:
                rep.violate("mechanism-consistency", k=k, branch="support", operation=doc)
            if isinstance(branch, BindingBranch) and not mech.binding_contraction[k]:
                rep.violate("mechanism-consistency", k=k, branch="binding", operation=doc)
    return rep


def elicitability_consistency(x, instance: Instance, grid_denominator: int = 5) -> list[dict]:
    """Compare the exact verdict for ``x`` with both grid oracles."""
    from .elicit import decide_elicitable

    x = as_output(x)
    out: list[dict] = []
    verdict = decide_elicitable(x, instance)
    reward = grid_elicitability_oracle(x, instance, grid_denominator)
    direction = grid_direction_oracle(x, instance, grid_denominator)
    where = {"x": fmt_vector(x.entries), "C": fmt_matrix(instance.C), "alpha": fmt_matrix(instance.alpha)}
    if isinstance(reward, FoundReward) and not verdict.elicitable:
        out.append({"property": "reward-oracle", "nu": fmt_vector(reward.nu), **where})
    if isinstance(direction, FoundDirection) and verdict.elicitable:
        out.append({"property": "direction-oracle", "d": fmt_vector(direction.d), **where})
    if isinstance(reward, FoundReward) and isinstance(direction, FoundDirection):
        out.append({"property": "oracle-exclusivity", **where})
    if verdict.elicitable and not is_best_response(x, verdict.reward, instance):
        out.append({"property": "own-reward", **where})
    return out
