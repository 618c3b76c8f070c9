"""Elicitability expansion: fixed feature map and existential over maps.

For a fixed ``alpha`` an operation expands elicitability iff every input is
elicitable and the aggregate is not.  Existentially, expansion is possible
iff the aggregate is infeasible or some budget-reducing direction ``d`` of
the aggregate with a positive coordinate lies outside every input's
reachable cone.  That condition is decided here by enumerating complements
of the projected reachable cones; a feature map separating ``d`` is then
constructed and re-verified.

The direct margin form of the condition (support branches with
``-d_j - |1.d| > 0`` and binding branches with a multiplier vector gamma) is
used for witness verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp
from .aggregate import mechanisms
from .cones import (
    budget_reducing_directions,
    normalize_direction,
    reachable_cone,
)
from .elicit import ElicitabilityVerdict, decide_elicitable
from .errors import ClosedLoopFailure, NoPositiveCoordinate
from .linsys import (
    GE,
    GT,
    LE,
    LT,
    LinearSystem,
    Row,
    Witness,
    decide_feasible,
    project,
)
from .model import (
    AggregationOperation,
    Instance,
    Matrix,
    SufficientStatistic,
    is_feasible,
    sufficient_statistic,
)
from .rational import as_vector, dot


# -- fixed feature map ------------------------------------------------------


@dataclass(frozen=True)
class FixedAlphaVerdict:
    per_input_elicitable: tuple[bool, ...]
    aggregate_elicitable: bool
    expanding: bool
    input_verdicts: tuple[ElicitabilityVerdict, ...] = field(repr=False)
    aggregate_verdict: ElicitabilityVerdict = field(repr=False)


def expansion_fixed_alpha(op: AggregationOperation, instance: Instance) -> FixedAlphaVerdict:
    op.check(instance)
    verdicts = tuple(decide_elicitable(x, instance) for x in op.inputs)
    agg = decide_elicitable(op.aggregate, instance)
    per = tuple(v.elicitable for v in verdicts)
    return FixedAlphaVerdict(
        per_input_elicitable=per,
        aggregate_elicitable=agg.elicitable,
        expanding=all(per) and not agg.elicitable,
        input_verdicts=verdicts,
        aggregate_verdict=agg,
    )


# -- witnesses for the margin form ------------------------------------------


@dataclass(frozen=True)
class SupportBranch:
    j: int


@dataclass(frozen=True)
class BindingBranch:
    # (conic row index, multiplier) pairs over the input's binding rows
    gamma: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class FeasibilityRoute:
    pass


@dataclass(frozen=True)
class DirectionRoute:
    d: tuple[Fraction, ...]
    per_k: tuple[SupportBranch | BindingBranch, ...]


PowerWitness = FeasibilityRoute | DirectionRoute


def binding_margin(gamma, d: Sequence[Fraction], instance: Instance) -> Fraction:
    """gamma^T C_V d - |1.d| * |min_j min(0, (gamma^T C_V)_j)|."""
    M = instance.M
    g = [Fraction(0)] * M
    for l, w in gamma:
        for j in range(M):
            g[j] += w * instance.C[l][j]
    worst = min([Fraction(0)] + g)
    return dot(g, d) - abs(sum(d, Fraction(0))) * abs(worst)


def verify_power_witness(
    op: AggregationOperation,
    instance: Instance,
    w: PowerWitness,
    strict: bool = True,
) -> bool:
    """Check a margin-form witness exactly.  ``strict=False`` relaxes the
    margins to ``>= 0`` (used only for boundary diagnostics)."""

    def positive(v: Fraction) -> bool:
        return v > 0 if strict else v >= 0

    if isinstance(w, FeasibilityRoute):
        return not is_feasible(op.aggregate, instance)
    if not isinstance(w, DirectionRoute):
        return False
    d = as_vector(w.d)
    if len(d) != instance.M or len(w.per_k) != op.K:
        return False
    if sum(d, Fraction(0)) != -1:
        return False
    if not any(v > 0 for v in d):
        return False
    if not is_feasible(op.aggregate, instance):
        return False
    agg = sufficient_statistic(op.aggregate, instance)
    if not budget_reducing_directions(agg, instance).description.contains(d):
        return False
    margin = abs(sum(d, Fraction(0)))
    for x, branch in zip(op.inputs, w.per_k):
        stat = sufficient_statistic(x, instance)
        if isinstance(branch, SupportBranch):
            if branch.j in stat.support or not 0 <= branch.j < instance.M:
                return False
            if not positive(-d[branch.j] - margin):
                return False
        elif isinstance(branch, BindingBranch):
            if any(l not in stat.binding or g < 0 for l, g in branch.gamma):
                return False
            if not positive(binding_margin(branch.gamma, d, instance)):
                return False
        else:
            return False
    return True


def _best_gamma(stat: SufficientStatistic, d: Sequence[Fraction], instance: Instance):
    """Maximize the binding margin over gamma >= 0 with 1.gamma <= 1."""
    V = sorted(stat.binding)
    if not V:
        return None, Fraction(0)
    M = instance.M
    scale = abs(sum(d, Fraction(0)))
    # variables: gamma (|V|), s ;  maximize (C_V d).gamma - scale * s
    c = [dot(instance.C[l], d) for l in V] + [-scale]
    A = []
    for j in range(M):
        A.append([-instance.C[l][j] for l in V] + [Fraction(-1)])
    A.append([Fraction(1)] * len(V) + [Fraction(0)])
    b = [Fraction(0)] * M + [Fraction(1)]
    res = lp.maximize(c, A, b)
    gamma = tuple((l, res.x[i]) for i, l in enumerate(V))
    return gamma, binding_margin(gamma, d, instance)


def extract_branches(
    op: AggregationOperation, instance: Instance, d: Sequence[Fraction]
) -> DirectionRoute | None:
    """Margin-form branches for a given direction, or None if some input has
    neither a support nor a binding branch for this ``d``."""
    d = normalize_direction(d)
    total = sum(d, Fraction(0))
    branches = []
    for x in op.inputs:
        stat = sufficient_statistic(x, instance)
        js = [j for j in range(instance.M) if j not in stat.support and d[j] < total]
        if js:
            branches.append(SupportBranch(js[0]))
            continue
        gamma, value = _best_gamma(stat, d, instance)
        if gamma is not None and value > 0:
            branches.append(BindingBranch(gamma))
            continue
        return None
    return DirectionRoute(d, tuple(branches))


# -- alternate condition via complement enumeration -------------------------


@dataclass(frozen=True)
class Satisfied:
    route: str  # "feasibility" or "direction"
    d: tuple[Fraction, ...] | None = None
    combinations: int = 0


@dataclass(frozen=True)
class Unsatisfied:
    combinations: int = 0
    cone_rows: tuple[int, ...] = ()


def _positive_rows(M: int) -> list[list[Row]]:
    return [[Row(tuple(Fraction(int(i == p)) for i in range(M)), GT)] for p in range(M)]


def _search(base: LinearSystem, levels: list[list[list[Row]]]):
    """Depth-first search for the lexicographically first choice of one
    option per level whose rows, added to ``base``, are jointly feasible.
    Infeasible prefixes are pruned.  Returns (point, choice indices) or None
    plus the number of systems solved."""
    count = 0

    def rec(i: int, system: LinearSystem, path: tuple[int, ...]):
        nonlocal count
        count += 1
        res = decide_feasible(system)
        if not isinstance(res, Witness):
            return None
        if i == len(levels):
            return res.point, path
        for idx, option in enumerate(levels[i]):
            out = rec(i + 1, system.add_rows(option), path + (idx,))
            if out is not None:
                return out
        return None

    found = rec(0, base, ())
    return found, count


def decide_power_alternate(op: AggregationOperation, instance: Instance) -> Satisfied | Unsatisfied:
    op.check(instance)
    if not is_feasible(op.aggregate, instance):
        return Satisfied("feasibility")
    M = instance.M
    agg = sufficient_statistic(op.aggregate, instance)
    base = budget_reducing_directions(agg, instance).description
    cones = [reachable_cone(sufficient_statistic(x, instance), instance) for x in op.inputs]
    levels = [[[r.negated()] for r in cone.description.rows] for cone in cones]
    levels.append(_positive_rows(M))
    found, count = _search(base, levels)
    if found is None:
        return Unsatisfied(count, tuple(len(c.description.rows) for c in cones))
    d = normalize_direction(found[0])
    # certify against the unprojected reachable cones
    if not base.contains(d) or not any(v > 0 for v in d):
        raise AssertionError("alternate-condition witness left the aggregate's direction set")
    for cone in cones:
        if cone.contains(d):
            raise AssertionError("projection disagrees with the lifted reachable cone")
    return Satisfied("direction", d, count)


# -- existential search over the margin form --------------------------------


def _binding_cone(stat: SufficientStatistic, instance: Instance) -> LinearSystem:
    """Directions d (with 1.d < 0) for which no gamma gives a positive
    binding margin: {d : exists v >= 0, 1.(d+v) <= 0, C_V (d+v) <= 0}."""
    M = instance.M
    zero = (Fraction(0),) * M
    ones = (Fraction(1),) * M
    rows = [Row(zero + tuple(Fraction(int(i == j)) for i in range(M)), GE) for j in range(M)]
    rows.append(Row(ones + ones, LE))
    for l in sorted(stat.binding):
        c = instance.C[l]
        rows.append(Row(c + c, LE))
    lifted = LinearSystem.from_rows(2 * M, rows)
    return project(lifted, range(M, 2 * M), prune=True)


def _weak_negation(r: Row) -> Row:
    # closure of the complement: a.d <= 0 / < 0 becomes a.d >= 0
    return Row(r.coeffs, GE)


def search_margin_witness(
    op: AggregationOperation, instance: Instance, strict: bool = True
) -> DirectionRoute | None:
    """Existential search for a direction satisfying the margin form.

    Per input the options are a support row ``d_j < 1.d`` for ``j`` off the
    input's support, or the complement of one facet of the binding cone.
    With ``strict=False`` every option is replaced by its closure.
    """
    if not is_feasible(op.aggregate, instance):
        return None
    M = instance.M
    ones = (Fraction(1),) * M
    agg = sufficient_statistic(op.aggregate, instance)
    base = budget_reducing_directions(agg, instance).description
    levels = []
    kinds = []
    for x in op.inputs:
        stat = sufficient_statistic(x, instance)
        opts, kind = [], []
        for j in range(M):
            if j not in stat.support:
                coeffs = tuple(Fraction(int(i == j)) - 1 for i in range(M))
                opts.append([Row(coeffs, LT if strict else LE)])
                kind.append(("support", j))
        if stat.binding:
            for r in _binding_cone(stat, instance).rows:
                opts.append([r.negated() if strict else _weak_negation(r)])
                kind.append(("binding", None))
        levels.append(opts)
        kinds.append(kind)
    levels.append(_positive_rows(M))
    found, _ = _search(base, levels)
    if found is None:
        return None
    d = normalize_direction(found[0])
    branches = []
    for k, (x, choice) in enumerate(zip(op.inputs, found[1])):
        kind, j = kinds[k][choice]
        if kind == "support":
            branches.append(SupportBranch(j))
        else:
            gamma, _ = _best_gamma(sufficient_statistic(x, instance), d, instance)
            branches.append(BindingBranch(gamma))
    return DirectionRoute(d, tuple(branches))


# -- witness feature maps and the existential decision ----------------------


def construct_separating_alpha(d: Sequence) -> Matrix:
    """Feature map whose improving cone lies inside {u + t d : u, t >= 0}.

    One unit row per positive coordinate p of d, and for every pair
    (p positive, q nonpositive) a row with |d_q| at p and |d_p| at q.
    """
    d = as_vector(d)
    M = len(d)
    P0 = [p for p in range(M) if d[p] > 0]
    N0 = [q for q in range(M) if d[q] <= 0]
    if not P0:
        raise NoPositiveCoordinate("direction has no positive coordinate")
    rows = [tuple(Fraction(int(i == p)) for i in range(M)) for p in P0]
    for p in P0:
        for q in N0:
            row = [Fraction(0)] * M
            row[p] = abs(d[q])
            row[q] = abs(d[p])
            rows.append(tuple(row))
    return tuple(rows)


def all_ones_alpha(M: int) -> Matrix:
    return ((Fraction(1),) * M,)


@dataclass(frozen=True)
class Expanding:
    alternate: Satisfied
    witness: PowerWitness | None
    alpha_witness: Matrix
    fixed_check: FixedAlphaVerdict = field(repr=False)
    expanding = True


@dataclass(frozen=True)
class NotExpanding:
    evidence: Unsatisfied
    expanding = False


ExistentialVerdict = Expanding | NotExpanding


def decide_expansion_existential(op: AggregationOperation, instance: Instance) -> ExistentialVerdict:
    """Whether some feature map makes ``op`` elicitability-expanding.  Only
    the conic constraints of ``instance`` are used."""
    alt = decide_power_alternate(op, instance)
    if isinstance(alt, Unsatisfied):
        return NotExpanding(alt)
    if alt.route == "feasibility":
        alpha = all_ones_alpha(instance.M)
        witness: PowerWitness | None = FeasibilityRoute()
    else:
        alpha = construct_separating_alpha(alt.d)
        # prefer branches for the decided direction; on margin-tight
        # directions fall back to a search over other directions
        witness = extract_branches(op, instance, alt.d)
        if witness is None or not verify_power_witness(op, instance, witness):
            witness = search_margin_witness(op, instance)
    check = expansion_fixed_alpha(op, instance.with_alpha(alpha))
    if not check.expanding:
        raise ClosedLoopFailure(
            f"constructed feature map does not expand elicitability (route {alt.route}, d={alt.d})"
        )
    return Expanding(alt, witness, alpha, check)


def check_weak_necessity(op: AggregationOperation, instance: Instance) -> bool:
    return mechanisms(op, instance).weak_necessity()


@dataclass(frozen=True)
class Applicable:
    equivalent: bool
    existential_expanding: bool
    mechanism_prediction: bool


@dataclass(frozen=True)
class NotApplicable:
    reason: str


def corollary_special_case(op: AggregationOperation, instance: Instance) -> Applicable | NotApplicable:
    """Special case with no binding conic rows anywhere: expansion should
    coincide with feasibility expansion or support expansion for every
    input, unless the full-support edge case occurs."""
    op.check(instance)
    M = instance.M
    stats = [sufficient_statistic(x, instance) for x in op.inputs]
    agg = sufficient_statistic(op.aggregate, instance)
    if agg.binding or any(s.binding for s in stats):
        return NotApplicable("some vector has a binding conic constraint")
    full = frozenset(range(M))
    if agg.support == full:
        supports = {s.support for s in stats}
        if all(full - {j} in supports for j in range(M)):
            return NotApplicable("full-support aggregate and every co-singleton support occurs")
    rep = mechanisms(op, instance)
    predicted = rep.feasibility_expansion or all(rep.support_expansion)
    actual = decide_expansion_existential(op, instance).expanding
    return Applicable(predicted == actual, actual, predicted)
