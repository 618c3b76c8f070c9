"""Single-output elicitability.

An output ``x`` is elicitable when some monotone reward puts it in the
agent's argmax at some budget.  For ``x != 0`` this happens iff ``x`` is
feasible and no budget-reducing direction is feature-improving.  Positive
verdicts carry a linear reward with a KKT certificate; negative verdicts
carry an improving direction (or the infeasibility of ``x``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .cones import (
    Empty,
    Nonempty,
    budget_reducing_directions,
    feature_cone,
    intersect_empty,
)
from .errors import DegenerateCertificate, DimensionMismatch, ZeroVector
from .linsys import LinearSystem, MotzkinCertificate, verify_certificate
from .model import (
    Instance,
    LinearReward,
    OutputVector,
    as_output,
    is_feasible,
    sufficient_statistic,
)
from .rational import Q, as_vector, dot, matvec


@dataclass(frozen=True)
class KKTCertificate:
    budget_multiplier: Fraction
    # (index, multiplier) pairs; indices are coordinates off the support
    off_support_multipliers: tuple[tuple[int, Fraction], ...]
    # (index, multiplier) pairs over binding conic rows
    binding_multipliers: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class InfeasibleOutput:
    pass


@dataclass(frozen=True)
class ImprovingDirection:
    d: tuple[Fraction, ...]


@dataclass(frozen=True)
class Elicitable:
    reward: LinearReward
    kkt: KKTCertificate
    emptiness: Empty
    elicitable = True


@dataclass(frozen=True)
class Inelicitable:
    reason: InfeasibleOutput | ImprovingDirection
    elicitable = False


ElicitabilityVerdict = Elicitable | Inelicitable


def decide_elicitable(x, instance: Instance) -> ElicitabilityVerdict:
    x = as_output(x)
    if len(x) != instance.M:
        raise DimensionMismatch("output dimension differs from instance M")
    if x.is_zero():
        raise ZeroVector("the zero output is never elicitable with a positive budget")
    if not is_feasible(x, instance):
        return Inelicitable(InfeasibleOutput())
    stat = sufficient_statistic(x, instance)
    res = intersect_empty(
        budget_reducing_directions(stat, instance), feature_cone(instance.alpha)
    )
    if isinstance(res, Nonempty):
        return Inelicitable(ImprovingDirection(res.witness))
    reward, kkt = construct_reward(x, instance, res.certificate)
    return Elicitable(reward, kkt, res)


def elicitability_system(x: OutputVector, instance: Instance) -> LinearSystem:
    stat = sufficient_statistic(x, instance)
    return budget_reducing_directions(stat, instance).description.conjoin(
        feature_cone(instance.alpha).description
    )


def construct_reward(
    x, instance: Instance, cert: MotzkinCertificate
) -> tuple[LinearReward, KKTCertificate]:
    """Eliciting linear reward from an emptiness certificate.

    The multipliers of any Motzkin certificate for ``B ∩ {alpha d >= 0}``
    already satisfy stationarity (the strict budget row plays the role of
    the budget multiplier).  Among all such certificates scaled to budget
    multiplier 1 we return the one with the least total feature weight,
    which makes the output independent of the solver's pivoting path.
    """
    x = as_output(x)
    stat = sufficient_statistic(x, instance)
    system = elicitability_system(x, instance)
    if not verify_certificate(system, cert):
        raise ValueError("certificate does not certify emptiness for this output")
    M, N = instance.M, instance.N
    V = sorted(stat.binding)
    off = [j for j in range(M) if j not in stat.support]
    n_gamma = len(V)
    if not any(cert.weak_multipliers[n_gamma + len(off) :]):
        # cannot happen for x != 0: dotting stationarity with x gives
        # tau * |x|_1 = nu . alpha x
        raise DegenerateCertificate("certificate places no weight on feature rows")

    # variables: nu (N), lambda (off), gamma (V); all >= 0
    # stationarity: alpha^T nu + lambda_lift - C_V^T gamma = 1
    nvar = N + len(off) + n_gamma
    A, b = [], []
    for j in range(M):
        row = [instance.alpha[n][j] for n in range(N)]
        row += [Fraction(int(j == i)) for i in off]
        row += [-instance.C[l][j] for l in V]
        A.append(row)
        b.append(Fraction(1))
        A.append([-v for v in row])
        b.append(Fraction(-1))
    c = [Fraction(-1)] * N + [Fraction(0)] * (nvar - N)
    res = lp.maximize(c, A, b)
    if res.status != lp.OPTIMAL:
        raise AssertionError("reward canonicalization LP failed despite a valid certificate")
    sol = res.x
    nu = sol[:N]
    if not any(nu):
        raise DegenerateCertificate("no strictly positive feature weight obtainable")
    lam = tuple((j, sol[N + i]) for i, j in enumerate(off))
    gam = tuple((l, sol[N + len(off) + i]) for i, l in enumerate(V))
    reward = LinearReward(nu, x.l1)
    kkt = KKTCertificate(Fraction(1), lam, gam)
    if not verify_kkt(x, reward, kkt, instance):
        raise AssertionError("constructed KKT certificate failed verification")
    return reward, kkt


def verify_kkt(x, reward: LinearReward, kkt: KKTCertificate, instance: Instance) -> bool:
    x = as_output(x)
    M = instance.M
    if len(x) != M or len(reward.nu) != instance.N:
        return False
    tau = kkt.budget_multiplier
    if tau < 0:
        return False
    if not is_feasible(x, instance) or x.l1 > reward.budget:
        return False
    if tau > 0 and x.l1 != reward.budget:
        return False
    grad = list(matvec(list(zip(*instance.alpha)), reward.nu))  # alpha^T nu
    for j in range(M):
        grad[j] -= tau
    for j, lam in kkt.off_support_multipliers:
        if not 0 <= j < M or lam < 0:
            return False
        if lam > 0 and x[j] != 0:
            return False
        grad[j] += lam
    for l, g in kkt.binding_multipliers:
        if not 0 <= l < instance.L or g < 0:
            return False
        if g > 0 and dot(instance.C[l], x.entries) != 0:
            return False
        for j in range(M):
            grad[j] -= g * instance.C[l][j]
    return all(v == 0 for v in grad)


@dataclass(frozen=True)
class BestResponse:
    value: Fraction
    point: tuple[Fraction, ...]


def best_response(reward: LinearReward, instance: Instance) -> BestResponse:
    """Maximize the reward over {x >= 0, Cx <= 0, 1.x <= E}."""
    M = instance.M
    weights = matvec(list(zip(*instance.alpha)), reward.nu)
    A = [list(r) for r in instance.C] + [[Fraction(1)] * M]
    b = [Fraction(0)] * instance.L + [reward.budget]
    res = lp.maximize(weights, A, b)
    if res.status != lp.OPTIMAL:
        raise AssertionError("agent program is bounded and contains 0")
    return BestResponse(res.value, res.x)


def is_best_response(x, reward: LinearReward, instance: Instance) -> bool:
    """Whether ``x`` is in the agent's argmax (membership, not uniqueness)."""
    x = as_output(x)
    if not is_feasible(x, instance) or x.l1 > reward.budget:
        return False
    return reward.value(x, instance) == best_response(reward, instance).value


@dataclass(frozen=True)
class DirectionCheck:
    valid: bool
    epsilon: Fraction | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def verify_improving_direction(x, d: Sequence, instance: Instance) -> DirectionCheck:
    x = as_output(x)
    d = as_vector(d)
    M = instance.M
    if len(d) != M or len(x) != M:
        return DirectionCheck(False, reason="dimension mismatch")
    if not is_feasible(x, instance):
        return DirectionCheck(False, reason="x is infeasible")
    stat = sufficient_statistic(x, instance)
    if not budget_reducing_directions(stat, instance).description.contains(d):
        return DirectionCheck(False, reason="d is not a feasible budget-reducing direction")
    if not feature_cone(instance.alpha).description.contains(d):
        return DirectionCheck(False, reason="d decreases some feature")
    # step bounds from coordinates in the support and non-binding rows
    bounds = [x[j] / -d[j] for j in stat.support if d[j] < 0]
    for l, row in enumerate(instance.C):
        if l not in stat.binding:
            cd = dot(row, d)
            if cd > 0:
                bounds.append(-dot(row, x.entries) / cd)
    eps = min(bounds) / 2 if bounds else Fraction(1)
    y = tuple(xi + eps * di for xi, di in zip(x, d))
    if any(v < 0 for v in y):
        return DirectionCheck(False, eps, "step leaves the nonnegative orthant")
    if not is_feasible(OutputVector(y), instance):
        return DirectionCheck(False, eps, "step leaves the feasible cone")
    if sum(y) >= x.l1:
        return DirectionCheck(False, eps, "step does not reduce the budget")
    fx, fy = instance.features(x.entries), instance.features(y)
    if any(a < b for a, b in zip(fy, fx)):
        return DirectionCheck(False, eps, "step lowers a feature")
    return DirectionCheck(True, eps)
