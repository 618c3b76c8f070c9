import random
from fractions import Fraction as F

from aggelicit.cones import (
    Empty,
    Nonempty,
    budget_reducing_directions,
    feature_cone,
    intersect_empty,
    reachable_cone,
)
from aggelicit.linsys import GE, LE, LT, Witness, decide_feasible
from aggelicit.model import Instance, SufficientStatistic, alpha_q, sufficient_statistic
from aggelicit.oracle import InstanceGenerator, random_instance


def rows(ds):
    return [(r.coeffs, r.rel) for r in ds.description.rows]


def stat(S, V):
    return SufficientStatistic(frozenset(S), frozenset(V))


def test_budget_set_feasibility_example():
    inst = Instance.build([[-1, -1, 1]], alpha_q(2))
    B = budget_reducing_directions(stat({0, 2}, {0}), inst)
    assert rows(B) == [
        ((F(-1), F(-1), F(1)), LE),
        ((F(0), F(1), F(0)), GE),
        ((F(1), F(1), F(1)), LT),
    ]


def test_budget_set_full_support():
    inst = Instance.build([], alpha_q(2), M=3)
    assert rows(budget_reducing_directions(stat({0, 1, 2}, ()), inst)) == [((F(1), F(1), F(1)), LT)]


def test_budget_set_single_support():
    inst = Instance.build([[1, 1, -1]], alpha_q(F(1, 5)))
    assert rows(budget_reducing_directions(stat({2}, ()), inst)) == [
        ((F(1), F(0), F(0)), GE),
        ((F(0), F(1), F(0)), GE),
        ((F(1), F(1), F(1)), LT),
    ]


def test_feature_cones():
    assert rows(feature_cone(alpha_q(F(3, 5)))) == [
        ((F(1), F(0), F(3, 5)), GE),
        ((F(0), F(1), F(3, 5)), GE),
    ]
    assert rows(feature_cone([[1, 1, 1]])) == [((F(1), F(1), F(1)), GE)]
    ident = [[int(i == j) for j in range(3)] for i in range(3)]
    assert feature_cone(ident).description.contains([0, 1, 2])
    assert not feature_cone(ident).description.contains([0, -1, 2])


def test_intersections():
    inst = Instance.build([], alpha_q(F(3, 5)), M=3)
    F06 = feature_cone(inst.alpha)
    r = intersect_empty(budget_reducing_directions(sufficient_statistic([1, 0, 0], inst), inst), F06)
    assert isinstance(r, Empty)
    r = intersect_empty(budget_reducing_directions(sufficient_statistic([F(1, 2), F(1, 2), 0], inst), inst), F06)
    assert isinstance(r, Nonempty)
    assert r.witness == (F(-3), F(-3), F(5))  # proportional to [-0.6, -0.6, 1]
    inst3 = Instance.build([[1, 1, -1]], alpha_q(F(1, 5)))
    r = intersect_empty(
        budget_reducing_directions(sufficient_statistic([0, 0, 1], inst3), inst3), feature_cone(inst3.alpha)
    )
    assert isinstance(r, Nonempty)
    assert r.witness == (F(1, 3), F(1, 3), F(-5, 3))  # proportional to (0.2, 0.2, -1)
    assert sum(r.witness) == -1


def test_reachable_cone_small_example():
    inst = Instance.build([[1, -1]], [[1, 1]])
    R = reachable_cone(stat({0, 1}, {0}), inst)
    assert R.contains([-3, -2])
    assert R.description.contains([-3, -2])
    # brute force over v in {0..4}^2 on a sample of directions
    grid = range(5)
    B = budget_reducing_directions(stat({0, 1}, {0}), inst).description
    rng = random.Random(2)
    for _ in range(20):
        d = [F(rng.randint(-6, 3)), F(rng.randint(-6, 3))]
        brute = any(B.contains([d[0] + a, d[1] + b]) for a in grid for b in grid)
        if brute:
            assert R.contains(d)
        assert R.contains(d) == R.description.contains(d)


def _instances(n):
    for s in range(n):
        yield random_instance(InstanceGenerator(seed=s, M=3, N=2, L=2, K=2))


def test_cone_properties_on_random_instances():
    rng = random.Random(9)
    for inst, op in _instances(15):
        for x in op.inputs:
            st = sufficient_statistic(x, inst)
            B = budget_reducing_directions(st, inst)
            R = reachable_cone(st, inst)
            w = decide_feasible(B.description)
            if isinstance(w, Witness):
                assert R.contains(w.point)
                assert R.description.contains(w.point)
            for _ in range(20):
                d = [F(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(3)]
                assert not R.contains(d)
            # shrinking V and growing S enlarges B
            bigger = budget_reducing_directions(SufficientStatistic(frozenset(range(3)), frozenset()), inst)
            if isinstance(w, Witness):
                assert bigger.description.contains(w.point)


def test_feature_cone_closed_under_combination():
    rng = random.Random(4)
    cone = feature_cone(alpha_q(F(3, 5))).description
    members = []
    while len(members) < 20:
        d = [F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)]
        if cone.contains(d):
            members.append(d)
    for d, e in zip(members, members[1:]):
        a, b = F(rng.randint(0, 5), 2), F(rng.randint(0, 5), 3)
        assert cone.contains([a * x + b * y for x, y in zip(d, e)])
