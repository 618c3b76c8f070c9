import itertools
from fractions import Fraction as F

import pytest

from aggelicit.errors import (
    DimensionForcedZero,
    DimensionMismatch,
    InvalidReward,
    NegativeAlphaEntry,
    NegativeEntry,
    ZeroAlphaRow,
)
from aggelicit.model import (
    Instance,
    LinearReward,
    OutputVector,
    SufficientStatistic,
    alpha_q,
    is_feasible,
    sufficient_statistic,
    validate_instance,
)


def raw(C, alpha, M=3):
    return {"M": M, "N": len(alpha), "L": len(C), "C": C, "alpha": alpha}


def test_binding_example_instance_valid():
    inst = validate_instance(raw([[1, 1, -1]], [[1, 0, F(1, 5)], [0, 1, F(1, 5)]]))
    assert inst.L == 1


def test_empty_constraints_valid():
    inst = validate_instance(raw([], [[1, 2, 0]]))
    assert inst.C == ()
    assert is_feasible([5, 0, 7], inst)


def test_forced_zero_dimension():
    with pytest.raises(DimensionForcedZero) as e:
        Instance.build([[1, 0], [-1, 1]], [[1, 1]])
    assert e.value.index == 0
    # brute force: no grid point with x1 > 0 is feasible
    grid = [F(k, 4) for k in range(9)]
    assert not any(a > 0 and a <= 0 and b - a <= 0 for a, b in itertools.product(grid, grid))


@pytest.mark.parametrize(
    "alpha, err",
    [([[0, 0, 0]], ZeroAlphaRow), ([[1, -1, 0]], NegativeAlphaEntry), ([[1, 0]], DimensionMismatch)],
)
def test_alpha_errors(alpha, err):
    with pytest.raises(err):
        validate_instance(raw([], alpha))


def test_missing_field():
    with pytest.raises(DimensionMismatch):
        validate_instance({"M": 1})


def test_floats_refused():
    with pytest.raises(TypeError):
        Instance.build([], [[0.5, 1]])


def test_statistic_examples():
    C = [[-1, -1, 1]]
    inst = Instance.build(C, alpha_q(2))
    assert sufficient_statistic([1, 0, 1], inst) == SufficientStatistic(frozenset({0, 2}), frozenset({0}))
    assert sufficient_statistic([0, 0, 0], inst) == SufficientStatistic(frozenset(), frozenset({0}))
    inst2 = Instance.build([[1, -1, 0], [1, F(-1, 4), -1]], [[1, 1, 1]])
    assert sufficient_statistic([1, 1, 2], inst2) == SufficientStatistic(frozenset({0, 1, 2}), frozenset({0}))


def test_feasibility_examples():
    inst = Instance.build([[-1, -1, 1]], alpha_q(2))
    assert not is_feasible([0, 0, 1], inst)
    assert is_feasible([0, 0, 0], inst)
    inst2 = Instance.build([[1, -1, 0], [1, F(-1, 4), -1]], [[1, 1, 1]])
    assert is_feasible([3, 5, 3], inst2)
    with pytest.raises(DimensionMismatch):
        is_feasible([1, 1], inst2)


def test_statistic_scale_invariant():
    inst = Instance.build([[1, -1, 0], [1, F(-1, 4), -1]], [[1, 1, 1]])
    for x in ([1, 1, 2], [2, 4, 1], [3, 5, 3]):
        for lam in (F(1, 3), F(7), F(22, 7)):
            assert sufficient_statistic(OutputVector.of(x).scaled(lam), inst) == sufficient_statistic(x, inst)


def test_output_vector_support_exact():
    x = OutputVector.of([F(1, 10**12), 0, F(-0)])
    assert x.support == frozenset({0})
    with pytest.raises(NegativeEntry):
        OutputVector.of([1, F(-1, 10**9)])


def test_reward_invariants():
    with pytest.raises(InvalidReward):
        LinearReward([0, 0], 1)
    with pytest.raises(InvalidReward):
        LinearReward([1, 0], 0)
    with pytest.raises(InvalidReward):
        LinearReward([1, -1], 1)
