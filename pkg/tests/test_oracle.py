import random
from fractions import Fraction as F

from aggelicit.documents import instance_document
from aggelicit.elicit import decide_elicitable
from aggelicit.model import Instance, alpha_q, is_feasible
from aggelicit.oracle import (
    FoundDirection,
    FoundReward,
    InstanceGenerator,
    NotFound,
    compositions,
    cross_check,
    elicitability_consistency,
    grid_direction_oracle,
    grid_elicitability_oracle,
    random_feasible_output,
    random_instance,
    slice_vertices,
)


def test_seed_one_pinned():
    inst, op = random_instance(InstanceGenerator(seed=1, M=3, N=2, L=1, K=2))
    doc = instance_document(inst, op)
    assert doc["C"] == [["-1", "0", "1/4"]]
    assert doc["alpha"] == [["1/4", "0", "1"], ["1/4", "2", "1/2"]]
    assert doc["aggregation"]["inputs"] == [["3", "2", "0"], ["0", "3", "0"]]
    assert doc["aggregation"]["aggregate"] == ["3/2", "11/2", "0"]


def test_determinism():
    a = random_instance(InstanceGenerator(seed=42, M=4, N=3, L=3, K=3))
    b = random_instance(InstanceGenerator(seed=42, M=4, N=3, L=3, K=3))
    assert a == b


def test_no_constraints():
    inst, op = random_instance(InstanceGenerator(seed=3, L=0))
    assert inst.C == ()
    assert all(is_feasible(x, inst) for x in op.inputs)


def test_slice_vertices():
    assert slice_vertices(3, ((F(-1), F(-1), F(1)),)) == [
        (F(0), F(1, 2), F(1, 2)),
        (F(0), F(1), F(0)),
        (F(1, 2), F(0), F(1, 2)),
        (F(1), F(0), F(0)),
    ]


def test_generated_inputs_feasible():
    for s in range(30):
        inst, op = random_instance(InstanceGenerator(seed=s, M=4, N=2, L=3, K=3))
        op.check(inst)
        assert not op.aggregate.is_zero()


def test_compositions():
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert sum(1 for _ in compositions(5, 3)) == 21


def test_reward_oracle_examples():
    inst = Instance.build([[-1, -1, 1]], alpha_q(2))
    r = grid_elicitability_oracle([1, 0, 1], inst, 4)
    assert isinstance(r, FoundReward) and r.nu[0] >= F(3, 4)
    inst2 = Instance.build([], alpha_q(F(3, 5)), M=3)
    assert isinstance(grid_elicitability_oracle([F(1, 2), F(1, 2), 0], inst2, 10), NotFound)
    one = Instance.build([], [[1, 2]], M=2)
    assert isinstance(grid_elicitability_oracle([0, 1], one, 5), FoundReward)


def test_direction_oracle_examples():
    inst2 = Instance.build([], alpha_q(F(3, 5)), M=3)
    assert isinstance(grid_direction_oracle([F(1, 2), F(1, 2), 0], inst2, 5), FoundDirection)
    inst3 = Instance.build([[1, 1, -1]], alpha_q(F(1, 5)))
    assert isinstance(grid_direction_oracle([0, 0, 1], inst3, 5), FoundDirection)
    assert isinstance(grid_direction_oracle([1, 0, 0], inst2, 5), NotFound)


def test_oracle_consistency_random():
    rng = random.Random(11)
    for s in range(25):
        inst, _ = random_instance(InstanceGenerator(seed=s, M=3, N=2, L=rng.randint(0, 2)))
        x = random_feasible_output(rng, inst)
        assert elicitability_consistency(x, inst, 4) == []


def test_cross_check_reference(ex_feasibility, ex_support, ex_binding, insufficient_support, insufficient_binding):
    for inst, op in (ex_feasibility, ex_support, ex_binding):
        rep = cross_check(op, inst, trials=5)
        assert rep.ok and rep.verdict == "expanding"
    for inst, op in (insufficient_support, insufficient_binding):
        rep = cross_check(op, inst, trials=10)
        assert rep.ok and rep.verdict == "not-expanding"
        assert rep.alphas_tested == 10


def test_cross_check_random():
    for s in range(25):
        inst, op = random_instance(InstanceGenerator(seed=100 + s, M=3, N=2, L=2, K=2))
        rep = cross_check(op, inst, trials=5, seed=s)
        assert rep.ok, rep.violations
