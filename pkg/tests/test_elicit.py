import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggelicit.cones import normalize_direction
from aggelicit.errors import ZeroVector
from aggelicit.elicit import (
    ImprovingDirection,
    InfeasibleOutput,
    KKTCertificate,
    best_response,
    decide_elicitable,
    elicitability_system,
    is_best_response,
    verify_improving_direction,
    verify_kkt,
)
from aggelicit.linsys import verify_certificate
from aggelicit.model import Instance, LinearReward, alpha_q, as_output
from aggelicit.oracle import InstanceGenerator, random_feasible_output, random_instance


@pytest.fixture
def inst31():
    return Instance.build([[-1, -1, 1]], alpha_q(2))


@pytest.fixture
def inst32():
    return Instance.build([], alpha_q(F(3, 5)), M=3)


@pytest.fixture
def inst33():
    return Instance.build([[1, 1, -1]], alpha_q(F(1, 5)))


def test_input_of_feasibility_example(inst31):
    v = decide_elicitable([1, 0, 1], inst31)
    assert v.elicitable
    assert v.reward.budget == 2
    assert verify_kkt([1, 0, 1], v.reward, v.kkt, inst31)
    assert is_best_response([1, 0, 1], v.reward, inst31)
    assert verify_certificate(elicitability_system(as_output([1, 0, 1]), inst31), v.emptiness.certificate)


def test_infeasible_aggregate(inst31):
    v = decide_elicitable([0, 0, 1], inst31)
    assert not v.elicitable and isinstance(v.reason, InfeasibleOutput)


def test_support_example(inst32):
    v = decide_elicitable([F(1, 2), F(1, 2), 0], inst32)
    assert isinstance(v.reason, ImprovingDirection)
    assert normalize_direction(v.reason.d) == normalize_direction([F(-3, 5), F(-3, 5), 1])
    chk = verify_improving_direction([F(1, 2), F(1, 2), 0], v.reason.d, inst32)
    assert chk and chk.epsilon > 0


def test_support_example_inputs(inst32):
    v = decide_elicitable([1, 0, 0], inst32)
    assert v.elicitable
    assert v.reward.nu == (F(1), F(0))  # canonical least-weight reward
    assert decide_elicitable([0, 1, 0], inst32).elicitable


def test_binding_example(inst33):
    v = decide_elicitable([0, 0, 1], inst33)
    assert normalize_direction(v.reason.d) == normalize_direction([F(1, 5), F(1, 5), -1])
    assert verify_improving_direction([0, 0, 1], v.reason.d, inst33)
    for x in ([1, 0, 1], [0, 1, 1]):
        assert decide_elicitable(x, inst33).elicitable


def test_zero_vector_raises(inst31):
    with pytest.raises(ZeroVector):
        decide_elicitable([0, 0, 0], inst31)


def test_kkt_examples(inst31):
    reward = LinearReward([1, 0], 2)
    kkt = KKTCertificate(F(1), (), ())
    # alpha^T nu = (1, 2, 2) - 1 cannot vanish without multipliers
    assert not verify_kkt([1, 0, 1], reward, kkt, inst31)
    v = decide_elicitable([1, 0, 1], inst31)
    assert verify_kkt([1, 0, 1], v.reward, v.kkt, inst31)
    # the same multipliers do not certify a different vector
    assert not verify_kkt([0, 1, 1], v.reward, v.kkt, inst31)


def test_best_response_value(inst31):
    br = best_response(LinearReward([1, 0], 2), inst31)
    assert br.value == 3
    assert br.point == (F(1), F(0), F(1))


def test_verify_direction_rejects():
    inst = Instance.build([], alpha_q(F(3, 5)), M=3)
    x = [F(1, 2), F(1, 2), 0]
    assert not verify_improving_direction(x, [1, 1, 1], inst)  # sum not negative
    assert not verify_improving_direction(x, [-1, 0, 0], inst)  # lowers feature 1
    assert not verify_improving_direction(x, [-1, -1], inst)


def _random_pairs(n, seed):
    rng = random.Random(seed)
    for s in range(n):
        gen = InstanceGenerator(seed=seed * 1000 + s, M=rng.randint(2, 4), N=rng.randint(1, 3), L=rng.randint(0, 3))
        inst, _ = random_instance(gen)
        x = random_feasible_output(rng, inst)
        if any(x):
            yield inst, x


def test_certificates_on_random_outputs():
    for inst, x in _random_pairs(60, 3):
        v = decide_elicitable(x, inst)
        if v.elicitable:
            assert verify_certificate(elicitability_system(as_output(x), inst), v.emptiness.certificate)
            assert verify_kkt(x, v.reward, v.kkt, inst)
            assert is_best_response(x, v.reward, inst)
            assert v.reward.budget == sum(x)
        else:
            assert verify_improving_direction(x, v.reason.d, inst)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9), st.integers(1, 9))
def test_scale_invariance(seed, p, q):
    rng = random.Random(seed)
    inst, _ = random_instance(InstanceGenerator(seed=seed, M=3, N=2, L=rng.randint(0, 2)))
    x = random_feasible_output(rng, inst)
    lam = F(p, q)
    a = decide_elicitable(x, inst)
    b = decide_elicitable([lam * t for t in x], inst)
    assert a.elicitable == b.elicitable
    if a.elicitable:
        assert b.reward.budget == lam * a.reward.budget
