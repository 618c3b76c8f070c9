import random
from fractions import Fraction as F

import pytest

from aggelicit import lp


def test_textbook_optimum():
    res = lp.maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == lp.OPTIMAL
    assert res.x == (F(8, 5), F(6, 5))
    assert res.value == F(14, 5)
    assert res.duals == (F(2, 5), F(1, 5))


def test_unbounded_ray():
    res = lp.maximize([1, 0], [[-1, 1]], [0])
    assert res.status == lp.UNBOUNDED
    assert lp.check_result([1, 0], [[-1, 1]], [0], res)


def test_infeasible_farkas():
    A, b = [[1, 1], [-1, -1]], [1, -2]
    res = lp.maximize([0, 0], A, b)
    assert res.status == lp.INFEASIBLE
    assert lp.check_result([0, 0], A, b, res)


def test_floats_rejected():
    with pytest.raises(TypeError):
        lp.maximize([0.5], [[1]], [1])


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under the largest-coefficient rule
    c = [F(3, 4), -150, F(1, 50), -6]
    A = [[F(1, 4), -60, F(-1, 25), 9], [F(1, 2), -90, F(-1, 50), 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    res = lp.maximize(c, A, b)
    assert res.status == lp.OPTIMAL
    assert res.value == F(1, 20)
    assert lp.check_result(c, A, b, res)


def test_random_certificates_check():
    rng = random.Random(3)
    for _ in range(500):
        n, m = rng.randint(1, 4), rng.randint(1, 5)
        A = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
        b = [F(rng.randint(-3, 3)) for _ in range(m)]
        c = [F(rng.randint(-3, 3)) for _ in range(n)]
        assert lp.check_result(c, A, b, lp.maximize(c, A, b))
