import itertools
import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from aggelicit.linsys import (
    EQ,
    GE,
    GT,
    LE,
    LT,
    LinearSystem,
    MotzkinCertificate,
    Optimum,
    Row,
    Unbounded,
    Witness,
    decide_feasible,
    optimize,
    project,
    section,
    verify_certificate,
)

Q = F(3, 5)

# budget-reducing directions of [1,0,0] meet the alpha(0.6) feature cone
EMPTY_SYSTEM = LinearSystem.from_rows(
    3,
    [
        ([1, 1, 1], LT),
        ([0, 1, 0], GE),
        ([0, 0, 1], GE),
        ([1, 0, Q], GE),
        ([0, 1, Q], GE),
    ],
)


def test_certificate_for_empty_intersection():
    res = decide_feasible(EMPTY_SYSTEM)
    assert isinstance(res, MotzkinCertificate)
    assert verify_certificate(EMPTY_SYSTEM, res)
    # frozen regression value
    assert res.weak_multipliers == (F(1), F(2, 5), F(1), F(0))
    assert res.strict_multipliers == (F(1),)


def test_hand_built_certificate():
    # 1*(1,1,1) + 1/3*(0,-1,0) + 0*(0,0,-1) + 1*(-1,0,-3/5) + 2/3*(0,-1,-3/5) = 0
    cert = MotzkinCertificate((F(1, 3), F(0), F(1), F(2, 3)), (F(1),))
    assert verify_certificate(EMPTY_SYSTEM, cert)


def test_zero_strict_multipliers_rejected():
    cert = MotzkinCertificate((F(1, 3), F(0), F(1), F(2, 3)), (F(0),))
    assert not verify_certificate(EMPTY_SYSTEM, cert)


def test_negative_weak_multiplier_rejected():
    cert = MotzkinCertificate((F(-1), F(0), F(0), F(0)), (F(1),))
    assert not verify_certificate(EMPTY_SYSTEM, cert)


def test_single_strict_row():
    res = decide_feasible(LinearSystem.from_rows(1, [([1], LT)]))
    assert res == Witness((F(-1),))


def test_support_example_witness():
    s = LinearSystem.from_rows(
        3, [([0, 0, 1], GE), ([1, 1, 1], LT), ([1, 0, Q], GE), ([0, 1, Q], GE)]
    )
    res = decide_feasible(s)
    assert isinstance(res, Witness)
    assert res.point == (F(-3, 5), F(-3, 5), F(1))


def test_equality_rows_take_signed_multipliers():
    s = LinearSystem.from_rows(2, [([1, -1], EQ), ([1, 0], LT), ([0, 1], GT)])
    res = decide_feasible(s)
    assert isinstance(res, MotzkinCertificate)
    assert verify_certificate(s, res)


def test_optimize_zero_objective():
    s = LinearSystem.from_rows(2, [([-1, 0], LE), ([0, -1], LE)])
    res = optimize([0, 0], s, ([1, 1], LE, 1))
    assert isinstance(res, Optimum) and res.value == 0


def test_optimize_unbounded():
    res = optimize([1], LinearSystem(1))
    assert isinstance(res, Unbounded) and res.ray[0] > 0


def test_optimize_agent_program():
    # maximize nu.(alpha x) for nu = [1, 0], alpha(2) over x3 <= x1 + x2, 1.x <= 2
    s = LinearSystem.from_rows(3, [([-1, -1, 1], LE), ([1, 0, 0], GE), ([0, 1, 0], GE), ([0, 0, 1], GE)])
    res = optimize([1, 0, 2], s, ([1, 1, 1], LE, 2))
    assert isinstance(res, Optimum)
    assert res.value == 3
    assert res.point == (F(1), F(0), F(1))


def test_project_reachable_example():
    # d + v in {1.w < 0, w2 >= 0}, v >= 0 ; eliminate v
    lifted = LinearSystem.from_rows(
        4, [([1, 1, 1, 1], LT), ([0, 1, 0, 1], GE), ([0, 0, 1, 0], GE), ([0, 0, 0, 1], GE)]
    )
    p = project(lifted, {2, 3})
    assert p.contains([-2, 1])
    # brute force over a v grid agrees on a sample of d
    grid = [F(k, 2) for k in range(4)]
    for d in itertools.product([F(k, 2) for k in range(-4, 3)], repeat=2):
        brute = any(lifted.contains(list(d) + [a, b]) for a in grid for b in grid)
        if brute:
            assert p.contains(d)


def test_project_untouched_variable():
    s = LinearSystem.from_rows(3, [([1, 1, 0], LT), ([1, -1, 0], LE)])
    p = project(s, {2})
    assert {(r.coeffs, r.rel) for r in p.rows} == {((F(1), F(1)), LT), ((F(1), F(-1)), LE)}


def _random_system(rng, n, rows):
    rels = [LE, GE, EQ, LT, GT]
    return LinearSystem.from_rows(
        n, [([rng.randint(-2, 2) for _ in range(n)], rng.choice(rels)) for _ in range(rows)]
    )


def test_projection_membership_crosscheck():
    rng = random.Random(11)
    checked = 0
    for _ in range(20):
        s = _random_system(rng, 4, rng.randint(2, 6))
        p = project(s, {2, 3})
        for _ in range(5):
            y = [F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(2)]
            exact = isinstance(decide_feasible(section(s, {0: y[0], 1: y[1]})), Witness)
            assert p.contains(y) == exact
            checked += 1
    assert checked == 100


def _l1_sphere(n, den):
    for m in itertools.product(range(-den, den + 1), repeat=n):
        if sum(abs(v) for v in m) == den:
            yield [F(v, den) for v in m]


def test_completeness_against_grid():
    rng = random.Random(5)
    for _ in range(120):
        n = rng.randint(1, 4)
        s = _random_system(rng, n, rng.randint(1, 6))
        res = decide_feasible(s)
        found = any(s.contains(p) for den in range(1, 5) for p in _l1_sphere(n, den))
        if found:
            assert isinstance(res, Witness)
        if isinstance(res, Witness):
            assert s.contains(res.point)
        else:
            assert verify_certificate(s, res)


coeff = st.integers(-2, 2)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_soundness_and_homogeneity(data):
    n = data.draw(st.integers(1, 5))
    k = data.draw(st.integers(1, 8))
    rows = [
        Row(tuple(data.draw(st.lists(coeff, min_size=n, max_size=n))), data.draw(st.sampled_from([LE, GE, EQ, LT, GT])))
        for _ in range(k)
    ]
    s = LinearSystem.from_rows(n, rows)
    res = decide_feasible(s)
    if isinstance(res, Witness):
        assert s.contains(res.point)
        lam = F(data.draw(st.integers(1, 9)), data.draw(st.integers(1, 9)))
        assert s.contains([lam * v for v in res.point])
    else:
        assert verify_certificate(s, res)
