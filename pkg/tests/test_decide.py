import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from randgen import random_agt, random_chain
from stoptime.chains import utility_prefix
from stoptime.decide import Answer, ExactInstance, bottom_line, exact_decide
from stoptime.errors import RangeError
from stoptime.model import MarkovChain
from stoptime.reductions import AgtInstance, brute_force_Agt, reduce_Agt_to_exact
from stoptime.stopvalue import approx_value, bidirac_value

FLAT = MarkovChain([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]], [1, 0], [1, -1])


def test_bottom_line_examples():
    assert bottom_line(None, 2, 5, u=[5, 5, 5])[0] == 0
    assert bottom_line(None, 1, 0, u=[0, 1]) == (0, 0)
    assert bottom_line(None, F(3, 2), 0, u=[3, 1]) == (-2, 0)


def test_bottom_line_needs_positive_T():
    with pytest.raises(RangeError):
        bottom_line(FLAT, 0, 1)


def test_flat_chain_at_its_value_is_no():
    v = exact_decide(ExactInstance(FLAT, 2, 1))
    assert v.answer is Answer.No


def test_flat_chain_above_its_value_is_yes():
    v = exact_decide(ExactInstance(FLAT, 2, 2))
    assert v.answer is Answer.Yes
    assert v.witness["t1"] == v.witness["t2"] == 2 and v.witness["value"] == 1


def test_zero_horizon_compares_first_reward():
    assert exact_decide(ExactInstance(FLAT, 0, 1)).answer is Answer.No
    assert exact_decide(ExactInstance(FLAT, 0, F(3, 2))).answer is Answer.Yes


def test_negative_T_rejected():
    with pytest.raises(RangeError):
        ExactInstance(FLAT, -1, 0)


def test_reduced_yes_seed_is_yes():
    rng = random.Random(3)
    for _ in range(20):
        M, z = random_agt(rng)
        inst = AgtInstance(M, z)
        if brute_force_Agt(inst, 200) is not None:
            assert exact_decide(reduce_Agt_to_exact(inst)).answer is Answer.Yes
            return
    pytest.fail("no seeded Yes instance found")


def test_unknown_carries_residual():
    leak = F(1, 2)
    P = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1 - leak, leak], [0, 0, 0, 1]]
    c = MarkovChain(P, [1, 0, 0, 0], [0, 1, -leak, 0])
    v = exact_decide(ExactInstance(c, 1, 0), unknown_horizon=200)
    assert v.answer is Answer.Unknown
    chain, z = v.residual
    assert chain.n == 2 * c.n and set(z) <= {0, 1, 2}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.fractions(-3, 3))
def test_verdict_agrees_with_value_bracket(seed, offset):
    rng = random.Random(seed)
    c = random_chain(rng, n_max=4, den=10)
    T = F(rng.randint(1, 16), rng.choice([1, 2, 3]))
    br = approx_value(c, T, F(1, 10**6))
    theta = br.estimate + offset.limit_denominator(100)
    v = exact_decide(ExactInstance(c, T, theta), unknown_horizon=500)
    if v.answer is Answer.Yes:
        w = v.witness
        u = utility_prefix(c, w["t2"])
        val = u[w["t1"]] if w["t1"] == w["t2"] else bidirac_value(u, w["t1"], w["t2"], T)
        assert val == w["value"] < theta
        assert br.lower < theta
    elif v.answer is Answer.No:
        assert br.upper >= theta
