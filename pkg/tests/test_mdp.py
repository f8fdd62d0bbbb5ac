import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from randgen import random_chain, random_mdp
from stoptime.errors import PreconditionError, RangeError
from stoptime.mdp import (back_edge_transform, estimate_value, evaluate_strategy, memory_alpha,
                          memory_example, three_component_example, is_uniform, mean_payoff, mec_decompose,
                          reward_bounds, strategy_utilities, uniformize)
from stoptime.model import MarkovChain, MarkovStrategy, Mdp
from stoptime.stopvalue import approx_value


def names(m, dec):
    return sorted(tuple(m.states[v] for v in e.vertices) for e in dec.mecs)


def test_three_component_end_components():
    m = three_component_example()
    assert names(m, mec_decompose(m)) == [("v0",), ("v1", "v2"), ("v3",)]


def test_single_self_loop_is_one_end_component():
    m = Mdp(["s"], ["a"], {(0, "a"): [1]}, [1], [0])
    dec = mec_decompose(m)
    assert len(dec.mecs) == 1 and dec.mecs[0].vertices == (0,)


def test_memory_example_end_components():
    # the v1 -> v2 -> v3 -> v1 loop leaks half its mass into the v4 cycle every
    # round, so only the three-cycles are closed under the available actions
    m, _ = memory_example(8)
    assert names(m, mec_decompose(m)) == [("v1'", "v2'", "v3'"), ("v4", "v5", "v6"), ("v4'", "v5'", "v6'")]


def test_three_component_gains_and_value():
    m = three_component_example()
    sol = mean_payoff(m)
    assert sorted(sol.per_ec_gain) == [-2, -1, 1]
    assert sol.value_from(m.mu) == 0


def test_zero_weights_have_zero_gain():
    mdp = random_mdp(random.Random(2))
    flat = Mdp(mdp.states, mdp.actions, mdp.theta, mdp.mu, [0] * mdp.n)
    assert all(g == 0 for g in mean_payoff(flat).value)


def test_best_cycle_in_single_component():
    # at s0: action a stays (weight 3/2 per step), action b goes to s1 and back (average 1)
    theta = {(0, "a"): [1, 0], (0, "b"): [0, 1], (1, "a"): [1, 0]}
    m = Mdp(["s0", "s1"], ["a", "b"], theta, [1, 0], [F(3, 2), F(1, 2)])
    sol = mean_payoff(m)
    assert list(sol.value) == [F(3, 2), F(3, 2)]
    assert sol.policy[0] == "a"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_mean_payoff_beats_every_pure_policy(seed):
    import itertools
    from stoptime.chains import gain_bias
    m = random_mdp(random.Random(seed), n_max=4)
    sol = mean_payoff(m)
    choices = [m.actions_at(v) for v in range(m.n)]
    best = None
    for pick in itertools.product(*choices):
        g = gain_bias(m.chain_for(dict(enumerate(pick)))).gain
        best = list(g) if best is None else [max(a, b) for a, b in zip(best, g)]
    assert list(sol.value) == best


def test_back_edge_weight_and_shape():
    m = three_component_example()
    m = Mdp(m.states, m.actions, m.theta, m.mu, [q - 1 for q in m.w])  # all gains <= 0
    out = back_edge_transform(m)
    assert out.states[-1] == "v_lt0"
    assert out.w[-1] == -F(16) * m.W / m.alpha**4
    assert len(mec_decompose(out).mecs) == 1


def test_uniformize_component_weights_are_gains():
    m = three_component_example()
    out = uniformize(m)
    assert is_uniform(out)
    weights = sorted({out.w[v] for e in mec_decompose(out).mecs for v in e.vertices})
    assert weights == [-2, -1, 1]
    assert out.n <= 3 * m.n
    assert mean_payoff(out).value_from(out.mu) == 0


def test_uniformize_rejects_positive_value():
    m = Mdp(["s"], ["a"], {(0, "a"): [1]}, [1], [1])
    with pytest.raises(PreconditionError):
        uniformize(m)


def test_uniform_component_stays_uniform():
    m = Mdp(["s", "t"], ["a"], {(0, "a"): [0, 1], (1, "a"): [1, 0]}, [1, 0], [-1, -1])
    out = uniformize(m)
    assert is_uniform(out)
    assert mean_payoff(out).value_from(out.mu) == -1


def small_mdp():
    return Mdp(["s", "t"], ["a"], {(0, "a"): [F(1, 2), F(1, 2)], (1, "a"): [0, 1]}, [1, 0], [1, 0])


def test_bound_formulas_small_case():
    rb = reward_bounds(small_mdp(), 1, F(1, 10))
    assert rb.t0 == 3 * 2**5 * 2**4 == 1536
    assert rb.chain_bound == 4 * 2 * 1 * 1536
    B = 12 * 2**8 * 2 ** (8 + 2) + 2**3 * 3**11 * 2**16 * 2 ** (28 * 8 + 8)
    # bounds carry 30 significant digits
    assert abs(rb.B_star / B - 1) < 1e-25
    assert abs(rb.t_star / ((2 * mpmath.mpf(B) + mpmath.mpf(1) / 10) * 10) - 1) < 1e-25


def test_switch_time_tends_to_T_for_huge_eps():
    rb = reward_bounds(small_mdp(), 3, F(10**4000))
    assert abs(rb.t_star - 3) < 1e-6


def test_bounds_reject_bad_eps():
    with pytest.raises(RangeError):
        reward_bounds(small_mdp(), 1, 0)


def test_memory_strategy_constants():
    assert memory_alpha(0) == F(1, 4)
    assert memory_alpha(1) == F(1, 6)


def test_memory_optimal_strategy_keeps_utilities_at_zero():
    m, sigma = memory_example(horizon=40)
    assert all(q == 0 for q in strategy_utilities(m, sigma, 40))
    br = evaluate_strategy(m, sigma, 2, F(1, 10))
    assert br.lower <= 0 <= br.upper and br.width <= F(2, 10)


@pytest.mark.parametrize("a0", [F(3, 8), F(1, 8)])
def test_memory_perturbed_strategy_goes_negative(a0):
    m, sigma = memory_example(horizon=40, alpha0=a0)
    assert min(strategy_utilities(m, sigma, 40)) < 0
    assert evaluate_strategy(m, sigma, 2, F(1, 10**6)).upper < 0


def test_zero_weight_mdp_values_zero():
    m = random_mdp(random.Random(8))
    flat = Mdp(m.states, m.actions, m.theta, m.mu, [0] * m.n)
    sigma = MarkovStrategy(3, {}, {v: flat.actions_at(v)[0] for v in range(flat.n)})
    assert evaluate_strategy(flat, sigma, F(5, 2), F(1, 100)).estimate == 0


def test_chain_as_mdp_matches_approx_value():
    c = random_chain(random.Random(12), n_max=4, den=10)
    m = Mdp([f"s{i}" for i in range(c.n)], ["a"], {(v, "a"): list(c.P[v]) for v in range(c.n)}, list(c.mu), list(c.w))
    br = estimate_value(m, 3, F(1, 100), t_cap=3, restarts=1)
    ref = approx_value(c, 3, F(1, 1000))
    assert abs(br.estimate - ref.estimate) <= F(1, 100)
    assert br.lower <= ref.upper


def test_equal_actions_make_strategy_irrelevant():
    theta = {(0, "a"): [F(1, 2), F(1, 2)], (0, "b"): [F(1, 2), F(1, 2)], (1, "a"): [1, 0], (1, "b"): [1, 0]}
    m = Mdp(["s", "t"], ["a", "b"], theta, [1, 0], [2, -1])
    vals = {estimate_value(m, F(5, 2), F(1, 100), t_cap=4, restarts=2, seed=s).estimate for s in range(3)}
    assert len(vals) == 1


def test_optimizer_is_deterministic():
    m, _ = memory_example(8)
    a = estimate_value(m, 2, F(1, 10), t_cap=6, restarts=2, seed=5)
    b = estimate_value(m, 2, F(1, 10), t_cap=6, restarts=2, seed=5)
    assert a.estimate == b.estimate
    assert a.upper == float("inf") and not a.info["t_cap_reaches_t_star"]
