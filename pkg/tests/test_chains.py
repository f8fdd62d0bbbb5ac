import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from randgen import random_chain, random_rational_chain
from stoptime.chains import (absorption_probs, asymptote, convergence_bound, decompose, gain_bias,
                             limit_distribution, steady_state, utility_prefix, utility_prefix_float)
from stoptime.errors import PeriodTooLarge
from stoptime.model import MarkovChain
from stoptime.stopvalue import lower_bound_family

HALF = [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]
SWAP = [[0, 1], [1, 0]]


def test_irreducible_aperiodic_classes():
    dec = decompose(MarkovChain(HALF, [1, 0], [0, 0]))
    assert dec.classes == ((0, 1),) and dec.periods == (1,) and dec.transient == ()


def test_two_cycle_has_period_two():
    dec = decompose(MarkovChain(SWAP, [1, 0], [0, 0]))
    assert dec.periods == (2,) and dec.period_lcm == 2


def test_slow_family_classes():
    c = lower_bound_family(3, F(1, 4))
    dec = decompose(c)
    assert [c.states[v] for v in dec.transient] == ["0", "1", "2", "1b", "2b"]
    assert [[c.states[v] for v in k] for k in dec.classes] == [["3"]]
    assert dec.periods == (1,)


@pytest.mark.parametrize("P, pi", [(HALF, (F(1, 2), F(1, 2))), (SWAP, (F(1, 2), F(1, 2))),
                                   ([[F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]], (F(2, 3), F(1, 3)))])
def test_steady_states(P, pi):
    assert tuple(steady_state(MarkovChain(P, [1, 0], [0, 0]), 0)) == pi


def test_absorption_from_looping_vertex():
    P = [[F(1, 8), 0, F(1, 8), F(3, 4)], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    c = MarkovChain(P, [1, 0, 0, 0], [0] * 4)
    dec = decompose(c)
    probs = dict(zip(dec.classes, absorption_probs(c, dec)))
    assert probs == {(1, 2): F(1, 7), (3,): F(6, 7)}


def test_absorption_split_initial_mass():
    c = MarkovChain([[1, 0], [0, 1]], [F(1, 2), F(1, 2)], [0, 0])
    assert absorption_probs(c) == [F(1, 2), F(1, 2)]


def test_gain_bias_examples():
    gb = gain_bias(MarkovChain(HALF, [1, 0], [1, -1]))
    assert gb.gain == (0, 0) and gb.bias == (1, -1)
    gb = gain_bias(MarkovChain(HALF, [1, 0], [0, 0]))
    assert gb.gain == (0, 0) and gb.bias == (0, 0)
    gb = gain_bias(MarkovChain(HALF, [1, 0], [3, 3]))
    assert gb.gain == (3, 3) and gb.bias == (0, 0)


def test_utility_prefix_examples():
    assert utility_prefix(MarkovChain(HALF, [1, 0], [0, 0]), 5) == [0] * 6
    assert utility_prefix(MarkovChain(HALF, [1, 0], [1, -1]), 8) == [1] * 9
    assert utility_prefix(MarkovChain([[1]], [1], [F(5, 2)]), 4) == [F(5, 2) * (t + 1) for t in range(5)]


def test_float_prefix_tracks_exact():
    c = random_rational_chain(random.Random(5), n_max=5)
    exact = utility_prefix(c, 40)
    approx = utility_prefix_float(c, 40)
    assert max(abs(float(a) - b) for a, b in zip(exact, approx)) < 1e-9


def test_asymptote_flat_chain():
    a = asymptote(MarkovChain(HALF, [1, 0], [1, -1]))
    assert a.slope == 0 and a.intercepts == (1,)
    assert asymptote(MarkovChain(HALF, [1, 0], [0, 0])).intercepts == (0,)


def test_asymptote_two_cycle():
    c = MarkovChain(SWAP, [1, 0], [1, 0])
    a = asymptote(c)
    assert a.slope == F(1, 2) and a.d == 2
    u = utility_prefix(c, 20)
    assert u[:6] == [1, 1, 2, 2, 3, 3]
    assert all(u[t] == a.line(t) for t in range(21))


def test_period_cap():
    with pytest.raises(PeriodTooLarge):
        asymptote(MarkovChain(SWAP, [1, 0], [1, 0]), cap=1)


def periodic_chain(rng):
    """Cycles of different lengths joined by transient vertices."""
    lens = [rng.randint(1, 4) for _ in range(rng.randint(1, 2))]
    n = sum(lens) + 1
    P = [[F(0)] * n for _ in range(n)]
    start = 1
    heads = []
    for L in lens:
        for i in range(L):
            P[start + i][start + (i + 1) % L] = F(1)
        heads.append(start)
        start += L
    for h in heads:
        P[0][h] = F(1, len(heads) + 1)
    P[0][0] = F(1, len(heads) + 1)
    w = [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)]
    return MarkovChain(P, [F(int(i == 0)) for i in range(n)], w)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_asymptote_deviation_identity(seed, periodic):
    """u_t minus the asymptote is exactly -mu M^(t+1) bias."""
    rng = random.Random(seed)
    c = periodic_chain(rng) if periodic else random_chain(rng, n_max=5, den=6)
    a = asymptote(c)
    u = utility_prefix(c, 30)
    dist = list(c.mu)
    for t in range(31):
        dist = [sum(dist[i] * c.P[i][j] for i in range(c.n)) for j in range(c.n)]
        dev = sum((p * y for p, y in zip(dist, a.bias)), F(0))
        assert u[t] - a.line(t) == -dev


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_limit_distribution_is_stationary(seed):
    c = random_chain(random.Random(seed), n_max=5, den=10)
    dec = decompose(c)
    if dec.period_lcm != 1:
        return
    lim = limit_distribution(c, dec)
    assert sum(lim) == 1
    assert [sum(lim[i] * c.P[i][j] for i in range(c.n)) for j in range(c.n)] == lim


def test_convergence_constant_small_case():
    cb = convergence_bound(2, F(1, 2), 1, 1)
    assert float(cb.K3) == pytest.approx((1 - 2**-8) ** (1 / 12), rel=1e-15)
    assert abs(float(cb.K3) - 0.999674) < 5e-7


def test_no_steps_needed_at_trivial_tolerance():
    assert convergence_bound(2, F(1, 2), 1, 2 * 1 * 3).B == 0


def test_halving_eps_adds_log_two_steps():
    a = convergence_bound(2, F(1, 2), 1, mpmath.mpf("1e-3"))
    b = convergence_bound(2, F(1, 2), 1, mpmath.mpf("5e-4"))
    step = math.ceil(math.log(2) / -float(a.log_K3))
    assert b.B - a.B in (step - 1, step, step + 1)


def test_tiny_alpha_stays_finite():
    cb = convergence_bound(5, F(1, 10), 5, mpmath.mpf("1e-4"))
    assert cb.log_K3 < 0 and cb.B > 10**100
