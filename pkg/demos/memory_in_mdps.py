"""
An MDP where the best strategy needs unbounded memory
=====================================================

Two halves of the MDP carry opposite reward cycles. Sending the fraction
alpha_k = 1/(2 + 2^(k+1)) of the lower mass into its cycle at the k-th
visit cancels the upper half exactly, keeping every utility at 0. Any
other first choice lets some utility dip below 0.
"""
from fractions import Fraction as F

from stoptime import estimate_value, evaluate_strategy, memory_example, mean_payoff, mec_decompose
from stoptime.mdp import strategy_utilities

mdp, sigma = memory_example(horizon=40)
print("end components:", [[mdp.states[v] for v in e.vertices] for e in mec_decompose(mdp).mecs])
print("mean-payoff value:", mean_payoff(mdp).value_from(mdp.mu))

print("optimal strategy utilities:", set(strategy_utilities(mdp, sigma, 40)))
for a0 in (F(3, 8), F(1, 8)):
    m, s = memory_example(horizon=40, alpha0=a0)
    u = strategy_utilities(m, s, 40)
    print(f"alpha_0={a0}: lowest utility {min(u)}, value {evaluate_strategy(m, s, 2, F(1, 10**6)).estimate}")

# a memory-bounded search only gets close to 0
br = estimate_value(mdp, 2, F(1, 20), t_cap=20, restarts=16, seed=0)
print(f"optimizer: certified lower bound {float(br.lower):.4f}, upper bound {br.upper}")
