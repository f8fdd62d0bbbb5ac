"""
From matrix powers to stopping values
=====================================

Deciding whether the value drops below a threshold is at least as hard as
asking whether mu M^t z ever exceeds 1. This walks through that reduction
and the decision procedure on both outcomes.
"""
from fractions import Fraction as F

from stoptime import (AgtInstance, MarkovReachInstance, brute_force_Agt, exact_decide,
                      reduce_Agt_to_exact, reduce_markovreach_to_positivity, utility_prefix)

M = [[F(7, 16), F(9, 16)], [F(9, 16), F(7, 16)]]
for z in ([0, 2], [2, 0], [1, 1]):
    inst = AgtInstance(M, z)
    exact = reduce_Agt_to_exact(inst)
    verdict = exact_decide(exact, unknown_horizon=300)
    print(f"z={z}: first t with mu M^t z > 1 is {brute_force_Agt(inst, 50)}; "
          f"reduced instance says {verdict.answer.value}")
    print("   utilities:", [str(q) for q in utility_prefix(exact.chain, 5)], " threshold:", exact.theta)

# reachability questions become sign questions about an integer matrix power
pos = reduce_markovreach_to_positivity(MarkovReachInstance([[0, 1], [1, 0]], F(1, 2)))
print("positivity target", pos.target, "entries:", [pos.entry(t) for t in range(2, 7)])
