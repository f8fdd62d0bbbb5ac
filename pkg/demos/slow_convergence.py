"""
How slowly can a chain settle?
==============================

The approximation needs mu M^t to be close to its limit. This family of
chains only reaches its absorbing vertex after n lucky steps in a row, so
the distance to the limit shrinks like (1 - alpha^n)^(t/n).
"""
from fractions import Fraction as F

from stoptime import approx_value, convergence_bound, lower_bound_family

n, alpha = 3, F(1, 4)
chain = lower_bound_family(n, alpha)
print("vertices:", chain.states)

dist = list(chain.mu)
for t in range(0, 61):
    if t % 10 == 0:
        gap = 1 - dist[n]
        print(f"t={t:2d}  distance={float(gap):.5f}  bound={(1 - float(alpha)**n) ** (t / n):.5f}")
    dist = [sum(dist[i] * chain.P[i][j] for i in range(chain.n)) for j in range(chain.n)]

# the a-priori switch time is astronomically large; the measured one is not
cb = convergence_bound(chain.n, chain.alpha, 1, F(1, 10**4))
print("a-priori steps before switching to the limit:", f"{float(cb.B):.3e}")
weighted = chain.with_weights([0, 0, 0, 1, -1, -1])
br = approx_value(weighted, 4, F(1, 10**4))
print("measured switch step:", br.info["switch"], " value:", float(br.estimate))
