"""
Worst-case stopping on a small Markov chain
===========================================

An adversary picks when to stop collecting rewards, subject only to the
mean stopping time being T. The worst choice mixes two stopping times,
so the value is the lowest chord of the utility sequence at T.
"""
from fractions import Fraction as F

from stoptime import MarkovChain, approx_value, asymptote, decompose, gain_bias, utility_prefix

# a transient start that pays 3, then a two-state class paying +1 / -2
P = [[0, F(1, 2), F(1, 2)],
     [0, F(3, 4), F(1, 4)],
     [0, F(1, 2), F(1, 2)]]
chain = MarkovChain(P, [1, 0, 0], [3, 1, -2])

dec = decompose(chain)
print("transient:", dec.transient, "classes:", dec.classes, "periods:", dec.periods)

gb = gain_bias(chain)
print("gain per step:", gb.per_class_gain[0], " bias:", [str(y) for y in gb.bias])

# utilities approach the line slope * t + intercept from either side
a = asymptote(chain)
u = utility_prefix(chain, 10)
for t in range(11):
    print(f"t={t:2d}  u_t={float(u[t]):8.4f}  line={float(a.line(t)):8.4f}")

# the value sits below every single point u_T, since mixing helps the adversary
for T in (F(1), F(5, 2), F(6)):
    br = approx_value(chain, T, F(1, 10**6))
    t1, t2 = br.info["witness"]
    print(f"T={T}: value ~ {float(br.estimate):.6f} using stopping times {t1} and {t2 if t2 is not None else 'far away'}")
