"""Exact decision of "value < theta" for a Markov chain.

The utilities left of T determine a bottom line through (T, theta) that
they never cross. The value is below theta exactly when some u_t with
t > T falls strictly below that line. Comparing the line with the
asymptote of u settles every case except the one where they coincide,
which is as hard as Positivity; there the procedure searches up to a
horizon and otherwise hands back the residual instance.
"""
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .chains import asymptote, limit_distribution
from .errors import BudgetExceeded, RangeError
from .linalg import dot, mat_pow, vec_mat
from .model import MarkovChain, bidirac_with_expectation, to_rat
from .stopvalue import bidirac_value, step_cap


class Answer(enum.Enum):
    Yes = "Yes"
    No = "No"
    Unknown = "Unknown"


@dataclass(frozen=True)
class ExactInstance:
    chain: object
    T: Fraction
    theta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "T", to_rat(self.T))
        object.__setattr__(self, "theta", to_rat(self.theta))
        if self.T < 0:
            raise RangeError("T must be nonnegative")


@dataclass
class Verdict:
    answer: Answer
    witness: dict = field(default_factory=dict)
    residual: object = None


def _utilities(chain, upto):
    u, dist, acc = [], list(chain.mu), Fraction(0)
    for t in range(upto + 1):
        if t:
            dist = vec_mat(dist, chain.P)
        acc += dot(dist, chain.w)
        u.append(acc)
    return u


def bottom_line(chain, T, theta, u=None):
    """Steepest line through (T, theta) lying weakly below u_t for integer t < T.

    Returns (b, t1) where t1 is the first index touching the line.
    """
    T, theta = to_rat(T), to_rat(theta)
    if T <= 0:
        raise RangeError("bottom line needs T > 0")
    last = math.ceil(T) - 1
    if u is None:
        u = _utilities(chain, last)
    best = None
    for t in range(last + 1):
        slope = (u[t] - theta) / (t - T)
        if best is None or slope > best[0]:
            best = (slope, t)
    return best


def _yes(inst, u, t1, t2):
    T = inst.T
    if t1 == t2:
        val = u[t1]
        p1 = Fraction(1)
    else:
        val = bidirac_value(u, t1, t2, T)
        p1 = bidirac_with_expectation(t1, t2, T).p1
    assert val < inst.theta
    return Verdict(Answer.Yes, {"t1": t1, "t2": t2, "p1": p1, "value": val})


def exact_decide(inst, unknown_horizon=10**4, cap=None):
    chain, T, theta = inst.chain, inst.T, inst.theta
    cap = step_cap() if cap is None else cap
    if T == 0:
        u0 = dot(chain.mu, chain.w)
        if u0 < theta:
            return _yes(inst, [u0], 0, 0)
        return Verdict(Answer.No, {"certified_from": 0})
    start = math.ceil(T)
    u = _utilities(chain, start)
    if T.denominator == 1 and u[start] < theta:
        return _yes(inst, u, start, start)
    b, t1 = bottom_line(chain, T, theta, u)
    asy = asymptote(chain)
    s, d, y = asy.slope, asy.d, asy.bias
    # D_t = u_t - line(t) = (s - b) t + g[t mod d] - mu M^(t+1) y
    g = [c + b * T - theta for c in asy.intercepts]
    gmin = min(g)
    coincide = s == b and gmin == 0
    spread = (max(y) - min(y)) if y else Fraction(0)
    # the mu M^t - limit gap never grows, so its current size bounds all later errors
    Md = mat_pow(chain.P, d)
    pi0 = limit_distribution(MarkovChain(Md, chain.mu, chain.w))
    limits = [pi0]
    for _ in range(d - 1):
        limits.append(vec_mat(limits[-1], chain.P))
    n = chain.n
    dist = list(chain.mu)
    for _ in range(start):
        dist = vec_mat(dist, chain.P)
    acc = u[start]
    zeros = 0
    limit = unknown_horizon if coincide else cap
    t = start
    while True:
        line = b * (t - T) + theta
        if acc < line:
            return _yes(inst, _grow(u, chain, t), t1, t)
        nxt = vec_mat(dist, chain.P)
        e = dot(nxt, y) if y else Fraction(0)
        zeros = zeros + 1 if e == 0 else 0
        if zeros >= n:
            # an order-n linear recurrence with n consecutive zeros stays zero
            err = Fraction(0)
        else:
            lim = limits[(t + 1) % d]
            err = sum((abs(p - q) for p, q in zip(nxt, lim)), Fraction(0)) * spread / 2
        # the margin only stays ahead of the shrinking error while s >= b
        if s >= b and (s - b) * t + gmin - err >= 0:
            wit = {"certified_from": t, "slope": s, "b": b, "touch": t1}
            if s > b:
                # the error never exceeds spread(y), so the margin wins by this step
                wit["t_cross"] = max(start, math.ceil((spread - gmin) / (s - b)))
            return Verdict(Answer.No, wit)
        if t >= limit:
            break
        t += 1
        dist = nxt
        acc += dot(dist, chain.w)
    if coincide:
        return Verdict(Answer.Unknown, {"searched_to": t, "touch": t1}, _residual(chain, y))
    raise BudgetExceeded(f"no certificate up to step {t} (cap {cap})")


def _grow(u, chain, t):
    return u if len(u) > t else _utilities(chain, t)


def _residual(chain, y):
    from .reductions import embed_bias
    return embed_bias(chain, y)
