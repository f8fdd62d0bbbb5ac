"""Worst-case expected utility under a stopping time with fixed mean.

The value of a utility sequence u at mean T is the infimum of
sum delta(t) u_t over stopping distributions delta with mean T. Two-point
distributions suffice, so the value is the lowest chord of the point
set {(t, u_t)} evaluated at T.
"""
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .chains import convergence_bound, decompose, limit_distribution, utility_prefix
from .errors import BudgetExceeded, RangeError
from .linalg import dot, mat_pow, vec_mat
from .model import MarkovChain, Method, StoppingDistribution, ValueBracket, expected_utility, to_rat

STEP_CAP = 10**8


def step_cap():
    return int(os.environ.get("STOPTIME_STEP_CAP", STEP_CAP))


@dataclass(frozen=True)
class UPSeq:
    """Ultimately periodic weight word A.C^omega; u_t sums its first t+1 letters."""
    A: tuple
    C: tuple

    def __post_init__(self):
        if len(self.C) == 0:
            raise ValueError("cycle must be nonempty")
        object.__setattr__(self, "A", tuple(to_rat(q) for q in self.A))
        object.__setattr__(self, "C", tuple(to_rat(q) for q in self.C))

    @property
    def S_A(self):
        return sum(self.A, Fraction(0))

    @property
    def S_C(self):
        return sum(self.C, Fraction(0))

    @property
    def M_C(self):
        return self.S_C / len(self.C)

    def letter(self, i):
        if i < len(self.A):
            return self.A[i]
        return self.C[(i - len(self.A)) % len(self.C)]

    def prefix(self, H):
        return list(accumulate((self.letter(i) for i in range(H + 1)), initial=None))

    def prefix_scaled(self, H):
        """Integer prefix U and denominator D with u_t = U[t] / D."""
        D = math.lcm(*(q.denominator for q in self.A + self.C))
        a = [int(q * D) for q in self.A]
        c = [int(q * D) for q in self.C]
        letters = a + c * ((H + 1 - len(a)) // len(c) + 1)
        return list(accumulate(letters[:H + 1])), D


def bidirac_value(u, t1, t2, T):
    T = to_rat(T) if not isinstance(T, float) else T
    if not (0 <= t1 <= T <= t2):
        raise RangeError(f"need t1 <= T <= t2, got {t1}, {T}, {t2}")
    if t1 == t2:
        return u[t1]
    return u[t1] + (T - t1) / (t2 - t1) * (u[t2] - u[t1])


def _exact_argmin(num, den, fl, tol):
    """Index of the least num/den (smallest index on ties), screened by floats."""
    m = fl.min()
    cand = np.flatnonzero(fl <= m + tol * (1 + abs(m)))
    best = int(cand[np.argmin(fl[cand])])
    nc = num[cand]
    dc = den[cand]
    while True:
        lhs = nc * den[best]
        rhs = num[best] * dc
        smaller = cand[lhs < rhs]
        if len(smaller) == 0:
            break
        best = int(smaller[np.argmin(fl[smaller])])
    lhs = nc * den[best]
    rhs = num[best] * dc
    return int(cand[lhs == rhs].min())


def best_chord(u, uf, T, t1_max, t2_lo, t2_hi):
    """Least chord value at T over t1 <= t1_max, t2_lo <= t2 <= t2_hi.

    u holds exact values (object array of int or Fraction), uf the floats.
    Returns (value numerator-free exact value, t1, t2) or None.
    """
    best = None
    for t1 in range(0, t1_max + 1):
        if t1 == T:
            cand = (u[t1], t1, t1)
        else:
            lo = max(t2_lo, t1 + 1)
            if lo > t2_hi:
                continue
            num = u[lo:t2_hi + 1] - u[t1]
            den = np.arange(lo - t1, t2_hi + 1 - t1, dtype=object)
            fl = (uf[lo:t2_hi + 1] - uf[t1]) / np.arange(lo - t1, t2_hi + 1 - t1)
            k = _exact_argmin(num, den, fl, 1e-9)
            t2 = lo + k
            val = u[t1] + (T - t1) * Fraction(num[k]) / (t2 - t1)
            cand = (val, t1, t2)
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def _limit_term(u, slope, T, t1_max):
    best = None
    for t1 in range(0, t1_max + 1):
        val = u[t1] + slope * (T - t1)
        if best is None or val < best[0]:
            best = (val, t1, None)
    return best


def _pick(a, b):
    """Lower value wins; ties by smaller t1, then smaller t2 (None is infinity)."""
    if b is None:
        return a
    if a is None:
        return b
    if a[0] != b[0]:
        return a if a[0] < b[0] else b
    key = lambda c: (c[1], math.inf if c[2] is None else c[2])
    return a if key(a) <= key(b) else b


def val_cycle(seq, T, witness=False):
    """Exact value of the ultimately periodic sequence seq at mean T.

    With witness=True also returns (t1, t2); t2 is None when the infimum is
    only approached by pushing the second support point to infinity.
    """
    T = to_rat(T)
    if T < 0:
        raise RangeError("T must be nonnegative")
    L = len(seq.A) + len(seq.C)
    u = np.array(seq.prefix(L), dtype=object)
    uf = u.astype(float)
    if T >= L:
        best = _limit_term(u, seq.M_C, T, L)
    else:
        t1_max = math.floor(T)
        e1 = best_chord(u, uf, T, t1_max, math.ceil(T), L)
        e2 = _limit_term(u, seq.M_C, T, t1_max)
        best = _pick(e1, e2)
    if witness:
        return best[0], best[1], best[2]
    return best[0]


def oracle_prefix(u, T, slope, exact=True):
    """Brute-force bracket over a finite prefix u_0..u_H.

    upper is the least chord with both support points inside the prefix,
    lower additionally allows the far point to escape with asymptotic
    slope `slope`.
    """
    T = to_rat(T)
    H = len(u) - 1
    if exact:
        ue = np.array(u, dtype=object)
        uf = ue.astype(float)
    else:
        uf = np.asarray(u, dtype=float)
        ue = uf
    t1_max = math.floor(T)
    if exact:
        up = best_chord(ue, uf, T, t1_max, math.ceil(T), H)
    else:
        up = _float_best_chord(uf, float(T), t1_max, math.ceil(T), H)
    lim = _limit_term(ue if exact else uf, slope if exact else float(slope), T if exact else float(T), t1_max)
    lower = min(up[0], lim[0])
    return ValueBracket(lower, lower, up[0], Method.Oracle, {"upper_witness": up[1:], "H": H})


def _float_best_chord(uf, T, t1_max, t2_lo, t2_hi):
    best = None
    for t1 in range(t1_max + 1):
        if t1 == T:
            cand = (uf[t1], t1, t1)
        else:
            lo = max(t2_lo, t1 + 1)
            t2 = np.arange(lo, t2_hi + 1)
            vals = uf[t1] + (T - t1) * (uf[lo:] - uf[t1]) / (t2 - t1)
            k = int(np.argmin(vals))
            cand = (float(vals[k]), t1, lo + k)
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def oracle_value(seq, T, H):
    """Independent brute-force bracket for val_cycle, exact in rationals."""
    T = to_rat(T)
    L = len(seq.A) + len(seq.C)
    if H < L + math.ceil(T):
        raise RangeError(f"H={H} below |A|+|C|+ceil(T)={L + math.ceil(T)}")
    U, D = seq.prefix_scaled(H)
    ue = np.array(U, dtype=object)
    uf = np.array(U, dtype=float)
    t1_max = math.floor(T)
    up = best_chord(ue, uf, T, t1_max, math.ceil(T), H)
    upper = Fraction(up[0]) / D
    lim = min(Fraction(U[t1], D) + seq.M_C * (T - t1) for t1 in range(t1_max + 1))
    lower = min(upper, lim)
    return ValueBracket(lower, lower, upper, Method.Oracle, {"upper_witness": up[1:], "H": H})


def _float_limit_gap(mu_f, Md_f, pi0_f, spread, n, k_max, eta):
    """Least k <= k_max at which the measured increment error is <= eta.

    Distances to the limit never grow under a stochastic matrix, so the
    first k that passes certifies every later step. Returns (k, err).
    """
    unit = 2.0 ** -53
    dist = mu_f.copy()
    err = math.inf
    for k in range(k_max + 1):
        if k:
            dist = dist @ Md_f
        rounding = (k + 2) * 4 * n * unit
        err = 0.5 * (np.abs(dist - pi0_f).sum() + rounding) * spread
        if err <= eta:
            return k, err
    return None, err


def switched_sequence(chain, T, eps, cap=None):
    """Letters A, C of the ultimately periodic sequence that tracks the chain's
    utilities within (t+1) * eps / (T+1) at every index t.

    A holds the exact per-step rewards up to the switch time d*B; C holds the
    limiting per-step rewards of the d residues. The switch is the earlier of
    the combinatorial mixing bound and the first multiple of d at which the
    measured gap to the limit distribution already certifies the tolerance.
    """
    T = to_rat(T)
    if T < 0:
        raise RangeError("T must be nonnegative")
    if eps <= 0:
        raise RangeError("eps must be positive")
    cap = step_cap() if cap is None else cap
    dec = decompose(chain)
    d = dec.period_lcm
    if chain.W == 0:
        return [], [Fraction(0)], {"B": 0, "B_theory": 0, "d": 1, "switch": 0, "source": "zero-weights", "eta": 0.0}
    eta = eps / float(T + 1)
    bound = convergence_bound(chain.n, chain.alpha, chain.W, eta)
    # one extra step absorbs rounding in the floating-point bound
    B_theory = bound.B + 1
    Md = mat_pow(chain.P, d) if d > 1 else [list(r) for r in chain.P]
    pi0 = limit_distribution(MarkovChain(Md, chain.mu, chain.w))
    spread = float(max(chain.w) - min(chain.w))
    k_max = min(B_theory, cap // d)
    k, err = _float_limit_gap(np.array(chain.mu, dtype=float), np.array(Md, dtype=float),
                              np.array(pi0, dtype=float), spread, chain.n, k_max, eta)
    if k is None:
        if d * B_theory <= cap:
            k, source = B_theory, "mixing-bound"
        else:
            achievable = err * float(T + 1)
            raise BudgetExceeded(f"switch time exceeds step cap {cap}; achievable eps at cap ~ {achievable:.3g}")
    else:
        source = "measured" if k < B_theory else "mixing-bound"
    switch = d * k
    A = []
    dist = list(chain.mu)
    for t in range(switch):
        if t:
            dist = vec_mat(dist, chain.P)
        A.append(dot(dist, chain.w))
    C = []
    pk = list(pi0)
    for j in range(d):
        if j:
            pk = vec_mat(pk, chain.P)
        C.append(dot(pk, chain.w))
    info = {"B": k, "B_theory": B_theory, "d": d, "switch": switch, "source": source, "eta": eta}
    return A, C, info


def approx_value(chain, T, eps, cap=None):
    """Value of the chain at mean T, certified within eps on both sides."""
    T = to_rat(T)
    A, C, info = switched_sequence(chain, T, eps, cap)
    seq = UPSeq(A, C)
    val, t1, t2 = val_cycle(seq, T, witness=True)
    info = dict(info, witness=(t1, t2), seq=seq)
    return ValueBracket(val, val - Fraction(eps), val + Fraction(eps), Method.Approximation, info)


def lower_bound_family(n, alpha):
    """2n-vertex chain on which mu M^t approaches its limit no faster than
    (1 - alpha^n)^(t/n).

    Vertices 0..n form a spine advanced with probability alpha, n is
    absorbing; a failure at spine vertex i drops to barred vertex i+1,
    from where a deterministic barred path returns to 0. Every attempt
    from 0 therefore takes exactly n steps.
    """
    alpha = to_rat(alpha)
    if n < 2 or not (0 < alpha <= Fraction(1, 2)):
        raise RangeError("need n >= 2 and 0 < alpha <= 1/2")
    size = 2 * n
    bar = lambda j: n + j  # barred vertex j, 1 <= j <= n-1
    P = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        P[i][i + 1] = alpha
        if i < n - 1:
            P[i][bar(i + 1)] = 1 - alpha
        else:
            P[i][0] = 1 - alpha
    P[n][n] = Fraction(1)
    for j in range(1, n):
        P[bar(j)][bar(j + 1) if j < n - 1 else 0] = Fraction(1)
    mu = [Fraction(int(v == 0)) for v in range(size)]
    names = [str(i) for i in range(n + 1)] + [f"{j}b" for j in range(1, n)]
    return MarkovChain(P, mu, [Fraction(0)] * size, names)


def check_distribution_value(chain, delta, horizon):
    """Expected utility of delta on the chain; an upper bound on the value at E[delta]."""
    if not isinstance(delta, StoppingDistribution):
        delta = delta.distribution()
    if max(delta.support) > horizon:
        raise RangeError(f"support reaches {max(delta.support)} beyond horizon {horizon}")
    u = utility_prefix(chain, max(delta.support))
    return expected_utility(delta, u)


def sequence_rows(chain, info, horizon):
    """Rows (t, u_t, u'_t) comparing the exact prefix with the switched sequence."""
    seq = info["seq"]
    u = utility_prefix(chain, horizon)
    up = seq.prefix(horizon)
    return [(t, u[t], up[t]) for t in range(horizon + 1)]
