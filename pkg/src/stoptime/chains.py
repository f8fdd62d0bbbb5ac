"""Structure and asymptotics of finite Markov chains.

Class decomposition, steady states, gain and bias vectors, the affine
asymptote of the utility sequence, and the convergence-rate constants
used by the approximation algorithm.
"""
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import mpmath
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import PeriodTooLarge
from .linalg import dot, mat_pow, solve, vec_mat
from .model import MarkovChain

PERIOD_CAP = 10**6


@dataclass(frozen=True)
class ClassDecomposition:
    transient: tuple
    classes: tuple
    periods: tuple
    period_lcm: int

    def class_of(self, v):
        for k, c in enumerate(self.classes):
            if v in c:
                return k
        return None


def _support_graph(P):
    n = len(P)
    A = np.array([[1 if P[i][j] > 0 else 0 for j in range(n)] for i in range(n)], dtype=np.int8)
    return A


def scc_labels(adj):
    """Strongly connected component label of each vertex of a 0/1 adjacency matrix."""
    _, labels = connected_components(csr_matrix(adj), directed=True, connection="strong")
    return labels


def class_period(adj, members):
    """gcd of level differences along edges inside a strongly connected set."""
    members = list(members)
    inside = set(members)
    level = {members[0]: 0}
    queue = deque([members[0]])
    g = 0
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v not in inside:
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, level[u] + 1 - level[v])
    return g if g else 1


def decompose(chain):
    adj = _support_graph(chain.P)
    labels = scc_labels(adj)
    groups = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, []).append(v)
    classes, transient = [], []
    for members in groups.values():
        inside = set(members)
        closed = all(int(v) in inside for u in members for v in np.flatnonzero(adj[u]))
        if closed:
            classes.append(tuple(members))
        else:
            transient.extend(members)
    classes.sort()
    periods = tuple(class_period(adj, c) for c in classes)
    d = reduce(math.lcm, periods, 1)
    return ClassDecomposition(tuple(sorted(transient)), tuple(classes), periods, d)


def steady_state(chain, class_index, dec=None):
    """Stationary distribution of one recurrent class, as a full-length vector
    that is zero outside the class."""
    dec = dec or decompose(chain)
    members = dec.classes[class_index]
    m = len(members)
    # rows: pi (I - M_C) = 0 for all but the last column, plus sum(pi) = 1
    A = []
    for j in range(m - 1):
        A.append([Fraction(int(i == j)) - chain.P[members[i]][members[j]] for i in range(m)])
    A.append([Fraction(1)] * m)
    b = [Fraction(0)] * (m - 1) + [Fraction(1)]
    sol = solve(A, b)
    assert all(q >= 0 for q in sol)
    pi = [Fraction(0)] * chain.n
    for i, v in enumerate(members):
        pi[v] = sol[i]
    return pi


def absorption_matrix(chain, dec=None):
    """h[v][k] = probability that a walk from v ends in class k."""
    dec = dec or decompose(chain)
    n = chain.n
    h = [[Fraction(0)] * len(dec.classes) for _ in range(n)]
    for k, c in enumerate(dec.classes):
        for v in c:
            h[v][k] = Fraction(1)
    T = list(dec.transient)
    if T:
        idx = {v: i for i, v in enumerate(T)}
        A = [[Fraction(int(i == j)) - chain.P[T[i]][T[j]] for j in range(len(T))] for i in range(len(T))]
        for k, c in enumerate(dec.classes):
            b = [sum((chain.P[v][u] for u in c), Fraction(0)) for v in T]
            col = solve(A, b)
            for v in T:
                h[v][k] = col[idx[v]]
    return h


def absorption_probs(chain, dec=None):
    """Mass of mu that eventually reaches each recurrent class."""
    dec = dec or decompose(chain)
    h = absorption_matrix(chain, dec)
    return [sum((chain.mu[v] * h[v][k] for v in range(chain.n)), Fraction(0)) for k in range(len(dec.classes))]


@dataclass(frozen=True)
class GainBias:
    gain: tuple
    bias: tuple
    per_class_gain: tuple
    stationary: tuple


def gain_bias(chain, dec=None):
    """Gain x and bias y with y = M(y - x) + w, M x = x, and pi . y = 0 on every class."""
    dec = dec or decompose(chain)
    n = chain.n
    P, w = chain.P, chain.w
    pis = [steady_state(chain, k, dec) for k in range(len(dec.classes))]
    g = [dot(pi, w) for pi in pis]
    h = absorption_matrix(chain, dec)
    x = [sum((h[v][k] * g[k] for k in range(len(g))), Fraction(0)) for v in range(n)]
    y = [Fraction(0)] * n
    for k, c in enumerate(dec.classes):
        m = len(c)
        # (I - M_C) y = w - g on all rows but the last, plus pi . y = 0
        A = [[Fraction(int(i == j)) - P[c[i]][c[j]] for j in range(m)] for i in range(m - 1)]
        A.append([pis[k][v] for v in c])
        b = [w[c[i]] - g[k] for i in range(m - 1)] + [Fraction(0)]
        sol = solve(A, b)
        for i, v in enumerate(c):
            y[v] = sol[i]
    T = list(dec.transient)
    if T:
        rec = [v for c in dec.classes for v in c]
        A = [[Fraction(int(i == j)) - P[T[i]][T[j]] for j in range(len(T))] for i in range(len(T))]
        Mx = [dot(P[v], x) for v in T]
        b = [w[v] - Mx[i] + sum((P[v][u] * y[u] for u in rec), Fraction(0)) for i, v in enumerate(T)]
        sol = solve(A, b)
        for i, v in enumerate(T):
            y[v] = sol[i]
    return GainBias(tuple(x), tuple(y), tuple(g), tuple(tuple(p) for p in pis))


def utility_prefix(chain, horizon):
    """Exact u_0..u_H with u_t = sum_{i<=t} mu M^i w."""
    out = []
    dist = list(chain.mu)
    acc = Fraction(0)
    for t in range(horizon + 1):
        if t:
            dist = vec_mat(dist, chain.P)
        acc += dot(dist, chain.w)
        out.append(acc)
    return out


def utility_prefix_float(chain, horizon):
    P = np.array(chain.P, dtype=float)
    w = np.array(chain.w, dtype=float)
    dist = np.array(chain.mu, dtype=float)
    out = np.empty(horizon + 1)
    acc = 0.0
    for t in range(horizon + 1):
        if t:
            dist = dist @ P
        acc += dist @ w
        out[t] = acc
    return out


@dataclass(frozen=True)
class Asymptote:
    """u_t - (slope * t + intercepts[t % d]) tends to 0.

    The deviation is exactly -mu M^(t+1) bias, where bias is the bias of the
    d-step block chain (the plain bias when d = 1).
    """
    slope: Fraction
    intercepts: tuple
    d: int
    bias: tuple = ()

    def line(self, t):
        return self.slope * t + self.intercepts[t % self.d]


def asymptote(chain, dec=None, cap=PERIOD_CAP):
    dec = dec or decompose(chain)
    d = dec.period_lcm
    if d > cap:
        raise PeriodTooLarge(f"period lcm {d} exceeds cap {cap}")
    if d == 1:
        gb = gain_bias(chain, dec)
        s = dot(chain.mu, gb.gain)
        return Asymptote(s, (s + dot(chain.mu, gb.bias),), 1, gb.bias)
    # blocks of d steps: chain M^d with block weight v = sum_{j<d} M^j w
    Md = mat_pow(chain.P, d)
    v = [Fraction(0)] * chain.n
    col = list(chain.w)
    for _ in range(d):
        v = [a + b for a, b in zip(v, col)]
        col = [dot(row, col) for row in chain.P]
    block = MarkovChain(Md, chain.mu, v)
    bdec = decompose(block)
    gb = gain_bias(block, bdec)
    s = dot(chain.mu, gain_bias(chain, dec).gain)
    u = utility_prefix(chain, d - 1)
    intercepts = []
    dist = vec_mat(chain.mu, chain.P)
    for k in range(d):
        # u_{k+ds} -> u_k + mu M^{k+1} (x' s + y')
        intercepts.append(u[k] + dot(dist, gb.bias) - s * k)
        dist = vec_mat(dist, chain.P)
    return Asymptote(s, tuple(intercepts), d, gb.bias)


def limit_distribution(chain, dec=None):
    """lim mu M^t for a chain whose classes are all aperiodic."""
    dec = dec or decompose(chain)
    mass = absorption_probs(chain, dec)
    out = [Fraction(0)] * chain.n
    for k in range(len(dec.classes)):
        pi = steady_state(chain, k, dec)
        out = [a + mass[k] * b for a, b in zip(out, pi)]
    return out


@dataclass(frozen=True)
class ConvergenceBound:
    K1: int
    K2: object
    K3: object
    log_K3: object
    B: int
    alpha: Fraction
    n: int


def _log_K(alpha, power, n):
    # ln((1 - alpha^power)^(1/(3n^2))) without underflow
    a = mpmath.exp(power * mpmath.log(mpmath.mpf(alpha.numerator) / alpha.denominator))
    return mpmath.log1p(-a) / (3 * n * n)


def convergence_bound(n, alpha, W, eps):
    """Constants K1 = 3, K3 and the least B with n W K1 K3^B <= eps."""
    alpha = min(Fraction(alpha), Fraction(1, 2))
    n = int(n)
    K1 = 3
    with mpmath.workdps(40):
        logK3 = _log_K(alpha, n**3, n)
        logK2 = _log_K(alpha, n**2, n)
        W = Fraction(W)
        if W == 0:
            B = 0
        else:
            target = mpmath.log(mpmath.mpf(n * K1) * mpmath.mpf(W.numerator) / W.denominator) - mpmath.log(eps)
            if target <= 0:
                B = 0
            else:
                rough = target / -logK3
                digits = int(mpmath.log10(rough)) + 1 if rough > 1 else 1
                with mpmath.workdps(digits + 30):
                    logK3 = _log_K(alpha, n**3, n)
                    target = mpmath.log(mpmath.mpf(n * K1) * mpmath.mpf(W.numerator) / W.denominator) - mpmath.log(eps)
                    B = int(mpmath.ceil(target / -logK3))
                    B = max(B, 0)
        return ConvergenceBound(K1, mpmath.exp(logK2), mpmath.exp(logK3), logK3, B, alpha, n)
