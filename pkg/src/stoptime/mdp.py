"""MDPs under a stopping time with fixed mean.

End components, exact mean payoff by policy iteration, the transforms used
to bound total reward (reset edge, uniform end components), the closed-form
bound constants, exact strategy evaluation, and a multi-start local search
that returns certified lower bounds on the optimal value.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .chains import convergence_bound, gain_bias
from .errors import PreconditionError, RangeError
from .linalg import dot
from .model import MarkovChain, MarkovStrategy, Mdp, Method, ValueBracket, to_rat
from .stopvalue import UPSeq, switched_sequence, val_cycle


# end components

@dataclass(frozen=True)
class Mec:
    vertices: tuple
    actions: dict  # vertex -> allowed actions staying inside


@dataclass(frozen=True)
class MecDecomposition:
    mecs: tuple
    rest: tuple

    def mec_of(self, v):
        for k, m in enumerate(self.mecs):
            if v in m.vertices:
                return k
        return None


def _succ(mdp, v, a):
    return [u for u, p in enumerate(mdp.theta[(v, a)]) if p > 0]


def mec_decompose(mdp):
    """Maximal end components by repeated SCC splitting and action pruning."""
    n = mdp.n
    alive = set(range(n))
    allowed = {v: list(mdp.actions_at(v)) for v in range(n)}
    while True:
        adj = np.zeros((n, n), dtype=np.int8)
        for v in alive:
            for a in allowed[v]:
                for u in _succ(mdp, v, a):
                    if u in alive:
                        adj[v, u] = 1
        _, labels = connected_components(csr_matrix(adj), directed=True, connection="strong")
        changed = False
        for v in list(alive):
            keep = [a for a in allowed[v]
                    if all(u in alive and labels[u] == labels[v] for u in _succ(mdp, v, a))]
            if len(keep) != len(allowed[v]):
                allowed[v] = keep
                changed = True
            if not keep:
                alive.discard(v)
                changed = True
        if not changed:
            break
    groups = {}
    for v in sorted(alive):
        groups.setdefault(labels[v], []).append(v)
    mecs = sorted((tuple(g) for g in groups.values()))
    out = tuple(Mec(g, {v: tuple(allowed[v]) for v in g}) for g in mecs)
    return MecDecomposition(out, tuple(v for v in range(n) if v not in alive))


# mean payoff

@dataclass
class MeanPayoffSolution:
    value: tuple
    policy: dict
    per_ec_gain: tuple
    mecs: MecDecomposition = None
    bias: tuple = ()

    def value_from(self, mu):
        return dot(mu, self.value)


def _policy_iteration(mdp):
    n = mdp.n
    policy = {v: mdp.actions_at(v)[0] for v in range(n)}
    limit = 1
    for v in range(n):
        limit *= len(mdp.actions_at(v))
    for _ in range(limit + 1):
        gb = gain_bias(mdp.chain_for(policy))
        g, h = gb.gain, gb.bias
        new = dict(policy)
        improved = False
        for v in range(n):
            cur = mdp.theta[(v, policy[v])]
            cur_g = dot(cur, g)
            best_a, best_g = policy[v], cur_g
            for a in mdp.actions_at(v):
                val = dot(mdp.theta[(v, a)], g)
                if val > best_g:
                    best_a, best_g = a, val
            if best_a != policy[v]:
                new[v] = best_a
                improved = True
        if not improved:
            for v in range(n):
                cur_g = dot(mdp.theta[(v, policy[v])], g)
                cur_h = dot(mdp.theta[(v, policy[v])], h)
                best_a, best_h = policy[v], cur_h
                for a in mdp.actions_at(v):
                    q = mdp.theta[(v, a)]
                    if dot(q, g) == cur_g:
                        val = dot(q, h)
                        if val > best_h:
                            best_a, best_h = a, val
                if best_a != policy[v]:
                    new[v] = best_a
                    improved = True
        if not improved:
            return policy, g, h
        policy = new
    raise AssertionError("policy iteration did not converge")


def sub_mdp(mdp, mec):
    """The end component as a stand-alone MDP with its allowed actions."""
    idx = {v: i for i, v in enumerate(mec.vertices)}
    theta = {}
    for v in mec.vertices:
        for a in mec.actions[v]:
            theta[(idx[v], a)] = [mdp.theta[(v, a)][u] for u in mec.vertices]
    m = len(mec.vertices)
    mu = [Fraction(int(i == 0)) for i in range(m)]
    return Mdp([mdp.states[v] for v in mec.vertices], mdp.actions, theta, mu, [mdp.w[v] for v in mec.vertices])


def mean_payoff(mdp):
    """Optimal mean payoff per vertex with an optimal pure memoryless policy."""
    policy, g, h = _policy_iteration(mdp)
    dec = mec_decompose(mdp)
    per_ec = []
    for mec in dec.mecs:
        _, gs, _ = _policy_iteration(sub_mdp(mdp, mec))
        assert len(set(gs)) == 1
        per_ec.append(gs[0])
    return MeanPayoffSolution(tuple(g), policy, tuple(per_ec), dec, tuple(h))


# transforms

def _reachable(mdp):
    seen = {v for v, p in enumerate(mdp.mu) if p > 0}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for a in mdp.actions_at(v):
            for u in _succ(mdp, v, a):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    return sorted(seen)


def restrict(mdp, keep):
    """Sub-MDP on the vertex list `keep`, which must be closed under all actions."""
    idx = {v: i for i, v in enumerate(keep)}
    theta = {(idx[v], a): [mdp.theta[(v, a)][u] for u in keep]
             for v in keep for a in mdp.actions_at(v)}
    return Mdp([mdp.states[v] for v in keep], mdp.actions, theta,
               [mdp.mu[v] for v in keep], [mdp.w[v] for v in keep])


def back_edge_transform(mdp):
    """Add a reset action to a fresh heavily negative vertex that restarts from mu.

    Vertices unreachable from mu are dropped first, so the result is a single
    end component. The new vertex weighs -n^2 W / alpha^n.
    """
    keep = _reachable(mdp)
    if len(keep) < mdp.n:
        mdp = restrict(mdp, keep)
    n = mdp.n
    alpha = mdp.alpha
    low = -Fraction(n * n) * mdp.W / alpha**n
    reset = "reset"
    actions = list(mdp.actions) + ([reset] if reset not in mdp.actions else [])
    theta = {}
    for (v, a), vec in mdp.theta.items():
        theta[(v, a)] = list(vec) + [Fraction(0)]
    for v in range(n):
        theta[(v, reset)] = [Fraction(0)] * n + [Fraction(1)]
    for a in actions:
        theta[(n, a)] = list(mdp.mu) + [Fraction(0)]
    states = list(mdp.states) + ["v_lt0"]
    mu = list(mdp.mu) + [Fraction(0)]
    return Mdp(states, actions, theta, mu, list(mdp.w) + [low])


def uniformize(mdp):
    """MDP whose end components carry a single weight each, with equal mean payoff.

    Every vertex v gets a zero-weight predecessor that all edges into v pass
    through, and weights are doubled, so per-step averages are unchanged.
    Each maximal end component E gets an entry vertex v_E that takes all
    mass entering E from outside and lets the controller choose where to
    enter. Vertices of the resulting end components are reweighted to the
    component's gain and each entry vertex to
    B = 12 n^8 (3W) (1/alpha)^(n^3 + n).
    """
    sol = mean_payoff(mdp)
    if sol.value_from(mdp.mu) > 0:
        raise PreconditionError("mean-payoff value from the initial distribution is positive")
    dec = sol.mecs
    n = mdp.n
    which = {v: k for k, m in enumerate(dec.mecs) for v in m.vertices}
    # layout: originals 0..n-1, predecessors n..2n-1, entries 2n..2n+k-1
    pre = lambda v: n + v
    entry = lambda k: 2 * n + k
    size = 2 * n + len(dec.mecs)
    actions = list(mdp.actions)
    theta = {}

    def route(v, vec):
        out = [Fraction(0)] * size
        home = which.get(v)
        for u, p in enumerate(vec):
            if not p:
                continue
            k = which.get(u)
            if k is not None and k != home:
                out[entry(k)] += p
            else:
                out[pre(u)] += p
        return out

    for (v, a), vec in mdp.theta.items():
        theta[(v, a)] = route(v, vec)
    first = actions[0]
    for v in range(n):
        step = [Fraction(0)] * size
        step[v] = Fraction(1)
        theta[(pre(v), first)] = step
    for k, m in enumerate(dec.mecs):
        for u in m.vertices:
            name = f"enter_{mdp.states[u]}"
            if name not in actions:
                actions.append(name)
            step = [Fraction(0)] * size
            step[pre(u)] = Fraction(1)
            theta[(entry(k), name)] = step
    mu = [Fraction(0)] * size
    for v, p in enumerate(mdp.mu):
        if p:
            k = which.get(v)
            mu[entry(k) if k is not None else v] += p
    w1 = [2 * q for q in mdp.w] + [Fraction(0)] * (n + len(dec.mecs))
    states = list(mdp.states) + [f"{s}_pre" for s in mdp.states] + [f"entry{k}" for k in range(len(dec.mecs))]
    staged = Mdp(states, actions, theta, mu, w1)
    # reweight the end components of the staged MDP
    W, alpha = mdp.W, mdp.alpha
    B = Fraction(12 * n**8) * 3 * W * (1 / alpha) ** (n**3 + n)
    sdec = mec_decompose(staged)
    w2 = list(w1)
    for m in sdec.mecs:
        base = [v for v in m.vertices if v < n]
        eta = sol.per_ec_gain[which[base[0]]]
        for v in m.vertices:
            w2[v] = eta
    for k in range(len(dec.mecs)):
        w2[entry(k)] = B
    return Mdp(states, actions, theta, mu, w2)


def is_uniform(mdp):
    return all(len({mdp.w[v] for v in m.vertices}) == 1 for m in mec_decompose(mdp).mecs)


# bounds

@dataclass(frozen=True)
class RewardBounds:
    t0: object
    chain_bound: object
    single_ec: object
    multi_ec: object
    uniform_entry: object
    C_star: object
    B_star: object
    t_star: object
    t_hat: object
    K3: object
    log: dict = field(default_factory=dict)


def reward_bounds(mdp, T, eps):
    """Closed-form total-reward bounds and switch times, in arbitrary-range floats."""
    if eps <= 0:
        raise RangeError("eps must be positive")
    T = to_rat(T)
    n = mdp.n
    W = mdp.W
    alpha = min(mdp.alpha, Fraction(1, 2))
    with mpmath.workdps(30):
        Wm = mpmath.mpf(W.numerator) / W.denominator
        ia = mpmath.mpf(alpha.denominator) / alpha.numerator  # 1/alpha
        eps = to_rat(eps)
        e = mpmath.mpf(eps.numerator) / eps.denominator
        Tm = mpmath.mpf(T.numerator) / T.denominator
        t0 = 3 * mpmath.mpf(n) ** 5 * ia ** (n**2)
        chain_b = 4 * n * Wm * t0
        single = 12 * mpmath.mpf(n) ** 6 * Wm * ia ** (n**3)
        multi = 12 * mpmath.mpf(n) ** 8 * Wm * ia ** (n**3 + n)
        unif = 12 * mpmath.mpf(n) ** 8 * 3 * Wm * ia ** (n**3 + n)
        C_star = 12 * mpmath.mpf(n) ** 6 * Wm * ia ** (n**2)
        B_star = multi + 2**3 * 3**11 * mpmath.mpf(n) ** 16 * Wm * ia ** (28 * n**3 + 4 * n)
        t_star = Tm * (2 * B_star + e) / e
        cb = convergence_bound(n, alpha, 1, 1)
        if W == 0 or T == 0:
            tail = mpmath.mpf(0)
        else:
            tail = mpmath.log(e / (2 * n * Wm * Tm * cb.K1)) / cb.log_K3
            tail = max(tail, mpmath.mpf(0))
        t_hat = Tm * (4 * B_star + e) / e + tail
        logs = {k: mpmath.log(v) if v > 0 else -mpmath.inf for k, v in
                [("t0", t0), ("B_star", B_star), ("t_star", t_star), ("t_hat", t_hat)]}
        return RewardBounds(t0, chain_b, single, multi, unif, C_star, B_star, t_star, t_hat,
                            mpmath.exp(cb.log_K3), logs)


# strategies

def forward_masses(mdp, sigma, steps):
    """Vertex distributions at times 0..steps under a Markov strategy."""
    dist = list(mdp.mu)
    out = [dist]
    for t in range(steps):
        nxt = [0] * mdp.n
        for v, p in enumerate(dist):
            if not p:
                continue
            for a, q in sigma.action_probs(v, t).items():
                if not q:
                    continue
                for u, r in enumerate(mdp.theta[(v, a)]):
                    if r:
                        nxt[u] = nxt[u] + p * q * r
        dist = nxt
        out.append(dist)
    return out


def strategy_utilities(mdp, sigma, steps):
    masses = forward_masses(mdp, sigma, steps)
    u, acc = [], 0
    for dist in masses:
        acc = acc + sum(p * w for p, w in zip(dist, mdp.w))
        u.append(acc)
    return u


def evaluate_strategy(mdp, sigma, T, eps, cap=None):
    """Value at mean T of the chain produced by sigma, certified within eps.

    Utilities before sigma.horizon are exact; from the horizon on the
    process is the tail policy's chain started from the reached
    distribution and is handled like a plain chain.
    """
    T = to_rat(T)
    H = sigma.horizon
    masses = forward_masses(mdp, sigma, H)
    letters = [dot(m, mdp.w) for m in masses[:H]]
    tail = MarkovChain([mdp.theta[(v, sigma.tail[v])] for v in range(mdp.n)], masses[H], mdp.w, mdp.states)
    A, C, info = switched_sequence(tail, T, eps, cap)
    seq = UPSeq(letters + list(A), C)
    val, t1, t2 = val_cycle(seq, T, witness=True)
    info = dict(info, witness=(t1, t2), seq=seq, switch=info["switch"] + H)
    return ValueBracket(val, val - Fraction(eps), val + Fraction(eps), Method.Approximation, info)


class _FloatEvaluator:
    """Fast approximate value of strategies sharing a horizon and tail policy."""

    def __init__(self, mdp, tail, horizon, T, lookahead=400):
        self.mdp = mdp
        self.H = horizon
        self.T = float(T)
        self.w = np.array(mdp.w, dtype=float)
        self.mu = np.array(mdp.mu, dtype=float)
        self.choice = [v for v in range(mdp.n) if len(mdp.actions_at(v)) > 1]
        self.acts = {v: mdp.actions_at(v) for v in range(mdp.n)}
        self.trans = {k: np.array(vec, dtype=float) for k, vec in mdp.theta.items()}
        self.fixed = np.zeros((mdp.n, mdp.n))
        for v in range(mdp.n):
            if v not in self.choice:
                self.fixed[v] = self.trans[(v, self.acts[v][0])]
        chain = mdp.chain_for(tail)
        P = np.array(chain.P, dtype=float)
        cols = [self.w]
        for _ in range(lookahead):
            cols.append(P @ cols[-1])
        self.cum = np.cumsum(np.array(cols).T, axis=1)  # cum[:, j] = sum_{i<=j} P^i w
        self.gain = np.array(gain_bias(chain).gain, dtype=float)

    def chords(self, x):
        """All candidate chord values at T; x[(v, t)] is a probability vector over self.acts[v]."""
        dist = self.mu
        u = []
        acc = 0.0
        for t in range(self.H):
            acc += dist @ self.w
            u.append(acc)
            M = self.fixed.copy()
            for v in self.choice:
                M[v] = sum(p * self.trans[(v, a)] for p, a in zip(x[(v, t)], self.acts[v]))
            dist = dist @ M
        tail = acc + dist @ self.cum
        uf = np.concatenate([np.array(u), tail])
        slope = float(dist @ self.gain)
        T = self.T
        out = []
        for t1 in range(int(math.floor(T)) + 1):
            if t1 == T:
                out.append(uf[t1:t1 + 1])
                continue
            lo = max(int(math.ceil(T)), t1 + 1)
            t2 = np.arange(lo, len(uf))
            out.append(uf[t1] + (T - t1) * (uf[lo:] - uf[t1]) / (t2 - t1))
            out.append(np.array([uf[t1] + slope * (T - t1)]))
        return np.concatenate(out)

    def value(self, x):
        return float(self.chords(x).min())

    def smooth(self, x, beta):
        """Soft minimum -log(sum exp(-beta c)) / beta, a smooth lower bound on value."""
        c = self.chords(x)
        m = c.min()
        return float(m - np.log(np.exp(-beta * (c - m)).sum()) / beta)


def _project(p):
    p = np.clip(p, 0.0, 1.0)
    s = p.sum()
    return p / s if s > 0 else np.full(len(p), 1.0 / len(p))


def estimate_value(mdp, T, eps, t_cap=20, restarts=8, seed=0, iters=60, fd_step=1e-6):
    """Certified lower bound on the optimal value by multi-start local search.

    Strategies play time-dependent probabilities before t_cap and the
    mean-payoff optimal policy afterwards. Each restart climbs with
    central finite-difference gradients, projecting back to the simplex by
    clipping and renormalizing, with step halving on failure. Since the
    value is a minimum over chords, each restart climbs a soft minimum whose
    sharpness grows in stages, keeping the best true value seen. The best
    strategy is rounded to rationals and evaluated exactly; its value minus
    the evaluation error is a lower bound on the optimal value. An upper
    bound is reported only when t_cap reaches the switch time t*.
    """
    T = to_rat(T)
    if t_cap < 1:
        raise RangeError("t_cap must be >= 1")
    tail = mean_payoff(mdp).policy
    ev = _FloatEvaluator(mdp, tail, t_cap, T)
    keys = [(v, t) for t in range(t_cap) for v in ev.choice]
    rng = np.random.default_rng(seed)
    best_x, best_f = None, -math.inf
    # the objective is a minimum of smooth chord values; climb soft minima of
    # increasing sharpness so gradients stay informative near the kinks
    scale = max(float(mdp.W), 1e-9)
    betas = [10 / scale, 100 / scale, 1000 / scale, 10000 / scale]
    for r in range(restarts):
        if r == 0:
            x = {k: np.full(len(ev.acts[k[0]]), 1.0 / len(ev.acts[k[0]])) for k in keys}
        else:
            x = {k: rng.dirichlet(np.ones(len(ev.acts[k[0]]))) for k in keys}
        hard = ev.value(x)
        if hard > best_f:
            best_x, best_f = x, hard
        for beta in betas:
            obj = lambda y: ev.smooth(y, beta)
            f = obj(x)
            lr = 0.5
            for _ in range(max(1, iters // len(betas))):
                grad = {}
                for k in keys:
                    g = np.zeros(len(x[k]))
                    for i in range(len(x[k])):
                        old = x[k][i]
                        x[k][i] = old + fd_step
                        fp = obj(x)
                        x[k][i] = old - fd_step
                        fm = obj(x)
                        x[k][i] = old
                        g[i] = (fp - fm) / (2 * fd_step)
                    grad[k] = g
                norm = math.sqrt(sum(float(g @ g) for g in grad.values()))
                if norm == 0:
                    break
                while lr > 1e-6:
                    trial = {k: _project(x[k] + lr * grad[k] / norm) for k in keys}
                    ft = obj(trial)
                    if ft > f:
                        x, f = trial, ft
                        lr *= 1.5
                        break
                    lr /= 2
                else:
                    break
                hard = ev.value(x)
                if hard > best_f:
                    best_x, best_f = {k: v.copy() for k, v in x.items()}, hard
    sigma = _rational_strategy(mdp, best_x or {}, keys, t_cap, tail)
    half = eps / 2
    br = evaluate_strategy(mdp, sigma, T, half)
    bounds = reward_bounds(mdp, T, eps)
    lower = br.estimate - Fraction(half)
    certified = t_cap >= bounds.t_star
    upper = br.estimate + Fraction(eps) if certified else math.inf
    info = {"strategy": sigma, "search_value": best_f, "t_star": bounds.t_star,
            "t_cap_reaches_t_star": certified, "restarts": restarts, "seed": seed}
    return ValueBracket(br.estimate, lower, upper, Method.OptimizerLowerBound, info)


def _rational_strategy(mdp, x, keys, horizon, tail, max_den=10**6):
    probs = {}
    for k in keys:
        acts = mdp.actions_at(k[0])
        ps = [Fraction(float(p)).limit_denominator(max_den) for p in x[k][:-1]]
        ps = [max(p, Fraction(0)) for p in ps]
        total = sum(ps, Fraction(0))
        if total > 1:
            ps = [p / total for p in ps]
            total = Fraction(1)
        ps.append(1 - total)
        probs[k] = dict(zip(acts, ps))
    return MarkovStrategy(horizon, probs, dict(tail))


# example MDPs

def three_component_example():
    """Four vertices with end components {v0}, {v1, v2}, {v3} of gains -1, 1, -2."""
    z = Fraction(0)
    theta = {
        (0, "a"): [1, 0, 0, 0],
        (0, "b"): [Fraction(1, 8), 0, Fraction(1, 8), Fraction(3, 4)],
        (1, "a"): [0, 0, 1, 0],
        (1, "b"): [0, 0, 1, 0],
        (2, "a"): [0, 1, 0, 0],
        (2, "b"): [0, 0, 0, 1],
        (3, "a"): [0, 0, 0, 1],
        (3, "b"): [0, 0, 0, 1],
    }
    mu = [Fraction(1, 2), Fraction(1, 2), z, z]
    return Mdp(["v0", "v1", "v2", "v3"], ["a", "b"], theta, mu, [-1, 2, 0, -2])


def memory_alpha(k):
    return Fraction(1, 2 + 2 ** (k + 1))


def memory_example(horizon=64, alpha0=None):
    """MDP on which the optimal strategy needs unbounded memory, and that strategy.

    The upper half leaks mass 1/3 * 2^-(k+1) into a (-1, 2, -1) cycle at its
    k-th round; at each visit of v'1 the strategy sends the fraction
    alpha_k = 1/(2 + 2^(k+1)) of the lower mass into the mirrored (1, -2, 1)
    cycle, which cancels the upper contribution step by step. alpha0
    overrides the first choice, for perturbation experiments.
    """
    names = ["v0", "v1", "v2", "v3", "v4", "v5", "v6", "v1'", "v2'", "v3'", "v4'", "v5'", "v6'"]
    ix = {s: i for i, s in enumerate(names)}
    n = len(names)

    def to(*pairs):
        vec = [Fraction(0)] * n
        for s, p in pairs:
            vec[ix[s]] += Fraction(p)
        return vec

    theta = {
        (ix["v0"], "a"): to(("v1", Fraction(1, 3)), ("v1'", Fraction(2, 3))),
        (ix["v1"], "a"): to(("v2", Fraction(1, 2)), ("v4", Fraction(1, 2))),
        (ix["v2"], "a"): to(("v3", 1)),
        (ix["v3"], "a"): to(("v1", 1)),
        (ix["v4"], "a"): to(("v5", 1)),
        (ix["v5"], "a"): to(("v6", 1)),
        (ix["v6"], "a"): to(("v4", 1)),
        (ix["v1'"], "a"): to(("v2'", 1)),
        (ix["v1'"], "b"): to(("v4'", 1)),
        (ix["v2'"], "a"): to(("v3'", 1)),
        (ix["v3'"], "a"): to(("v1'", 1)),
        (ix["v4'"], "a"): to(("v5'", 1)),
        (ix["v5'"], "a"): to(("v6'", 1)),
        (ix["v6'"], "a"): to(("v4'", 1)),
    }
    w = [0] * n
    w[ix["v4"]], w[ix["v5"]], w[ix["v6"]] = -1, 2, -1
    w[ix["v4'"]], w[ix["v5'"]], w[ix["v6'"]] = 1, -2, 1
    mu = to(("v0", 1))
    mdp = Mdp(names, ["a", "b"], theta, mu, w)
    # the strategy's defining quantities, checked exactly
    m = lambda k: Fraction(1, 3) + Fraction(1, 3) / 2**k
    p = lambda k: Fraction(1, 3) * (1 - Fraction(1, 2 ** (k + 1)))
    assert p(0) == Fraction(1, 6) and m(0) == Fraction(2, 3) and memory_alpha(0) == Fraction(1, 4)
    probs = {}
    v1p = ix["v1'"]
    for k in range((horizon + 1) // 3 + 1):
        t = 3 * k + 1
        if t >= horizon:
            break
        a = memory_alpha(k) if (k or alpha0 is None) else Fraction(alpha0)
        probs[(v1p, t)] = {"a": 1 - a, "b": a}
    tail = {v: "a" for v in range(n)}
    return mdp, MarkovStrategy(horizon, probs, tail)
