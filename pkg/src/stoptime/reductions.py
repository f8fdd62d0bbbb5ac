"""Instance transformations between threshold, reachability and Positivity questions.

Problem forms handled here:

* threshold question: aperiodic M, start vertex 1, z in {0,1,2}^n with
  pi . z = 1; is mu M^t z > 1 for some t >= 1?
* reachability question: stochastic M and r > 0; is (M^t)[1,2] > r for some t >= 1?
* Positivity question: integer matrix P and entry (i, j); is (P^t)[i,j] > 0 for some t >= 1?

Matrix entries named in these questions are 1-indexed, as in the problem statements.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .chains import decompose, limit_distribution
from .decide import Answer, ExactInstance, Verdict
from .errors import InvariantError
from .linalg import dot, mat_vec, vec_mat
from .model import MarkovChain, to_rat


def _point_mass(n, i=0):
    return [Fraction(int(j == i)) for j in range(n)]


@dataclass(frozen=True)
class AgtInstance:
    M: tuple
    z: tuple

    def __post_init__(self):
        chain = MarkovChain(self.M, _point_mass(len(self.M)), [0] * len(self.M))
        z = tuple(int(q) for q in self.z)
        if len(z) != chain.n or any(q not in (0, 1, 2) for q in z):
            raise InvariantError("z must be a vector over {0,1,2} matching the matrix")
        dec = decompose(chain)
        if dec.period_lcm != 1:
            raise InvariantError(f"matrix is periodic (period lcm {dec.period_lcm})")
        lim = dot(limit_distribution(chain, dec), z)
        if lim != 1:
            raise InvariantError(f"pi . z = {lim} != 1; decide with agt_limit_answer instead")
        object.__setattr__(self, "M", chain.P)
        object.__setattr__(self, "z", z)

    @property
    def n(self):
        return len(self.M)

    @property
    def mu(self):
        return _point_mass(self.n)


@dataclass(frozen=True)
class MarkovReachInstance:
    M: tuple
    r: Fraction

    def __post_init__(self):
        chain = MarkovChain(self.M, _point_mass(len(self.M)), [0] * len(self.M))
        r = to_rat(self.r)
        if r <= 0:
            raise InvariantError("r must be positive")
        if chain.n < 2:
            raise InvariantError("need at least two states")
        object.__setattr__(self, "M", chain.P)
        object.__setattr__(self, "r", r)


@dataclass(frozen=True)
class PositivityInstance:
    P: tuple
    target: tuple  # 1-indexed (i, j)
    scale: int = 1  # common denominator the rational matrix was multiplied by

    def entry(self, t):
        i, j = self.target
        row = [int(k == i - 1) for k in range(len(self.P))]
        for _ in range(t):
            row = [sum(row[k] * self.P[k][c] for k in range(len(self.P))) for c in range(len(self.P))]
        return row[j - 1]

    def to_dict(self):
        return {"matrix": [list(r) for r in self.P], "target": list(self.target)}


def normalize_no_incoming_initial(M, mu=None):
    """Give vertex 1 no incoming edges by routing them to a fresh copy of it.

    The copy is appended as the last vertex and inherits vertex 1's row,
    so merging the two recovers the original marginals at every step.
    """
    n = len(M)
    M = [[to_rat(q) for q in row] for row in M]
    if all(M[i][0] == 0 for i in range(n)):
        return M
    out = []
    for row in M:
        out.append([Fraction(0)] + row[1:] + [row[0]])
    out.append(list(out[0]))
    return out


def reduce_Agt_to_exact(inst):
    """Exact-value instance (T = 1) whose answer matches the threshold question.

    On the intermediate chain with w = z - M z the gain is 0 and the bias
    is z - e, so the utilities after one step are z(1) - mu M^t z and dip
    below the flat bottom line at height z(1) - 1 exactly when mu M^t z > 1.
    """
    M = normalize_no_incoming_initial(inst.M)
    z = list(inst.z) + ([inst.z[0]] if len(M) > inst.n else [])
    n = len(M)
    Mz = mat_vec(M, z)
    w = [z[i] - Mz[i] for i in range(n)]
    a = Fraction(z[0] - 1)  # bias at vertex 1
    size = n + 1
    P = [[Fraction(0)] * size for _ in range(size)]
    P[0][1] = Fraction(1)
    for i in range(n):
        for j in range(n):
            P[i + 1][j + 1] = M[i][j]
    w2 = [a, w[0] - a] + w[1:]
    names = ["init"] + [f"v{i + 1}" for i in range(inst.n)] + (["v1copy"] if n > inst.n else [])
    chain = MarkovChain(P, _point_mass(size), w2, names)
    return ExactInstance(chain, Fraction(1), a)


def intermediate_chain(inst):
    """The chain <M, e1, z - Mz> used inside reduce_Agt_to_exact."""
    M = normalize_no_incoming_initial(inst.M)
    z = list(inst.z) + ([inst.z[0]] if len(M) > inst.n else [])
    Mz = mat_vec(M, z)
    return MarkovChain(M, _point_mass(len(M)), [z[i] - Mz[i] for i in range(len(M))]), z


def reduce_markovreach_to_positivity(inst):
    """Integer matrix whose (n+1, n+3) power entry is d^t ((M^(t-1))[1,2] - r)."""
    M, r = inst.M, inst.r
    n = len(M)
    size = n + 3
    P = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            P[i][j] = M[i][j]
    P[1][n + 2] = Fraction(1)
    for j in range(n):
        P[n][j] = M[0][j]
    P[n][n + 1] = -r
    P[n + 1][n + 1] = Fraction(1)
    P[n + 1][n + 2] = Fraction(1)
    d = lcm(*(q.denominator for row in P for q in row))
    Pint = tuple(tuple(int(q * d) for q in row) for row in P)
    return PositivityInstance(Pint, (n + 1, n + 3), d)


def embed_bias(chain, y):
    """Chain on 2n vertices whose power sequence carries the signs of mu M^t y.

    y is scaled into [-1, 1]; every edge into u keeps mass |y(u)| and sends
    the rest to a zero-weight copy of u. With w'(v) = sign(y(v)) this gives
    mu' M'^t w' = mu M^t y for all t >= 1, and z = e + w' lies in {0,1,2}.
    """
    y = [to_rat(q) for q in y]
    top = max(abs(q) for q in y)
    if top == 0:
        raise InvariantError("bias vector is zero; the instance is trivially No")
    ys = [q / top for q in y]
    n = chain.n
    P = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for v in range(n):
        for u in range(n):
            p = chain.P[v][u]
            if p:
                P[v][u] = p * abs(ys[u])
                P[v][n + u] = p * (1 - abs(ys[u]))
    for v in range(n):
        P[n + v] = list(P[v])
    wp = [Fraction(1) if q >= 0 else Fraction(-1) for q in ys] + [Fraction(0)] * n
    mu = list(chain.mu) + [Fraction(0)] * n
    names = list(chain.states) + [f"{s}^0" for s in chain.states]
    out = MarkovChain(P, mu, wp, names)
    z = [1 + int(q) for q in wp]
    return out, z


def brute_force_Agt(inst, H):
    """Least t in [1, H] with mu M^t z > 1, or None."""
    dist = inst.mu
    for t in range(1, H + 1):
        dist = vec_mat(dist, inst.M)
        if dot(dist, inst.z) > 1:
            return t
    return None


def agt_limit_answer(M, z, cap=10**6):
    """Decide the threshold question when lim mu M^t z != 1.

    The gap |mu M^t z - L| is at most half the L1 distance to the limit
    times the spread of z, and that distance never grows.
    """
    chain = MarkovChain(M, _point_mass(len(M)), [0] * len(M))
    pi = limit_distribution(chain)
    L = dot(pi, z)
    if L == 1:
        raise InvariantError("limit equals 1; this is the hard case")
    spread = Fraction(max(z) - min(z))
    dist = chain.mu
    for t in range(1, cap + 1):
        dist = vec_mat(dist, chain.P)
        val = dot(dist, z)
        if val > 1:
            return Verdict(Answer.Yes, {"t": t, "value": val})
        gap = sum((abs(p - q) for p, q in zip(dist, pi)), Fraction(0)) * spread / 2
        if L < 1 and L + gap <= 1:
            return Verdict(Answer.No, {"certified_from": t})
    raise InvariantError("no decision within cap")
