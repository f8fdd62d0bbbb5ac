"""Core value types: rationals, chains, MDPs, stopping distributions."""
import enum
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError, ParseError, RangeError

Rat = Fraction

_RAT_RE = re.compile(r"^\s*[+-]?\d+\s*/\s*\d+\s*$")
_DEC_RE = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")


def to_rat(x):
    """Convert an int, Fraction, or "num/den" / finite decimal string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParseError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if _RAT_RE.match(x):
            num, den = x.split("/")
            if int(den) == 0:
                raise ParseError(f"zero denominator in {x!r}")
            return Fraction(int(num), int(den))
        if _DEC_RE.match(x):
            return Fraction(x.strip())
        raise ParseError(f"not a rational: {x!r}")
    if isinstance(x, float):
        # only reachable from code, JSON input keeps decimals as strings
        return Fraction(repr(x))
    raise ParseError(f"not a rational: {x!r}")


def rat_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_prob_vector(vec, where):
    for j, q in enumerate(vec):
        if q < 0:
            raise InvariantError(f"{where} entry {j} is negative ({rat_str(q)})")
    s = sum(vec, Fraction(0))
    if s != 1:
        raise InvariantError(f"{where} sums to {rat_str(s)}")


def _min_positive(values):
    pos = [q for q in values if q > 0]
    return min(pos) if pos else Fraction(1)


@dataclass(frozen=True)
class MarkovChain:
    P: tuple
    mu: tuple
    w: tuple
    states: tuple = None

    def __post_init__(self):
        P = tuple(tuple(to_rat(q) for q in row) for row in self.P)
        n = len(P)
        if n == 0:
            raise InvariantError("matrix is empty")
        for i, row in enumerate(P):
            if len(row) != n:
                raise InvariantError(f"row {i} has length {len(row)}, expected {n}")
            _check_prob_vector(row, f"row {i}")
        mu = tuple(to_rat(q) for q in self.mu)
        w = tuple(to_rat(q) for q in self.w)
        if len(mu) != n:
            raise InvariantError(f"initial has length {len(mu)}, expected {n}")
        if len(w) != n:
            raise InvariantError(f"weights has length {len(w)}, expected {n}")
        _check_prob_vector(mu, "initial")
        states = tuple(self.states) if self.states is not None else tuple(f"s{i}" for i in range(n))
        if len(states) != n:
            raise InvariantError(f"states has length {len(states)}, expected {n}")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "states", states)

    @property
    def n(self):
        return len(self.P)

    @property
    def W(self):
        return max(abs(q) for q in self.w)

    @property
    def alpha(self):
        return _min_positive(q for row in self.P for q in row)

    def with_mu(self, mu):
        return MarkovChain(self.P, mu, self.w, self.states)

    def with_weights(self, w):
        return MarkovChain(self.P, self.mu, w, self.states)


class StoppingDistribution:
    def __init__(self, support):
        sup = {}
        for t, p in dict(support).items():
            t = int(t)
            if t < 0:
                raise InvariantError(f"negative time {t}")
            p = to_rat(p) if not isinstance(p, float) else p
            if p < 0:
                raise InvariantError(f"negative probability at t={t}")
            if p != 0:
                sup[t] = sup.get(t, 0) + p
        total = sum(sup.values())
        exact = all(isinstance(p, Fraction) for p in sup.values())
        if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
            raise InvariantError(f"probabilities sum to {total}")
        self.support = dict(sorted(sup.items()))

    def supp(self):
        return set(self.support)

    def expectation(self):
        return sum((t * p for t, p in self.support.items()), Fraction(0))

    def __repr__(self):
        return f"StoppingDistribution({self.support})"


@dataclass(frozen=True)
class BiDirac:
    t1: int
    t2: int
    p1: Fraction

    def __post_init__(self):
        if not (0 <= self.t1 <= self.t2):
            raise InvariantError("need 0 <= t1 <= t2")
        if not (0 <= self.p1 <= 1):
            raise InvariantError("p1 outside [0,1]")
        if self.t1 == self.t2 and self.p1 != 1:
            raise InvariantError("point mass needs p1 = 1")

    @property
    def expectation(self):
        return self.p1 * self.t1 + (1 - self.p1) * self.t2

    def distribution(self):
        return StoppingDistribution({self.t1: self.p1, self.t2: 1 - self.p1} if self.t1 != self.t2 else {self.t1: 1})


def expected_utility(delta, u):
    """Sum of delta(t) * u[t] over the support of delta."""
    if isinstance(delta, BiDirac):
        delta = delta.distribution()
    need = max(delta.support)
    if need >= len(u):
        raise IndexError(f"utility sequence has {len(u)} terms, need index {need}")
    return sum((p * u[t] for t, p in delta.support.items()), Fraction(0))


def bidirac_with_expectation(t1, t2, T):
    T = to_rat(T)
    if t1 < 0 or not (t1 <= T <= t2):
        raise RangeError(f"T={rat_str(T)} not in [{t1},{t2}]")
    if t1 == t2:
        return BiDirac(t1, t2, Fraction(1))
    return BiDirac(t1, t2, (t2 - T) / (t2 - t1))


@dataclass(frozen=True)
class Mdp:
    states: tuple
    actions: tuple
    theta: dict
    mu: tuple
    w: tuple

    def __post_init__(self):
        states = tuple(self.states)
        n = len(states)
        theta = {}
        for (v, a), vec in self.theta.items():
            vec = tuple(to_rat(q) for q in vec)
            if len(vec) != n:
                raise InvariantError(f"transition ({v},{a}) has length {len(vec)}, expected {n}")
            _check_prob_vector(vec, f"transition ({v},{a})")
            theta[(int(v), a)] = vec
        for v in range(n):
            if not any(k[0] == v for k in theta):
                raise InvariantError(f"state {states[v]} has no action")
        mu = tuple(to_rat(q) for q in self.mu)
        w = tuple(to_rat(q) for q in self.w)
        if len(mu) != n or len(w) != n:
            raise InvariantError("initial/weights length mismatch")
        _check_prob_vector(mu, "initial")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "w", w)

    @property
    def n(self):
        return len(self.states)

    @property
    def W(self):
        return max(abs(q) for q in self.w)

    @property
    def alpha(self):
        return _min_positive(q for vec in self.theta.values() for q in vec)

    def actions_at(self, v):
        return [a for a in self.actions if (v, a) in self.theta]

    def chain_for(self, policy):
        """Markov chain induced by a pure memoryless policy (vertex -> action)."""
        P = [self.theta[(v, policy[v])] for v in range(self.n)]
        return MarkovChain(P, self.mu, self.w, self.states)

    def with_mu(self, mu):
        return Mdp(self.states, self.actions, self.theta, mu, self.w)


@dataclass
class MarkovStrategy:
    """Time-dependent randomized strategy up to `horizon`, then the pure `tail` policy.

    probs[(v, t)] maps each action to its probability at vertex v and time t.
    """
    horizon: int
    probs: dict
    tail: dict

    def __post_init__(self):
        for key, dist in self.probs.items():
            total = sum(dist.values())
            exact = all(isinstance(p, Fraction) for p in dist.values())
            if any(p < 0 for p in dist.values()):
                raise InvariantError(f"negative probability at {key}")
            if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
                raise InvariantError(f"action probabilities at {key} sum to {total}")

    def action_probs(self, v, t):
        if t < self.horizon and (v, t) in self.probs:
            return self.probs[(v, t)]
        return {self.tail[v]: 1}


class Method(enum.Enum):
    Oracle = "Oracle"
    Approximation = "Approximation"
    OptimizerLowerBound = "OptimizerLowerBound"


@dataclass(frozen=True)
class ValueBracket:
    estimate: object
    lower: object
    upper: object
    method: Method
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.lower <= self.estimate <= self.upper):
            raise InvariantError(f"bracket not ordered: {self.lower} <= {self.estimate} <= {self.upper}")

    @property
    def width(self):
        return self.upper - self.lower


# on-disk format

def _parse_vec(raw, where):
    if not isinstance(raw, list):
        raise ParseError(f"{where} must be a list")
    try:
        return [to_rat(q) for q in raw]
    except ParseError as e:
        raise ParseError(f"{where}: {e}") from None


def chain_from_dict(d):
    for key in ("matrix", "initial", "weights"):
        if key not in d:
            raise ParseError(f"missing field {key!r}")
    if not isinstance(d["matrix"], list):
        raise ParseError("matrix must be a list of rows")
    P = [_parse_vec(row, f"matrix row {i}") for i, row in enumerate(d["matrix"])]
    mu = _parse_vec(d["initial"], "initial")
    w = _parse_vec(d["weights"], "weights")
    states = d.get("states")
    return MarkovChain(P, mu, w, states)


def mdp_from_dict(d):
    for key in ("states", "actions", "transitions", "initial", "weights"):
        if key not in d:
            raise ParseError(f"missing field {key!r}")
    states = list(d["states"])
    index = {s: i for i, s in enumerate(states)}
    theta = {}
    if not isinstance(d["transitions"], dict):
        raise ParseError("transitions must be an object")
    for s, acts in d["transitions"].items():
        if s not in index:
            raise ParseError(f"unknown state {s!r} in transitions")
        if not isinstance(acts, dict):
            raise ParseError(f"transitions[{s!r}] must be an object")
        for a, vec in acts.items():
            if a not in d["actions"]:
                raise ParseError(f"unknown action {a!r} at state {s!r}")
            theta[(index[s], a)] = _parse_vec(vec, f"transitions[{s!r}][{a!r}]")
    mu = _parse_vec(d["initial"], "initial")
    w = _parse_vec(d["weights"], "weights")
    return Mdp(states, d["actions"], theta, mu, w)


def chain_to_dict(chain):
    return {
        "states": list(chain.states),
        "matrix": [[rat_str(q) for q in row] for row in chain.P],
        "initial": [rat_str(q) for q in chain.mu],
        "weights": [rat_str(q) for q in chain.w],
    }


def mdp_to_dict(mdp):
    trans = {}
    for v, s in enumerate(mdp.states):
        trans[s] = {a: [rat_str(q) for q in mdp.theta[(v, a)]] for a in mdp.actions_at(v)}
    return {
        "states": list(mdp.states),
        "actions": list(mdp.actions),
        "transitions": trans,
        "initial": [rat_str(q) for q in mdp.mu],
        "weights": [rat_str(q) for q in mdp.w],
    }


def loads_model(text, kind="Chain"):
    try:
        # decimals stay strings so they convert exactly
        d = json.loads(text, parse_float=str)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    if not isinstance(d, dict):
        raise ParseError("top-level value must be an object")
    kind = kind.capitalize() if isinstance(kind, str) else kind
    if kind == "Chain":
        return chain_from_dict(d)
    if kind == "Mdp":
        return mdp_from_dict(d)
    raise ValueError(f"unknown model kind {kind!r}")


def load_model(path, kind="Chain"):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    return loads_model(text, kind)


def dumps_model(model):
    d = mdp_to_dict(model) if isinstance(model, Mdp) else chain_to_dict(model)
    return json.dumps(d, indent=1)


def save_model(model, path):
    with open(path, "w") as fh:
        fh.write(dumps_model(model) + "\n")


def fmt_number(x):
    """JSON-friendly pair of decimal and rational renderings."""
    if isinstance(x, Fraction):
        return {"decimal": float(x), "rational": rat_str(x)}
    if isinstance(x, float) and math.isinf(x):
        return {"decimal": "inf" if x > 0 else "-inf", "rational": None}
    return {"decimal": float(x), "rational": None}
