"""SMT-LIB 2 export of "some horizon-bounded strategy reaches value >= tau".

Variables x_{v,t,a} are the probabilities of playing a at vertex v and
time t < horizon. Vertex masses and utilities are macros over them; after
the horizon the mean-payoff optimal policy is played and utilities grow by
its gain eta* from the reached distribution. The value is the minimum over
the finite chord and limit candidates of an ultimately periodic sequence,
so "value >= tau" is a conjunction of polynomial inequalities.
"""
import math
from fractions import Fraction

from .errors import RangeError
from .model import to_rat


def smt_num(q):
    q = Fraction(q)
    num = f"{abs(q.numerator)}.0" if q.denominator == 1 else f"(/ {abs(q.numerator)}.0 {q.denominator}.0)"
    return f"(- {num})" if q < 0 else num


def _sum(terms):
    terms = [t for t in terms if t != "0.0"]
    if not terms:
        return "0.0"
    if len(terms) == 1:
        return terms[0]
    return "(+ " + " ".join(terms) + ")"


def _mul(*fs):
    return "(* " + " ".join(fs) + ")"


def _safe(name):
    return "".join(c if c.isalnum() else "_" for c in str(name))


def xvar(mdp, v, t, a):
    return f"x_{_safe(mdp.states[v])}_{t}_{_safe(a)}"


def export_etr(mdp, T, horizon, tau, tail_gain=None):
    """Formula text; satisfiable iff some strategy of this shape has value >= tau."""
    from .mdp import mean_payoff

    if horizon < 1:
        raise RangeError("horizon must be >= 1")
    T, tau = to_rat(T), to_rat(tau)
    if T < 0:
        raise RangeError("T must be nonnegative")
    if tail_gain is None:
        tail_gain = mean_payoff(mdp).value
    n = mdp.n
    lines = ["(set-logic QF_NRA)"]
    xs = []
    for t in range(horizon):
        for v in range(n):
            for a in mdp.actions_at(v):
                name = xvar(mdp, v, t, a)
                xs.append(name)
                lines.append(f"(declare-fun {name} () Real)")
    for t in range(horizon):
        for v in range(n):
            acts = [xvar(mdp, v, t, a) for a in mdp.actions_at(v)]
            for x in acts:
                lines.append(f"(assert (and (<= 0.0 {x}) (<= {x} 1.0)))")
            lines.append(f"(assert (= {_sum(acts)} 1.0))")
    # masses p_v_t as macros
    for v in range(n):
        lines.append(f"(define-fun p_{v}_0 () Real {smt_num(mdp.mu[v])})")
    for t in range(horizon):
        for u in range(n):
            terms = []
            for v in range(n):
                for a in mdp.actions_at(v):
                    q = mdp.theta[(v, a)][u]
                    if q:
                        terms.append(_mul(smt_num(q), f"p_{v}_{t}", xvar(mdp, v, t, a)))
            lines.append(f"(define-fun p_{u}_{t + 1} () Real {_sum(terms)})")
    # per-step rewards r_t, then utilities
    for t in range(horizon + 1):
        terms = [_mul(smt_num(mdp.w[v]), f"p_{v}_{t}") for v in range(n) if mdp.w[v]]
        lines.append(f"(define-fun r_{t} () Real {_sum(terms)})")
    lines.append("(define-fun u_0 () Real r_0)")
    for t in range(1, horizon + 1):
        lines.append(f"(define-fun u_{t} () Real (+ u_{t - 1} r_{t}))")
    eta_terms = [_mul(smt_num(tail_gain[v]), f"p_{v}_{horizon}") for v in range(n) if tail_gain[v]]
    lines.append(f"(define-fun eta () Real {_sum(eta_terms)})")
    # sequence A.C^omega with A = r_0..r_horizon and C = [eta]
    L = horizon + 2

    def util(t):
        if t <= horizon:
            return f"u_{t}"
        return f"(+ u_{horizon} (* {smt_num(t - horizon)} eta))"

    conds = []
    if T >= L:
        for t1 in range(L + 1):
            conds.append(f"(>= (+ {util(t1)} (* {smt_num(T - t1)} eta)) {smt_num(tau)})")
    else:
        for t1 in range(math.floor(T) + 1):
            if t1 == T:
                conds.append(f"(>= {util(t1)} {smt_num(tau)})")
            else:
                for t2 in range(max(math.ceil(T), t1 + 1), L + 1):
                    # chord at T >= tau, multiplied through by t2 - t1 > 0
                    lhs = f"(+ (* {smt_num(t2 - T)} {util(t1)}) (* {smt_num(T - t1)} {util(t2)}))"
                    conds.append(f"(>= {lhs} {smt_num(tau * (t2 - t1))})")
            conds.append(f"(>= (+ {util(t1)} (* {smt_num(T - t1)} eta)) {smt_num(tau)})")
    lines.append("(assert (and " + " ".join(conds) + "))" if len(conds) > 1 else f"(assert {conds[0]})")
    lines.append("(check-sat)")
    lines.append("(exit)")
    return "\n".join(lines) + "\n"


def count_variables(text):
    return sum(1 for line in text.splitlines() if line.startswith("(declare-fun "))
