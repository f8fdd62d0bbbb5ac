"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 invalid or malformed input,
3 budget exceeded.
"""
import argparse
import csv
import json
import math
import sys
from fractions import Fraction

import mpmath
import numpy as np

from . import chains, decide, etr, mdp as mdpmod, reductions, stopvalue
from .errors import BudgetExceeded, PeriodTooLarge, StoptimeError
from .model import (MarkovChain, chain_to_dict, fmt_number, load_model, mdp_to_dict,
                    rat_str, save_model, to_rat)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x):
    if isinstance(x, (Fraction, int)):
        return fmt_number(Fraction(x))
    if isinstance(x, float):
        return fmt_number(x)
    # mpmath values may overflow a double; keep them as scientific strings
    f = float(x)
    if math.isinf(f) and not mpmath.isinf(x):
        return {"decimal": mpmath.nstr(x, 8), "rational": None}
    return fmt_number(f)


def _vec(v):
    return [rat_str(q) for q in v]


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _read_json(path):
    from .errors import ParseError
    try:
        with open(path) as fh:
            return json.load(fh, parse_float=str)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read {path}: {e}") from None


def _bracket(br):
    return {"estimate": _num(br.estimate), "lower": _num(br.lower), "upper": _num(br.upper),
            "method": br.method.value}


def cmd_analyze(args):
    chain = load_model(args.model, "Chain")
    dec = chains.decompose(chain)
    classes = []
    for k, c in enumerate(dec.classes):
        pi = chains.steady_state(chain, k, dec)
        classes.append({"vertices": [chain.states[v] for v in c], "period": dec.periods[k],
                        "pi": _vec(pi[v] for v in c), "gain": _num(dot_(pi, chain.w))})
    asy = chains.asymptote(chain, dec)
    _emit({"transient": [chain.states[v] for v in dec.transient], "classes": classes, "d": dec.period_lcm,
           "asymptote": {"slope": _num(asy.slope), "intercepts": [_num(c) for c in asy.intercepts]}}, args.out)


def dot_(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cmd_value(args):
    chain = load_model(args.model, "Chain")
    br = stopvalue.approx_value(chain, to_rat(args.T), args.eps)
    info = br.info
    res = _bracket(br)
    res.update({"B": info["B"], "d": info["d"], "switch": info["switch"], "switch_source": info["source"],
                "witness": {"t1": info["witness"][0], "t2": info["witness"][1]}})
    if args.emit_sequence:
        horizon = args.sequence_length if args.sequence_length is not None else info["switch"] + 2 * info["d"] + math.ceil(to_rat(args.T))
        rows = stopvalue.sequence_rows(chain, info, horizon)
        with open(args.emit_sequence, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "u_exact", "u_prime"])
            for t, u, up in rows:
                wr.writerow([t, rat_str(u), rat_str(up)])
        res["sequence_path"] = args.emit_sequence
    _emit(res, args.out)


def _verdict_json(v):
    wit = {}
    for k, x in v.witness.items():
        wit[k] = _num(x) if isinstance(x, Fraction) else x
    return {"answer": v.answer.value, "witness": wit}


def cmd_decide(args):
    chain = load_model(args.model, "Chain")
    inst = decide.ExactInstance(chain, to_rat(args.T), to_rat(args.theta))
    v = decide.exact_decide(inst, unknown_horizon=args.horizon)
    res = _verdict_json(v)
    if v.residual is not None:
        rchain, z = v.residual
        path = args.residual or "residual.json"
        d = chain_to_dict(rchain)
        d["z"] = list(z)
        d["question"] = "exists t >= 1 with initial * matrix^t * z > 1"
        with open(path, "w") as fh:
            json.dump(d, fh, indent=1)
        res["residual_path"] = path
    _emit(res, args.out)


def cmd_reduce(args):
    d = _read_json(args.input)
    if args.kind == "agt-to-exact":
        inst = reductions.AgtInstance([[to_rat(q) for q in r] for r in d["matrix"]], [int(q) for q in d["z"]])
        ex = reductions.reduce_Agt_to_exact(inst)
        out = chain_to_dict(ex.chain)
        out["T"] = rat_str(ex.T)
        out["theta"] = rat_str(ex.theta)
    else:
        inst = reductions.MarkovReachInstance([[to_rat(q) for q in r] for r in d["matrix"]], to_rat(d["r"]))
        pos = reductions.reduce_markovreach_to_positivity(inst)
        out = pos.to_dict()
        out["scale"] = pos.scale
    with open(args.output, "w") as fh:
        json.dump(out, fh, indent=1)
        fh.write("\n")
    _emit({"written": args.output})


def cmd_mdp(args):
    m = load_model(args.model, "Mdp")
    if args.op == "mec":
        dec = mdpmod.mec_decompose(m)
        _emit({"mecs": [{"vertices": [m.states[v] for v in e.vertices],
                         "actions": {m.states[v]: list(a) for v, a in e.actions.items()}} for e in dec.mecs],
               "rest": [m.states[v] for v in dec.rest]}, args.out)
    elif args.op == "mp":
        sol = mdpmod.mean_payoff(m)
        _emit({"value": {m.states[v]: _num(g) for v, g in enumerate(sol.value)},
               "policy": {m.states[v]: a for v, a in sol.policy.items()},
               "per_ec_gain": [_num(g) for g in sol.per_ec_gain],
               "initial_value": _num(sol.value_from(m.mu))}, args.out)
    elif args.op == "value":
        br = mdpmod.estimate_value(m, to_rat(args.T), args.eps, t_cap=args.t_cap,
                                   restarts=args.restarts, seed=args.seed)
        res = _bracket(br)
        res["t_star"] = _num(br.info["t_star"])
        res["t_cap_reaches_t_star"] = br.info["t_cap_reaches_t_star"]
        if args.strategy_out:
            _write_strategy(m, br.info["strategy"], args.strategy_out)
            res["strategy_path"] = args.strategy_out
        _emit(res, args.out)
    else:
        text = etr.export_etr(m, to_rat(args.T), args.horizon, to_rat(args.tau))
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _write_strategy(m, sigma, path):
    probs = {f"{m.states[v]}@{t}": {a: rat_str(p) for a, p in d.items()} for (v, t), d in sorted(sigma.probs.items(), key=lambda kv: (kv[0][1], kv[0][0]))}
    with open(path, "w") as fh:
        json.dump({"horizon": sigma.horizon, "probs": probs,
                   "tail": {m.states[v]: a for v, a in sigma.tail.items()}}, fh, indent=1, sort_keys=True)


def random_chain(n, seed, den=10, alpha_floor=None):
    """Random chain with entries that are multiples of 1/den."""
    rng = np.random.default_rng(seed)
    P = []
    for _ in range(n):
        k = int(rng.integers(1, n + 1))
        cols = sorted(rng.choice(n, size=k, replace=False))
        cuts = sorted(rng.choice(np.arange(1, den), size=k - 1, replace=False)) if k > 1 else []
        parts = np.diff([0] + list(cuts) + [den])
        row = [Fraction(0)] * n
        for c, p in zip(cols, parts):
            row[int(c)] = Fraction(int(p), den)
        P.append(row)
    mu = [Fraction(0)] * n
    mu[int(rng.integers(n))] = Fraction(1)
    w = [Fraction(int(rng.integers(-5, 6))) for _ in range(n)]
    return MarkovChain(P, mu, w)


def cmd_gen(args):
    if args.what == "slow":
        model = stopvalue.lower_bound_family(args.n, to_rat(args.alpha))
    elif args.what == "memory":
        model, sigma = mdpmod.memory_example(args.horizon)
        if args.strategy_out:
            _write_strategy(model, sigma, args.strategy_out)
    elif args.what == "components":
        model = mdpmod.three_component_example()
    else:
        model = random_chain(args.n, args.seed)
    if args.out:
        save_model(model, args.out)
        _emit({"written": args.out})
    else:
        d = chain_to_dict(model) if isinstance(model, MarkovChain) else mdp_to_dict(model)
        _emit(d)


def build_parser():
    p = _Parser(prog="stoptime", description="Worst-case expected reward under a stopping time with fixed mean.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    a = sub.add_parser("analyze", help="class structure, steady states, asymptote")
    a.add_argument("--model", required=True)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("value", help="approximate the value of a chain")
    v.add_argument("--model", required=True)
    v.add_argument("--T", required=True)
    v.add_argument("--eps", type=to_rat, default="1/1000000")
    v.add_argument("--emit-sequence", dest="emit_sequence")
    v.add_argument("--sequence-length", dest="sequence_length", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_value)

    d = sub.add_parser("decide", help="decide whether the value is below theta")
    d.add_argument("--model", required=True)
    d.add_argument("--T", required=True)
    d.add_argument("--theta", required=True)
    d.add_argument("--horizon", type=int, default=10**4)
    d.add_argument("--residual")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decide)

    r = sub.add_parser("reduce", help="instance reductions")
    r.add_argument("kind", choices=["agt-to-exact", "mr-to-pos"])
    r.add_argument("input")
    r.add_argument("output")
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("mdp", help="MDP analyses")
    m.add_argument("op", choices=["mec", "mp", "value", "etr"])
    m.add_argument("--model", required=True)
    m.add_argument("--T", default="1")
    m.add_argument("--eps", type=to_rat, default="1/20")
    m.add_argument("--t-cap", dest="t_cap", type=int, default=20)
    m.add_argument("--restarts", type=int, default=8)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--horizon", type=int, default=4)
    m.add_argument("--tau", default="0")
    m.add_argument("--strategy-out", dest="strategy_out")
    m.add_argument("--out")
    m.set_defaults(func=cmd_mdp)

    g = sub.add_parser("gen", help="write example models")
    g.add_argument("what", choices=["slow", "memory", "components", "random"],
                   help="slow: slowly mixing n-state chain; memory: MDP where optimal play needs "
                        "memory; components: MDP with three end components; random: random chain")
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--alpha", default="1/4")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--horizon", type=int, default=64)
    g.add_argument("--strategy-out", dest="strategy_out")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "eps", 1) is not None and getattr(args, "eps", 1) <= 0:
            raise UsageError("--eps must be positive")
        args.func(args)
        return 0
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (BudgetExceeded, PeriodTooLarge) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3
    except StoptimeError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, TypeError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
