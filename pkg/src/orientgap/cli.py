"""Command-line front end.

Instance-emitting commands write the instance to stdout (or ``--out``) and
the report to stderr; every other command writes its report to stdout.
Reports are ``key=value`` lines, or one JSON object with ``--json``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from . import generators
from .clique_reduce import (
    build_clique_instance,
    canonical_family,
    min_beta,
    parse_clique,
    serialize_clique,
    solve_clique_instance,
)
from .dmc_reduce import (
    FULL_SPACE,
    SAMPLED,
    format_provenance as dmc_provenance,
    plan_dmc,
    reduce_dmc,
    verify_wiring,
)
from .errors import ReductionError
from .instances import (
    MixedInstance,
    MulticutInstance,
    contract_cycles,
    parse_instance,
    serialize_instance,
)
from .oracles import DEFAULT_DMC_LIMIT, DEFAULT_SO_LIMIT, opt_dmc, opt_so
from .sampler import TupleDomain, random_indicator_table, required_sample_count, sample_tuples, verify_sampler
from .so_amplify import amplify, format_provenance as so_provenance, plan

SYMBOLIC_ABOVE = 64


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, kind: type):
    inst = parse_instance(_read(path))
    if not isinstance(inst, kind):
        want = "so" if kind is MixedInstance else "dmc"
        raise UsageError(f"{path}: expected a '{want}' instance")
    return inst


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _big(value: int | None, log2: float) -> str | int:
    """Exact below ``2**64``, ``≈2^x`` above."""
    if value is not None and log2 < SYMBOLIC_ABOVE:
        return value
    return f"≈2^{log2:.1f}"


def _emit_report(report: dict, args, stream) -> None:
    report = {k: _num(v) for k, v in report.items()}
    if args.json:
        stream.write(json.dumps(report, ensure_ascii=False) + "\n")
    else:
        for key, value in report.items():
            stream.write(f"{key}={value}\n")


def _bits(bits) -> str:
    return "".join(map(str, bits)) or "-"


def _sizes(inst) -> dict:
    if isinstance(inst, MixedInstance):
        return {"n": inst.n, "arcs": len(inst.arcs), "edges": len(inst.edges), "k": inst.k}
    return {"n": inst.n, "arcs": len(inst.arcs), "k": inst.k, "p": inst.budget}


# -- commands ---------------------------------------------------------------

def cmd_gen(args):
    kind = args.kind
    if kind == "no-edge":
        inst = generators.no_edge()
    elif kind == "yes-chain":
        inst = generators.yes_chain(args.k, args.length, args.undirected)
    elif kind == "dmc-no":
        inst = generators.dmc_no()
    elif kind == "dmc-yes":
        inst = generators.dmc_yes()
    else:
        inst = generators.random_mixed(args.n, args.k, args.seed, args.max_edges, planted=not args.unplanted)
    return serialize_instance(inst), {"generator": kind, "seed": args.seed, **_sizes(inst)}


def cmd_solve_so(args):
    inst = _load(args.instance, MixedInstance)
    res = opt_so(inst, args.cap or DEFAULT_SO_LIMIT, args.threads)
    return None, {"opt": res.value, "k": inst.k, "ratio": Fraction(res.value, inst.k),
                  **_sizes(inst), "orientation": _bits(res.witness.bits)}


def cmd_solve_dmc(args):
    inst = _load(args.instance, MulticutInstance)
    res = opt_dmc(inst, args.cap or DEFAULT_DMC_LIMIT, args.threads)
    cut = ",".join(map(str, sorted(res.witness.indices))) or "-"
    return None, {"opt": res.value, "k": inst.k, "ratio": Fraction(res.value, inst.k), **_sizes(inst), "cut": cut}


def cmd_solve_clique(args):
    ci = parse_clique(_read(args.instance))
    found = solve_clique_instance(ci)
    report = {"vertices": ci.n, "target": ci.target, "found": found is not None}
    if found is not None:
        report["clique"] = ",".join(map(str, sorted(found)))
    return None, report


def cmd_amplify_so(args):
    base = _load(args.instance, MixedInstance)
    lp = plan(base.k, args.q, args.layers, args.copies)
    mode = FULL_SPACE if args.full_space else SAMPLED
    kwargs = {"size_cap": args.cap} if args.cap else {}
    result = amplify(base, lp, mode, args.seed, **kwargs)
    if args.provenance:
        _write(so_provenance(result), args.provenance)
    inst = result.instance
    return serialize_instance(inst), {"mode": mode, "seed": args.seed, "layers": lp.layers,
                                      "multiplier": lp.multiplier, **_sizes(inst)}


def cmd_reduce_dmc(args):
    base = _load(args.instance, MulticutInstance)
    dp = plan_dmc(base.budget, args.q, args.m, args.k0)
    mode = FULL_SPACE if args.full_space else SAMPLED
    kwargs = {"size_cap": args.cap} if args.cap else {}
    result = reduce_dmc(base, dp, mode, args.seed, **kwargs)
    if args.provenance:
        _write(dmc_provenance(result), args.provenance)
    report = {"mode": mode, "seed": args.seed, "copies": dp.copies, **_sizes(result.instance)}
    if args.verify:
        ok, worst = verify_wiring(result, args.q)
        report.update(verified=ok, deviation=worst, delta=str(dp.delta))
    return serialize_instance(result.instance), report


def _acyclic(inst: MixedInstance) -> tuple[MixedInstance, bool]:
    reduced = contract_cycles(inst)
    return reduced, reduced is not inst


def cmd_to_clique(args):
    inst, contracted = _acyclic(_load(args.instance, MixedInstance))
    ci = build_clique_instance(inst, args.beta, canonical_family(inst), **({"vertex_cap": args.cap} if args.cap else {}))
    edges = sum(1 for _ in ci.edges())
    return serialize_clique(ci), {"contracted": contracted, "beta": args.beta, "vertices": ci.n,
                                  "cedges": edges, "target": ci.target}


def cmd_min_beta(args):
    inst, contracted = _acyclic(_load(args.instance, MixedInstance))
    beta_max = args.beta if args.beta else inst.n
    res = min_beta(inst, beta_max, **({"vertex_cap": args.cap} if args.cap else {}))
    report = {"contracted": contracted, "beta_max": beta_max, "k": inst.k}
    if res is None:
        report["beta"] = "none"
    else:
        report.update(beta=res.beta, vertices=res.clique_instance.n, orientation=_bits(res.orientation.bits))
    return None, report


def cmd_plan(args):
    lp = plan(args.k, args.q, args.layers, args.copies)
    log_pb = (lp.layers - 1) * math.log2(lp.multiplier)
    small = log_pb < SYMBOLIC_ABOVE
    report = {"k": lp.k, "q": lp.q, "B": lp.layers, "delta": str(lp.delta), "constant": lp.constant,
              "multiplier": lp.multiplier}
    if lp.layers >= 2:
        report["p2"] = lp.multiplier
    report["pB"] = _big(lp.multiplier ** (lp.layers - 1) if small else None, log_pb)
    report["k0"] = _big(lp.k * lp.multiplier ** (lp.layers - 1) if small else None, lp.log2_k0)
    report["uses_defaults"] = lp.uses_defaults
    return None, report


def cmd_plan_dmc(args):
    dp = plan_dmc(args.p, args.q, args.m, args.k0)
    log_full = 2 * dp.copies
    return None, {"p": dp.p, "q": dp.q, "M": dp.copies, "k0": dp.k0, "p0": dp.p0, "delta": str(dp.delta),
                  "full_space_pairs": _big(4**dp.copies if log_full < SYMBOLIC_ABOVE else None, log_full)}


def cmd_verify_sampler(args):
    domain = TupleDomain(args.length, args.radix)
    delta = Fraction(args.delta)
    table = random_indicator_table(domain, args.functions, args.seed)
    m = args.m or required_sample_count(delta, math.log2(max(2, args.functions)))
    family = sample_tuples(domain, m, args.seed)
    ok, worst = verify_sampler(family, table, delta)
    return None, {"domain": f"[{args.radix}]^{args.length}", "functions": args.functions, "delta": str(delta),
                  "m": m, "seed": args.seed, "deviation": worst, "ok": ok}


COMMANDS = {
    "gen": cmd_gen,
    "solve-so": cmd_solve_so,
    "solve-dmc": cmd_solve_dmc,
    "solve-clique": cmd_solve_clique,
    "amplify-so": cmd_amplify_so,
    "reduce-dmc": cmd_reduce_dmc,
    "to-clique": cmd_to_clique,
    "min-beta": cmd_min_beta,
    "plan": cmd_plan,
    "plan-dmc": cmd_plan_dmc,
    "verify-sampler": cmd_verify_sampler,
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--json", action="store_true", help="report as one JSON object")
    common.add_argument("--cap", type=_positive, help="size or enumeration cap")
    common.add_argument("--threads", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog="orientgap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, instance=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if instance:
            p.add_argument("instance", help="instance file, or - for stdin")
        return p

    g = add("gen", "generate an instance", instance=False)
    g.add_argument("kind", choices=["no-edge", "yes-chain", "dmc-no", "dmc-yes", "random"])
    g.add_argument("--k", type=_positive, default=2)
    g.add_argument("--length", type=_positive, default=2)
    g.add_argument("--undirected", type=int, default=1)
    g.add_argument("--n", type=_positive, default=6)
    g.add_argument("--max-edges", type=int)
    g.add_argument("--unplanted", action="store_true")

    add("solve-so", "exact Steiner Orientation optimum")
    add("solve-dmc", "exact Max Directed Multicut optimum")
    add("solve-clique", "find a full multipartite clique")

    a = add("amplify-so", "gap amplification for Steiner Orientation")
    a.add_argument("--q", type=int, default=2)
    a.add_argument("--layers", type=_positive)
    a.add_argument("--copies", type=_positive, help="copy multiplier per layer")
    a.add_argument("--full-space", action="store_true")
    a.add_argument("--provenance", help="write per-pair wiring here")

    r = add("reduce-dmc", "parallel composition for Max Directed Multicut")
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--m", type=_positive, help="number of copies M")
    r.add_argument("--k0", type=_positive, help="number of sampled pairs")
    r.add_argument("--full-space", action="store_true")
    r.add_argument("--verify", action="store_true", help="check the wiring is a 1/(2q)-biased sampler")
    r.add_argument("--provenance", help="write per-pair wiring here")

    c = add("to-clique", "compile to a multipartite clique instance")
    c.add_argument("--beta", type=_positive, default=1)
    mb = add("min-beta", "smallest beta with a full clique")
    mb.add_argument("--beta", type=_positive, help="largest beta tried (default n)")

    pl = add("plan", "amplification parameters", instance=False)
    pl.add_argument("--k", type=_positive, default=2)
    pl.add_argument("--q", type=int, default=2)
    pl.add_argument("--layers", type=_positive)
    pl.add_argument("--copies", type=_positive)

    pd = add("plan-dmc", "composition parameters", instance=False)
    pd.add_argument("--p", type=_positive, default=1)
    pd.add_argument("--q", type=int, default=2)
    pd.add_argument("--m", type=_positive)
    pd.add_argument("--k0", type=_positive)

    vs = add("verify-sampler", "sample a family and check it against random subset indicators", instance=False)
    vs.add_argument("--length", type=_positive, default=3)
    vs.add_argument("--radix", type=_positive, default=4)
    vs.add_argument("--delta", default="0.1")
    vs.add_argument("--functions", type=_positive, default=256)
    vs.add_argument("--m", type=_positive, help="family size (default: required sample count)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        output, report = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"orientgap: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"orientgap: {exc}", file=sys.stderr)
        return 2
    except (ReductionError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report["seconds"] = round(time.perf_counter() - started, 4)
    if output is not None:
        _write(output, args.out)
        _emit_report(report, args, sys.stderr)
    else:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                _emit_report(report, args, fh)
        else:
            _emit_report(report, args, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
