"""wg: command-line driver for contexts, sieves, sequences, arc scans, moments and searches."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from ._num import fraction_str
from .acceptance import PROFILES, run_all
from .circle import moment_report, pseudorandomness_report
from .circle.spectral import scan_rows_csv
from .context import build_context
from .errors import DomainError, WGError
from .local import choose_b_vector, count_solutions
from .manifest import ArtifactWriter, new_manifest, params_hash
from .search import (
    count_representations,
    find_representation,
    s_min,
    sample_targets,
    theorem_interval,
    theta_threshold,
    threshold_table,
    wright_gap_demo,
)
from .sieve import alpha_plus, build_plan, plan_for_context, rho_plus_range
from .transfer import build_sequence

DENSE_BYTES = 10 ** 8  # larger sequences are written as (support, weights)


class UsageError(Exception):
    pass


def frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def big_int(text: str) -> int:
    try:
        return int(Fraction(text))  # accepts 1e6 style through Fraction("1e6")
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def int_list(text: str) -> list[int]:
    return [big_int(t) for t in text.split(",") if t.strip()]


def _context_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("context")
    g.add_argument("--k", type=int, default=2, help="power k >= 2")
    g.add_argument("--s", type=int, default=7, help="number of summands")
    g.add_argument("--theta", type=frac, default=Fraction(9, 10), help="interval exponent in (1/2, 1)")
    g.add_argument("--eta", type=frac, default=Fraction(1), help="pseudorandomness parameter in (0, 1]")
    g.add_argument("--x", type=big_int, default=10 ** 6, help="target x")
    g.add_argument("--w", type=int, default=None, help="override the smoothness bound w")
    g.add_argument("--b", type=int, default=None, help="residue b mod W")
    g.add_argument("--epsilon", type=frac, default=Fraction(1, 2), help="tolerance on Y/X^(1-1/k+theta/k)")


def _ctx(args):
    return build_context(args.k, args.s, args.theta, args.eta, args.x, w_override=args.w, b=args.b,
                         epsilon=args.epsilon)


def _writer(args, sub: str, context_hash: str, plan_hash=None) -> ArtifactWriter:
    return ArtifactWriter(args.out, new_manifest(sub, context_hash, args.seed, args.threads, plan_hash))


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, default=str))


# subcommands -------------------------------------------------------------------

def cmd_context(args) -> int:
    ctx = _ctx(args)
    plan = plan_for_context(ctx)
    w = _writer(args, "context", ctx.hash, plan.hash)
    info = {"context": ctx.to_dict(), "sigma_b": ctx.sigma_b, "relation_ratio": ctx.relation_ratio,
            "sieve_level": ctx.sieve_level, "Q": ctx.Q, "T": ctx.T, "root_window": list(ctx.root_window),
            "dplus_size": len(plan.dplus), "alpha_plus": alpha_plus(ctx, plan)}
    w.json("context.json", info)
    w.finish()
    _emit({"context_hash": ctx.hash, "W": ctx.W, "N": str(ctx.N), "D": ctx.sieve_level,
           "alpha_plus": info["alpha_plus"]})
    return 0


def cmd_local(args) -> int:
    params = {"q": args.q, "m": args.m, "k": args.k, "s": args.s, "W": args.W, "n0": args.n0}
    w = _writer(args, "local", params_hash(params))
    out = {}
    if args.q is not None:
        out["count"] = count_solutions(args.q, args.m, args.k, args.s, want_witness=args.witness).to_dict()
    if args.W is not None:
        out["b_vector"] = [str(b) for b in choose_b_vector(args.W, args.n0, args.k, args.s)]
    if not out:
        raise UsageError("local needs --q or --W")
    w.json("local.json", out)
    w.finish()
    _emit(out)
    return 0


def cmd_sieve(args) -> int:
    if args.D is not None:
        plan = build_plan(args.D)
        chash = params_hash({"D": args.D})
    else:
        ctx = _ctx(args)
        plan = plan_for_context(ctx)
        chash = ctx.hash
    lo = args.lo
    hi = args.hi if args.hi is not None else lo + 999
    rho = rho_plus_range(lo, hi, plan)
    w = _writer(args, "sieve", chash, plan.hash)
    w.csv("sieve.csv", ["n", "rho_plus"], ([str(lo + i), str(int(v))] for i, v in enumerate(rho.tolist())))
    summary = {"D": plan.D, "dplus_size": len(plan.dplus), "lo": lo, "hi": hi, "min_rho": int(rho.min()),
               "max_rho": int(rho.max())}
    w.json("sieve.json", summary)
    w.finish()
    _emit(summary)
    return 0


def cmd_transfer(args) -> int:
    ctx = _ctx(args)
    plan = plan_for_context(ctx)
    seq = build_sequence(ctx, plan, kind=args.kind, threads=args.threads)
    w = _writer(args, "transfer", ctx.hash, plan.hash)
    meta = {"kind": seq.kind, "N": str(seq.N), "normalizer": seq.normalizer, "alpha_plus": seq.alpha_plus,
            "support_size": int(seq.support.size), "total": seq.total(), "mean": seq.total() / seq.N,
            "byte_order": "little"}
    if 8 * seq.N <= DENSE_BYTES:
        meta["layout"] = "dense float64, entry i holds the value at n = i + 1"
        blob = seq.values.astype("<f8").tobytes()
    else:
        meta["layout"] = "sparse: support_size int64 n values, then support_size float64 weights"
        blob = seq.support.astype("<i8").tobytes() + seq.weights.astype("<f8").tobytes()
    w.binary(f"{seq.kind}.f64", blob, meta)
    w.finish()
    _emit(meta)
    return 0


def cmd_arcs(args) -> int:
    ctx = _ctx(args)
    plan = plan_for_context(ctx)
    scan = pseudorandomness_report(ctx, plan, M=args.M, max_points=args.points, threads=args.threads)
    w = _writer(args, "arcs", ctx.hash, plan.hash)
    w.csv("arcs.csv", ["j", "alpha", "class", "q", "a", "gap"], scan_rows_csv(scan))
    summ = scan.summary()
    w.json("arcs.json", summ)
    w.finish()
    _emit(summ)
    return 0


def cmd_moments(args) -> int:
    ctx = _ctx(args)
    plan = plan_for_context(ctx)
    seq = build_sequence(ctx, plan, kind=args.kind, threads=args.threads)
    reports = [moment_report(seq, u, args.M) for u in args.u]
    w = _writer(args, "moments", ctx.hash, plan.hash)
    w.json("moments.json", {"kind": seq.kind, "N": str(seq.N), "moments": reports})
    w.finish()
    _emit(reports)
    return 0


def cmd_search(args) -> int:
    if args.wright:
        params = {"k": args.k, "s": args.s, "m_base": args.m_base, "theta": str(args.theta), "u": args.u_range}
        w = _writer(args, "search", params_hash(params))
        rep = wright_gap_demo(args.k, args.s, args.m_base, args.theta, args.u_range)
        w.jsonl("search.jsonl", rep.rows)
        d = rep.to_dict()
        d.pop("rows")
        w.json("search.json", d)
        w.finish()
        _emit(d)
        return 0
    if args.lo is not None and args.hi is not None:
        lo, hi = args.lo, args.hi
    else:
        lo, hi = theorem_interval(args.x, args.theta, args.s)
    ns = args.n if args.n else sample_targets(args.k, args.s, args.x, args.samples, args.n_mod)
    params = {"k": args.k, "s": args.s, "lo": lo, "hi": hi, "n": [str(n) for n in ns], "count": args.count,
              "n_mod": args.n_mod}
    w = _writer(args, "search", params_hash(params))
    records = []
    for n in ns:
        rec = find_representation(n, args.k, args.s, lo, hi).to_dict()
        if args.count:
            rec["ordered_count"] = str(count_representations(n, args.k, args.s, lo, hi))
        records.append(rec)
    w.jsonl("search.jsonl", records)
    found = sum(r["found"] for r in records)
    summary = {"samples": len(records), "found": found, "interval": [lo, hi]}
    w.json("search.json", summary)
    w.finish()
    _emit(summary)
    return 0


def cmd_thresholds(args) -> int:
    params = {"k": args.k, "s": args.s, "table": args.table, "theta": str(args.theta)}
    w = _writer(args, "thresholds", params_hash(params))
    if args.table:
        rows = threshold_table()
        for r in rows:
            print(f"k={r['k']} s={r['s']} theta={r['theta_bound']} ({r['decimal']}) binding={r['binding_constraint']}")
        w.json("thresholds.json", {"table": rows})
    elif args.theta is not None:
        val = s_min(args.k, args.theta)
        print(val)
        w.json("thresholds.json", {"k": args.k, "theta": fraction_str(args.theta), "s_min": val})
    else:
        r = theta_threshold(args.k, args.s)
        print(fraction_str(r.theta_bound))
        w.json("thresholds.json", r.to_dict())
    w.finish()
    return 0


def cmd_verify_all(args) -> int:
    only = set(args.only) if args.only else None
    w = _writer(args, "verify-all", params_hash({"profile": args.profile, "only": sorted(only or []),
                                                 "seed": args.seed}))
    results = run_all(args.profile, only=only, threads=args.threads, seed=args.seed)
    for r in results:
        print(r.line)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    # timings vary run to run, so they go to the manifest rather than the outputs
    rows = []
    for r in results:
        d = r.to_dict()
        d.pop("seconds")
        d["detail"] = {k: v for k, v in d["detail"].items() if k != "within_budget"}
        rows.append(d)
    w.json("verify.json", {"profile": args.profile, "results": rows})
    w.manifest.timings = {str(r.number): round(r.seconds, 3) for r in results}
    w.finish()
    return 1 if failed else 0


# parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="wg_out", help="output directory")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized verifiers")
    common.add_argument("--threads", type=int, default=1, help="worker cap for internal parallelism")
    common.add_argument("--config", default=None, help="key = value file pre-setting any flag")

    parser = argparse.ArgumentParser(prog="wg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("context", parents=[common], help="build and validate a W-tricked context")
    _context_args(p)
    p.set_defaults(func=cmd_context)

    p = sub.add_parser("local", parents=[common], help="local solution counts and b-vectors")
    p.add_argument("--q", type=big_int, default=None)
    p.add_argument("--m", type=big_int, default=0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--s", type=int, default=6)
    p.add_argument("--witness", action="store_true", help="also return one solution")
    p.add_argument("--W", type=big_int, default=None, help="modulus for a b-vector")
    p.add_argument("--n0", type=big_int, default=0, help="target residue for the b-vector")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("sieve", parents=[common], help="rho+ over a range (CSV)")
    _context_args(p)
    p.add_argument("--D", type=big_int, default=None, help="sieve level (default: from the context)")
    p.add_argument("--lo", type=big_int, default=1)
    p.add_argument("--hi", type=big_int, default=None)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("transfer", parents=[common], help="f_b or nu_b as binary float64 plus sidecar")
    _context_args(p)
    p.add_argument("--kind", choices=("f_b", "nu_b"), default="f_b")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("arcs", parents=[common], help="pseudorandomness scan of nu_b (CSV)")
    _context_args(p)
    p.add_argument("--M", type=big_int, default=None, help="grid size (default next power of two >= 8N)")
    p.add_argument("--points", type=int, default=1024, help="sample size when the grid is too large")
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("moments", parents=[common], help="even moments by quadrature against direct energy")
    _context_args(p)
    p.add_argument("--kind", choices=("f_b", "nu_b"), default="f_b")
    p.add_argument("--u", type=int_list, default=[2], help="comma list of even exponents")
    p.add_argument("--M", type=big_int, default=None)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("search", parents=[common], help="explicit prime representations (JSON lines)")
    _context_args(p)
    p.add_argument("--n", type=int_list, default=None, help="comma list of targets")
    p.add_argument("--samples", type=int, default=50, help="targets n = s mod R_k near s x^k")
    p.add_argument("--n-mod", type=int, default=None, help="sampling modulus for targets (default R_k)")
    p.add_argument("--lo", type=big_int, default=None)
    p.add_argument("--hi", type=big_int, default=None)
    p.add_argument("--count", action="store_true", help="also count ordered representations")
    p.add_argument("--wright", action="store_true", help="run the gap demonstration instead")
    p.add_argument("--m-base", type=int, default=50)
    p.add_argument("--u-range", type=int, default=20)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("thresholds", parents=[common], help="theta thresholds and minimal s")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--s", type=int, default=7)
    p.add_argument("--theta", type=frac, default=None, help="report the least admissible s instead")
    p.add_argument("--table", action="store_true", help="thresholds for k = 2..8")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    p.add_argument("--profile", choices=PROFILES, default="desk")
    p.add_argument("--only", type=int_list, default=None, help="comma list of criterion numbers")
    p.set_defaults(func=cmd_verify_all)
    return parser


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict:
    """Lines `key = value`; '#' starts a comment; keys are flag names without dashes (- or _)."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, val = (t.strip() for t in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Turn config entries into subparser defaults so that explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    cmd = next((a for a in argv if not a.startswith("-")), None)
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    if cmd not in subs.choices:
        return
    sp = subs.choices[cmd]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, val in cfg.items():
        act = actions.get(key)
        if act is None or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for {cmd}")
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = _parse_bool(val)
        else:
            conv = act.type or str
            try:
                defaults[key] = conv(val)
            except argparse.ArgumentTypeError as e:
                raise UsageError(f"config {key}: {e}")
            if act.choices and defaults[key] not in act.choices:
                raise UsageError(f"config {key}: {val!r} not in {list(act.choices)}")
    sp.set_defaults(**defaults)


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (UsageError, OSError) as e:
        return _fail(2, "usage", str(e))
    args = parser.parse_args(argv)  # exits 2 on unknown flags
    try:
        return args.func(args)
    except UsageError as e:
        return _fail(2, "usage", str(e))
    except DomainError as e:
        return _fail(2, e.kind, str(e))
    except WGError as e:
        return _fail(1, e.kind, str(e))
    except (ValueError, ArithmeticError, MemoryError) as e:
        return _fail(1, type(e).__name__, str(e))


if __name__ == "__main__":
    sys.exit(main())
