"""Command line front end: ``bdgmaps <subcommand> [flags]``.

Tables go to ``--out`` (stdout by default) as CSV or JSON; samples and
enumerations are written one JSON document per line. Exit status is 0 on
success, 2 when a sampling budget is exhausted and 3 when an internal
invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from typing import Sequence

from .errors import BudgetExhausted, InvalidInput, InvariantViolation

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3

BUDGETS = """\
desk-scale budgets: the size-only law P^n is cheap up to n = 5000; the
positivity-conditioned law (rooted maps) costs about n^{5/2} tree draws per
sample with rejection and about n per sample with the exact-size sampler,
and the experiments default to n <= 800.
"""


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def _emit(rows: list[dict], args) -> None:
    if not rows:
        return
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump(rows, out, indent=1, default=_jsonable)
            out.write("\n")
        else:
            keys: list[str] = []
            for r in rows:
                keys += [k for k in r if k not in keys]
            w = csv.DictWriter(out, fieldnames=keys)
            w.writeheader()
            w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def _jsonable(x):
    if hasattr(x, "item"):
        return x.item()
    if hasattr(x, "tolist"):
        return x.tolist()
    return str(x)


def _lines(docs, args) -> int:
    out = open(args.out, "w") if args.out else sys.stdout
    k = 0
    try:
        for d in docs:
            out.write(json.dumps(d, default=_jsonable) + "\n")
            k += 1
    finally:
        if out is not sys.stdout:
            out.close()
    return k


# ------------------------------------------------------------------ commands


def cmd_solve(args) -> int:
    from .weights import kappa_weights, load_weights, solve_and_classify

    q = kappa_weights(args.kappa) if args.weights is None else load_weights(args.weights)
    t0 = time.perf_counter()
    p = solve_and_classify(q)
    row = {"seed": args.seed, "n": math.nan, "samples": 0, "wall_time": round(time.perf_counter() - t0, 6)}
    row |= {k: (json.dumps(v) if isinstance(v, list) else v) for k, v in p.summary().items()}
    _emit([row], args)
    return EXIT_OK


def cmd_sample(args) -> int:
    from .bdg import to_map, to_rooted_map
    from .rng import STREAM_SAMPLE, make_rng
    from .sampling import OffspringTables, SamplerConfig, sample_conditioned
    from .weights import kappa_params

    params = kappa_params(args.kappa)
    tab = OffspringTables.from_params(params)
    rooted = args.law == "rooted"
    cfg = SamplerConfig(size_n=args.faces, condition="size_and_positive" if rooted else "size",
                        method=args.method, max_attempts=args.max_attempts)

    def gen():
        for i in range(args.count):
            mob, st = sample_conditioned(cfg, params, make_rng(args.seed, STREAM_SAMPLE, i), tab)
            m = to_rooted_map(mob) if rooted else to_map(mob)
            yield {"index": i, "seed": args.seed, "kappa": args.kappa, "n": args.faces, "law": args.law,
                   "mobile": mob.to_json(), "map": m.to_json(), "attempts": st.attempts,
                   "wall_time": round(st.seconds, 6)}

    _lines(gen(), args)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .bdg import to_map, to_rooted_map
    from .enumeration import exact_conditional_law

    rooted = args.law == "rooted"
    law = exact_conditional_law(args.kappa, args.faces, "size_and_positive" if rooted else "size")

    def gen():
        for i, (mob, p) in enumerate(law):
            m = to_rooted_map(mob) if rooted else to_map(mob)
            yield {"index": i, "kappa": args.kappa, "n": args.faces, "law": args.law, "probability": str(p),
                   "mobile": mob.to_json(), "code": m.canonical_code().hex()}

    k = _lines(gen(), args)
    print(f"{k} mobiles", file=sys.stderr)
    return EXIT_OK


def cmd_snake_table(args) -> int:
    from .snake import functional_table

    rows = []
    for kind in args.kind:
        for r in functional_table(kind, args.N, args.paths, args.seed, args.threads):
            rows.append({"seed": r["seed"], "n": r["N"], "samples": r["paths"], "wall_time": r["wall_time"]} | r)
    _emit(rows, args)
    return EXIT_OK


def cmd_exp_radius(args) -> int:
    from .experiments import exp_radius

    _emit(exp_radius(args.kappa, args.n, args.samples, args.seed, args.threads, args.snake_N, args.snake_paths), args)
    return EXIT_OK


def cmd_exp_profile(args) -> int:
    from .experiments import exp_profile

    _emit(exp_profile(args.kappa, args.n, args.samples, args.seed, args.threads, args.snake_N, args.snake_paths), args)
    return EXIT_OK


def cmd_exp_distance(args) -> int:
    from .experiments import exp_typical_distance

    _emit(exp_typical_distance(args.kappa, args.n, args.samples, args.seed, args.threads, args.snake_N,
                               args.snake_paths), args)
    return EXIT_OK


def cmd_exp_separating(args) -> int:
    from .experiments import exp_separating

    _emit(exp_separating(args.kappa, args.n, args.epsilon, args.samples, args.seed, args.threads), args)
    return EXIT_OK


def cmd_exp_constants(args) -> int:
    from .experiments import exp_constants

    _emit(exp_constants(args.kappa, args.n, args.samples, args.seed, args.pos_samples), args)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def flags(top: bool) -> argparse.ArgumentParser:
        # accepted before or after the subcommand; only the top level sets defaults
        g = argparse.ArgumentParser(add_help=False)
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        g.add_argument("--seed", type=int, default=d(0), help="root seed (default 0)")
        g.add_argument("--threads", type=int, default=d(1), help="worker threads; output does not depend on it")
        g.add_argument("--out", default=d(None), help="output file (default stdout)")
        g.add_argument("--format", choices=("csv", "json"), default=d("csv"), help="table format")
        return g

    common = flags(False)

    p = argparse.ArgumentParser(prog="bdgmaps", description=__doc__, epilog=BUDGETS,
                                formatter_class=argparse.RawDescriptionHelpFormatter, parents=[flags(True)])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_, description=help_, epilog=BUDGETS, parents=[common],
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        s.set_defaults(func=fn)
        return s

    s = add("solve", cmd_solve, "solve f_q(x) = 1 - 1/x, classify q and print the derived constants")
    s.add_argument("--kappa", type=int, default=2)
    s.add_argument("--weights", default=None, help='JSON file or string {"weights": {"2": "1/12"}}')

    s = add("sample", cmd_sample, "sample 2kappa-angulations with n faces (one JSON line per map)")
    s.add_argument("--kappa", type=int, default=2)
    s.add_argument("--faces", type=int, required=True)
    s.add_argument("--law", choices=("rooted", "rooted-pointed"), default="rooted")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--method", choices=("exact", "rejection"), default="exact")
    s.add_argument("--max-attempts", type=int, default=10**7)

    s = add("enumerate", cmd_enumerate, "list every mobile of a small size with its exact probability")
    s.add_argument("--kappa", type=int, default=2)
    s.add_argument("--faces", type=int, required=True)
    s.add_argument("--law", choices=("rooted", "rooted-pointed"), default="rooted")

    s = add("snake-table", cmd_snake_table, "quantile tables of discrete snake functionals")
    s.add_argument("--kind", nargs="+", choices=("range", "sup", "occupation"), default=["range"])
    s.add_argument("--N", type=int, default=4096, help="tree edges per path")
    s.add_argument("--paths", type=int, default=100_000)

    for name, fn, what in (("exp-radius", cmd_exp_radius, "rescaled radius against the snake range"),
                           ("exp-profile", cmd_exp_profile, "rescaled profile against the snake occupation measure"),
                           ("exp-distance", cmd_exp_distance, "typical distance against the snake supremum")):
        s = add(name, fn, what)
        s.add_argument("--kappa", type=int, default=2)
        if name == "exp-radius":
            s.add_argument("--n", type=_ints, default=[100, 200, 400], help="comma separated sizes")
        else:
            s.add_argument("--n", type=int, default=400)
        s.add_argument("--samples", type=int, default=2000)
        s.add_argument("--snake-N", dest="snake_N", type=int, default=4096)
        s.add_argument("--snake-paths", dest="snake_paths", type=int, default=100_000)

    s = add("exp-separating", cmd_exp_separating, "fraction of maps with a separating vertex in the size window")
    s.add_argument("--kappa", type=int, default=2)
    s.add_argument("--n", type=_ints, default=[100, 200, 400, 800])
    s.add_argument("--epsilon", type=float, default=0.2)
    s.add_argument("--samples", type=int, default=1000)

    s = add("exp-constants", cmd_exp_constants, "n^{3/2} P(#T^1 = n), n P^n(U > 0) and the leaf fraction")
    s.add_argument("--kappa", type=int, default=2)
    s.add_argument("--n", type=_ints, default=[50, 100, 200, 400])
    s.add_argument("--samples", type=int, default=10**6)
    s.add_argument("--pos-samples", dest="pos_samples", type=int, default=20_000)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InvalidInput, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
