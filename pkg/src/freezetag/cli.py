"""ftk: solve, compare, bench, gen and render from the shell.

Exit codes: 0 success, 2 parse or contract error, 3 an invalid tree or a
makespan above the claimed bound.
"""
from __future__ import annotations

import argparse
import os
import re
import sys

from . import bench, strategies
from .core import ValidationError, validate
from .generators import KINDS, generate
from .io import ParseError, emit_instance, emit_tree, parse_instance, parse_norm, parse_tree, write_atomic
from .norms import EPS, DomainError, InvalidInputError
from .render import render_svg

OK, CONTRACT, VIOLATION = 0, 2, 3


class Violation(Exception):
    pass


def norm_arg(text):
    s = text.strip()
    m = re.fullmatch(r"l(?:p\s*)?(\d+(?:\.\d*)?|inf)", s)
    if m and s not in ("l1", "l2", "linf"):
        s = f"lp {m.group(1)}"
    return parse_norm("norm " + s)


def eps_from_env():
    raw = os.environ.get("FTK_EPS")
    if raw is None:
        return EPS
    try:
        v = float(raw)
    except ValueError:
        raise InvalidInputError(f"FTK_EPS must be a number, got {raw!r}") from None
    if not v >= 0:
        raise InvalidInputError(f"FTK_EPS must be non-negative, got {raw!r}")
    return v


def _read_instance(path, scale):
    with open(path) as f:
        inst = parse_instance(f.read())
    if scale and inst.radius > 0:
        inst = inst.scaled(1.0 / inst.radius)
    return inst


def _opts(a):
    o = {"max_n": a.max_n, "scale_to_unit": a.scale_to_unit}
    if a.time_budget_ms is not None:
        o["time_budget"] = a.time_budget_ms / 1000.0
    return o


def _check(rep, inst, eps):
    errs = validate(rep.tree, inst, eps)
    if errs:
        raise Violation(f"{rep.strategy_name}: invalid tree: {errs[0]}")
    if rep.makespan > rep.claimed_bound + 1e-6:
        raise Violation(f"{rep.strategy_name}: makespan {rep.makespan:.9g} exceeds claimed bound {rep.claimed_bound:.9g}")


def cmd_solve(a, eps):
    inst = _read_instance(a.instance, a.scale_to_unit)
    rep = strategies.run(a.strategy, inst, **_opts(a))
    print(f"makespan {rep.makespan:.6f}")
    print(f"bound {rep.claimed_bound:.6f}")
    out = a.out or os.path.splitext(a.instance)[0] + ".tree"
    text = emit_tree(rep.tree)
    # what we write must read back as a valid tree
    errs = validate(parse_tree(text, inst), inst, eps)
    write_atomic(out, text)
    if errs:
        raise Violation(f"tree file {out} does not validate: {errs[0]}")
    _check(rep, inst, eps)
    return OK


def cmd_compare(a, eps):
    inst = _read_instance(a.instance, a.scale_to_unit)
    opts = _opts(a)
    names = strategies.applicable(inst, **opts)
    rows, bad = [], []
    for name in names:
        rep = strategies.run(name, inst, **opts)
        rows.append((name, rep))
        try:
            _check(rep, inst, eps)
        except Violation as e:
            bad.append(str(e))
    print(f"{'strategy':<14}{'makespan':>12}{'bound':>12}{'ms':>10}")
    for name, rep in rows:
        print(f"{name:<14}{rep.makespan:>12.6f}{rep.claimed_bound:>12.6f}{rep.construction_time * 1e3:>10.2f}")
    if a.out:
        recs = [bench.BenchRecord(n, inst.n, inst.norm.label, r.makespan, float(r.claimed_bound),
                                  int(r.construction_time * 1e9), a.seed) for n, r in rows]
        write_atomic(a.out, bench.to_csv(recs))
    if bad:
        raise Violation("; ".join(bad))
    return OK


def _int_list(s):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise InvalidInputError(f"expected comma-separated integers, got {s!r}") from None


def cmd_bench(a, eps):
    names = [x.strip() for x in a.strategy.split(",") if x.strip()]
    for name in names:
        strategies.get(name)
    sizes = _int_list(a.n)
    norm = norm_arg(a.norm)
    seeds = list(range(a.seed, a.seed + a.seeds))
    try:
        recs = bench.run_bench(names, sizes, norm, seeds, a.kind, a.repeat, eps, **_opts(a))
    except bench.BoundViolation as e:
        raise Violation(str(e)) from None
    out = a.out or "bench.csv"
    for p in bench.write_report(recs, out):
        print(f"wrote {p}")
    for name, rs in bench.time_ratios(recs).items():
        for n, q in rs:
            print(f"{name} time ratio at n={n}: {q:.3f}")
    return OK


def cmd_gen(a, eps):
    params = {}
    if a.n is not None:
        params["n"] = a.n
    if a.eps is not None:
        params["eps"] = a.eps
    norm = norm_arg(a.norm) if a.norm else None
    text = emit_instance(generate(a.kind, params, a.seed, norm))
    if a.out:
        write_atomic(a.out, text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_render(a, eps):
    inst = _read_instance(a.instance, a.scale_to_unit)
    if a.tree:
        with open(a.tree) as f:
            tree = parse_tree(f.read(), inst)
        errs = validate(tree, inst, eps)
        if errs:
            raise Violation(f"tree file {a.tree} does not validate: {errs[0]}")
        title = os.path.basename(a.tree)
    else:
        rep = strategies.run(a.strategy, inst, **_opts(a))
        tree, title = rep.tree, rep.strategy_name
    out = a.out or os.path.splitext(a.instance)[0] + ".svg"
    write_atomic(out, render_svg(tree, inst, title))
    print(f"wrote {out}")
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="ftk", description="Wake-up trees for the freeze-tag problem.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q):
        q.add_argument("--max-n", type=int, default=strategies.DEFAULT_MAX_N, help="largest n for exact search")
        q.add_argument("--time-budget-ms", type=float, default=None)
        q.add_argument("--scale-to-unit", action="store_true", help="scale the instance to radius 1 first")
        q.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("solve", help="build one tree and write it")
    q.add_argument("instance")
    q.add_argument("--strategy", default="general", help=", ".join(strategies.REGISTRY))
    q.add_argument("--out")
    common(q)
    q.set_defaults(fn=cmd_solve)

    q = sub.add_parser("compare", help="run every applicable strategy")
    q.add_argument("instance")
    q.add_argument("--out", help="optional CSV")
    common(q)
    q.set_defaults(fn=cmd_compare)

    q = sub.add_parser("bench", help="time strategies on generated instances")
    q.add_argument("--strategy", default="linear_split", help="comma-separated names")
    q.add_argument("--n", default="1024,2048,4096", help="comma-separated sizes")
    q.add_argument("--norm", default="l2")
    q.add_argument("--kind", default="random_disk", choices=["random_disk", "uniform_circle"])
    q.add_argument("--seeds", type=int, default=1, help="number of seeds starting at --seed")
    q.add_argument("--repeat", type=int, default=5, help="runs per record; the median time is kept")
    q.add_argument("--out", help="CSV path (figures go beside it)")
    common(q)
    q.set_defaults(fn=cmd_bench)

    q = sub.add_parser("gen", help="write a generated instance")
    q.add_argument("kind", choices=KINDS)
    q.add_argument("--n", type=int)
    q.add_argument("--eps", type=float)
    q.add_argument("--norm")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q.set_defaults(fn=cmd_gen)

    q = sub.add_parser("render", help="draw a tree as SVG")
    q.add_argument("instance")
    q.add_argument("--tree", help="tree file; otherwise --strategy is run")
    q.add_argument("--strategy", default="general")
    q.add_argument("--out")
    common(q)
    q.set_defaults(fn=cmd_render)
    return p


def main(argv=None):
    p = build_parser()
    a = p.parse_args(argv)
    try:
        eps = eps_from_env()
        return a.fn(a, eps)
    except Violation as e:
        print(f"bound violation: {e}", file=sys.stderr)
        return VIOLATION
    except ValidationError as e:
        print(f"bound violation: {e}", file=sys.stderr)
        return VIOLATION
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return CONTRACT
    except (InvalidInputError, DomainError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return CONTRACT


if __name__ == "__main__":
    sys.exit(main())
