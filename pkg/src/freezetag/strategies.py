"""Name -> strategy table used by the command line and the benchmarks."""
from __future__ import annotations

import time
from typing import Callable, NamedTuple

import numpy as np

from .cones import (
    StrategyReport,
    general_norm_wakeup,
    heap_strategy,
    line_optimal,
    linear_split_strategy,
    split_cone_strategy,
    wake_four_general,
)
from .core import Instance, WakeupTree
from .exact import optimal_tree
from .l1.disk import wake_l1_disk
from .norms import InvalidInputError

DEFAULT_MAX_N = 10


class Strategy(NamedTuple):
    name: str
    run: Callable  # (instance, opts) -> StrategyReport
    why_not: Callable  # (instance, opts) -> reason string or None
    constructive: bool = True


def _l1_transfer(norm):
    # eta(x) <= c * |x|_1 with c = max(eta(e1), eta(e2))
    return float(np.max(norm(np.eye(2))))


def _run_l1_five(inst: Instance, opts) -> StrategyReport:
    t0 = time.perf_counter()
    if inst.norm.is_l1:
        tree = wake_l1_disk(inst)
        return StrategyReport(tree, 5 * inst.radius, time.perf_counter() - t0, "l1_five")
    # build under l1 and re-measure the same paths in the instance norm
    l1 = inst.with_norm(type(inst.norm).l1())
    t1 = wake_l1_disk(l1)
    tree = WakeupTree.from_parents(inst.positions, t1.parent, inst.norm, t1.waypoints)
    bound = 5 * l1.radius * _l1_transfer(inst.norm)
    return StrategyReport(tree, bound, time.perf_counter() - t0, "l1_five",
                          {"transfer": _l1_transfer(inst.norm)})


def _l1_five_why(inst, opts):
    if inst.norm.is_l1 or opts.get("scale_to_unit"):
        return None
    return f"l1_five requires the l1 norm (instance norm is {inst.norm.label}); pass --scale-to-unit to run it through the l1 comparison bound"


def _run_exact(inst, opts):
    t0 = time.perf_counter()
    res = optimal_tree(inst, max_n=opts.get("max_n", DEFAULT_MAX_N), time_budget=opts.get("time_budget"))
    return StrategyReport(res.tree, res.optimum, time.perf_counter() - t0,
                          "exact" if res.optimal else "exact:incumbent", {"optimal": res.optimal})


def _exact_why(inst, opts):
    m = opts.get("max_n", DEFAULT_MAX_N)
    if inst.n > m:
        return f"exact needs n <= max_n={m}, instance has n={inst.n}"
    return None


def _four_why(inst, opts):
    return None if inst.n == 4 else f"four needs exactly 4 sleepers, instance has {inst.n}"


def _line_why(inst, opts):
    try:
        line_optimal(inst)
    except InvalidInputError as e:
        return str(e)
    return None


def _always(inst, opts):
    return None


REGISTRY = {
    "l1_five": Strategy("l1_five", _run_l1_five, _l1_five_why),
    "heap": Strategy("heap", lambda i, o: heap_strategy(i), _always),
    "split_cone": Strategy("split_cone", lambda i, o: split_cone_strategy(i), _always),
    "linear_split": Strategy("linear_split", lambda i, o: linear_split_strategy(i), _always),
    "general": Strategy("general", lambda i, o: general_norm_wakeup(i, time_budget=o.get("time_budget")), _always),
    "exact": Strategy("exact", _run_exact, _exact_why, constructive=False),
    "four": Strategy("four", lambda i, o: wake_four_general(i), _four_why),
    "line": Strategy("line", lambda i, o: line_optimal(i), _line_why),
}


def get(name) -> Strategy:
    try:
        return REGISTRY[name]
    except KeyError:
        raise InvalidInputError(f"unknown strategy {name!r}; choose from {', '.join(REGISTRY)}") from None


def run(name, inst: Instance, **opts) -> StrategyReport:
    s = get(name)
    why = s.why_not(inst, opts)
    if why:
        raise InvalidInputError(why)
    return s.run(inst, opts)


def applicable(inst: Instance, **opts):
    return [name for name, s in REGISTRY.items() if s.why_not(inst, opts) is None]
