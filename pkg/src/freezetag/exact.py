"""Exact wake-up trees for small instances by branch and bound.

The search walks the awake robots in order of availability.  The robot with
the smallest clock either wakes one more sleeper (both it and the new robot
are then available at the sleeper's position) or retires.  Every wake-up
tree corresponds to exactly one such decision sequence once the two robots
leaving a node are forced to pick their targets in increasing index order.
"""
from __future__ import annotations

import math
import time
from typing import NamedTuple

import numpy as np

from .core import Instance, InvalidInputError, WakeupTree
from .norms import Norm

TABLE_L2 = {
    4: 3.828, 5: 3.351, 6: 3.732, 7: 3.431, 8: 3.613, 9: 3.416, 10: 3.520,
    11: 3.383, 12: 3.449, 13: 3.349, 14: 3.454, 15: 3.318, 16: 3.443, 17: 3.331,
}


class SolveResult(NamedTuple):
    tree: WakeupTree
    optimum: float
    optimal: bool


class _Budget(Exception):
    pass


def _greedy(D, home):
    """Earliest robot wakes its nearest sleeper; gives the first incumbent."""
    n = len(D) - 1
    left = set(range(1, n + 1))
    parent = [-1] * (n + 1)
    wake = [0.0] * (n + 1)
    robots = [(0.0, 0)]
    while left:
        robots.sort()
        t, i = robots.pop(0)
        j = min(left, key=lambda k: (D[i][k], k))
        left.discard(j)
        parent[j] = i
        wake[j] = t + D[i][j]
        robots += [(wake[j], j), (wake[j], j)]
    val = max(wake)
    if home is not None:
        val = max([val] + [t + D[i][home] for t, i in robots])
    return val, parent, wake


def solve_matrix(D, home=None, time_budget=None, upper=math.inf):
    """Minimum makespan over wake-up trees on the distance matrix D (node 0 awake).

    With `home` set, every robot must also travel to node `home` and the
    objective is the time the last one arrives there.  Returns
    (value, parent, wake_times, optimal).
    """
    D = np.asarray(D, dtype=float)
    n = len(D) - 1
    Dl = D.tolist()
    if n == 0:
        v = 0.0 if home is None else Dl[0][home]
        return v, [-1], [0.0], True
    best, bparent, bwake = _greedy(Dl, home)
    if upper < best:
        best, bparent, bwake = upper, None, None
    order = [sorted(range(1, n + 1), key=lambda k, i=i: (Dl[i][k], k)) for i in range(n + 1)]
    # co-located sleepers are woken in index order
    prev = [0] * (n + 1)
    for k in range(1, n + 1):
        for j in range(k - 1, 0, -1):
            if Dl[j][k] == 0.0:
                prev[k] = j
                break
    back = [0.0] * (n + 1) if home is None else [Dl[i][home] for i in range(n + 1)]
    woken = [False] * (n + 1)
    woken[0] = True
    parent = [-1] * (n + 1)
    wake = [0.0] * (n + 1)
    deadline = None if time_budget is None else time.perf_counter() + time_budget
    state = {"best": best, "parent": bparent, "wake": bwake, "count": 0, "optimal": True}
    eps = 1e-12

    def rec(front, left, cur):
        # front: list of [t, node, count, floor]
        if deadline is not None:
            state["count"] += 1
            if state["count"] & 4095 == 0 and time.perf_counter() > deadline:
                raise _Budget
        best = state["best"]
        if left == 0:
            val = cur
            if home is not None:
                for t, i, c, f in front:
                    if t + back[i] > val:
                        val = t + back[i]
            if val < best - eps:
                state["best"] = val
                state["parent"] = parent[:]
                state["wake"] = wake[:]
            return
        lb = cur
        for j in range(1, n + 1):
            if woken[j]:
                continue
            m = math.inf
            for t, i, c, f in front:
                d = t + Dl[i][j]
                if d < m:
                    m = d
            m += back[j]
            if m > lb:
                lb = m
                if lb >= best - eps:
                    return
        if not front:
            return
        k = min(range(len(front)), key=lambda q: (front[q][0], front[q][1]))
        t, i, c, f = front[k]
        rest = front[:k] + front[k + 1:]
        Di = Dl[i]
        for j in order[i]:
            if woken[j] or j <= f or (prev[j] and not woken[prev[j]]):
                continue
            t2 = t + Di[j]
            if t2 + back[j] >= state["best"] - eps:
                if home is None:
                    break
                continue
            woken[j] = True
            parent[j] = i
            wake[j] = t2
            nf = rest + [[t2, j, 2, 0]]
            if c > 1:
                nf.append([t, i, c - 1, j])
            rec(nf, left - 1, t2 if t2 > cur else cur)
            woken[j] = False
        # retire every robot of this entry
        val = cur
        if home is not None and t + back[i] > val:
            val = t + back[i]
        if val < state["best"] - eps:
            rec(rest, left, val)

    try:
        rec([[0.0, 0, 1, 0]], n, 0.0)
    except _Budget:
        state["optimal"] = False
    if state["parent"] is None:
        raise RuntimeError("no tree below the given upper bound")
    return state["best"], state["parent"], state["wake"], state["optimal"]


def optimal_tree(instance: Instance, max_n: int = 12, time_budget=None) -> SolveResult:
    """Optimal wake-up tree with straight edges.

    `time_budget` is in seconds; when it runs out the incumbent is returned
    with ``optimal=False``.
    """
    n = instance.n
    if n > max_n:
        raise InvalidInputError(f"exact search refuses n={n} > max_n={max_n}")
    pos = instance.positions
    D = _matrix(instance.norm, pos)
    val, parent, _, ok = solve_matrix(D, time_budget=time_budget)
    tree = WakeupTree.from_parents(pos, parent, instance.norm)
    return SolveResult(tree, float(val), ok)


def _matrix(norm, pos):
    diff = pos[:, None, :] - pos[None, :, :]
    return norm(diff.reshape(-1, 2)).reshape(len(pos), len(pos))


def circle_points(n, norm: Norm):
    """n points equally spaced in arc length on the unit circle, first at (1, 0)."""
    from .norms import arc_walk

    step = 2 * norm.half_circumference / n
    start = np.array([1.0, 0.0]) / norm(np.array([1.0, 0.0]))
    return np.array([arc_walk(norm, start, k * step) if k else start for k in range(n)])


def unif_makespan(n: int, norm: Norm | None = None, max_n: int = 12, time_budget=None) -> float:
    if norm is None:
        norm = Norm.l2()
    if not 4 <= n <= max_n:
        raise InvalidInputError(f"unif_makespan needs 4 <= n <= {max_n}, got {n}")
    inst = Instance(norm, (0.0, 0.0), circle_points(n, norm))
    res = optimal_tree(inst, max_n=max_n, time_budget=time_budget)
    return res.optimum


def square13_6(eps: float) -> Instance:
    """Six sleepers in a diameter-1 l1 square that force makespan 2 + eps from a corner."""
    if not 0.0 <= eps <= 1.0 / 6.0:
        raise InvalidInputError(f"eps must lie in [0, 1/6], got {eps}")
    B = np.array([0.5, 0.5])
    C = np.array([1.0, 0.0])
    Dd = np.array([0.5, -0.5])
    pts = [B - eps / 2, B]
    for k in range(4):
        pts.append(C + (Dd - C) * k / 3)
    return Instance(Norm.l1(), (0.0, 0.0), np.array(pts))


def verify_13_6(eps: float = 1.0 / 6.0) -> float:
    return optimal_tree(square13_6(eps)).optimum
