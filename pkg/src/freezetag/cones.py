"""Cone-based strategies for an arbitrary norm.

Every strategy here builds a wake-up tree rooted at the awake robot p0 and
reports the upper bound its construction guarantees.  Directions are
measured by the anticlockwise arc parameter of the unit circle (see
`Norm.arc_param`), so a cone is just an interval of that parameter.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .core import Instance, WakeupTree
from .exact import optimal_tree
from .norms import EPS, Cone, InvalidInputError, Norm

GOLDEN = (1 + math.sqrt(5)) / 2
SPLIT = 1 / GOLDEN
LOG2_GOLDEN = math.log2(GOLDEN)
N_THRESHOLD = 9


@dataclass(frozen=True)
class StrategyReport:
    tree: WakeupTree
    claimed_bound: float
    construction_time: float  # seconds
    strategy_name: str
    details: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def makespan(self):
        return self.tree.makespan


@dataclass(frozen=True)
class GammaBounds:
    lower: float
    upper: float
    norm: Norm
    n: int | None = None


# geometry helpers


def _relative(instance):
    rel = instance.sleepers - instance.p0
    d = instance.norm(rel) if len(rel) else np.zeros(0)
    return rel, np.asarray(d, dtype=float).reshape(-1)


def _offsets(norm, rel, d, s0):
    """Arc offsets of each direction from parameter s0 (zero vectors get 0)."""
    P = norm.perimeter
    if not len(rel):
        return np.zeros(0)
    off = np.mod(norm.arc_param(rel) - s0, P)
    off = np.where(off > P - EPS, 0.0, off)
    return np.where(d <= EPS * max(1.0, float(d.max())), 0.0, off)


def covering_cone(norm, rel, d=None):
    """Smallest cone (start parameter, arc length) holding every direction of `rel`."""
    rel = np.asarray(rel, dtype=float).reshape(-1, 2)
    if d is None:
        d = np.asarray(norm(rel), dtype=float).reshape(-1)
    nz = d > EPS * max(1.0, float(d.max()) if len(d) else 1.0)
    if not nz.any():
        return 0.0, 0.0
    P = norm.perimeter
    t = np.sort(np.mod(norm.arc_param(rel[nz]), P))
    gaps = np.diff(np.append(t, t[0] + P))
    k = int(np.argmax(gaps))
    s0 = float(t[(k + 1) % len(t)])
    return s0, float(max(P - gaps[k], 0.0))


def _cone_setup(instance, cone):
    """Relative points, distances, offsets, arc length and radius for a cone strategy."""
    norm = instance.norm
    rel, d = _relative(instance)
    if cone is None:
        s0, w = covering_cone(norm, rel, d)
        off = _offsets(norm, rel, d, s0)
        w = max(w, float(off.max()) if len(off) else 0.0)
    else:
        if cone.norm != norm:
            raise InvalidInputError("cone and instance use different norms")
        if len(rel) and not np.all(cone.contains_many(rel)):
            raise InvalidInputError("every sleeper must lie in the cone")
        w = float(cone.arc_length)
        off = np.minimum(cone.offsets(rel), w) if len(rel) else np.zeros(0)
    r = float(d.max()) if len(d) else 0.0
    return rel, d, off, w, r


# tree builders: `parent` is a node-indexed int array (node = sleeper + 1),
# `d` and `off` are per-sleeper arrays, `order` collects nodes parents first


def _heap_into(parent, ids, d, root, order):
    """Binary min-heap on distance over `ids`, hung below node `root`; returns the heap array."""
    ids = np.asarray(ids, dtype=np.int64)
    if not len(ids):
        return ids
    h = list(zip(d[ids].tolist(), ids.tolist()))
    heapq.heapify(h)
    H = np.fromiter((j for _, j in h), np.int64, len(h))
    parent[H[0] + 1] = root
    k = np.arange(1, len(H))
    parent[H[1:] + 1] = H[(k - 1) // 2] + 1
    order.extend((H + 1).tolist())
    return H


def _split_into(parent, ids, d, off, lo, w, root, order, info=None):
    """Split-cone tree over `ids` (interval [lo, lo + w]) below node `root`.

    `info`, when given, receives per sleeper: [interval start, interval
    length, depth, proof certificate (the arc budget the analysis charges
    to the branch), number of children, split-cone parent].
    """
    ids = np.asarray(ids, dtype=np.int64)
    if not len(ids):
        return
    srt = ids[np.lexsort((ids, d[ids]))]
    # work on local positions 0..m-1 in distance order
    o = off[srt].tolist()
    glob = srt.tolist()
    par = [0] * len(glob)
    par[0] = -1
    loc = [None] * len(glob) if info is not None else None
    if loc is not None:
        loc[0] = [lo, w, 1, 0.0, 0, None]
    stack = [(0, lo, w, list(range(1, len(glob))))]
    while stack:
        a, lo, x, rest = stack.pop()
        if not rest:
            continue
        cx = SPLIT * x
        if o[a] <= lo + cx:
            cut = lo + cx
            near = [j for j in rest if o[j] <= cut]
            far = [j for j in rest if o[j] > cut]
            parts = ((near, lo, cx, cx), (far, cut, x - cx, x))
        else:
            cut = lo + x - cx
            near = [j for j in rest if o[j] >= cut]
            far = [j for j in rest if o[j] < cut]
            parts = ((near, cut, cx, cx), (far, lo, x - cx, x))
        for part, plo, px, cost in parts:
            if not part:
                continue
            b = part[0]
            par[b] = a
            order.append(glob[b] + 1)
            if loc is not None:
                ia = loc[a]
                ia[4] += 1
                loc[b] = [plo, px, ia[2] + 1, ia[3] + cost, 0, glob[a]]
            stack.append((b, plo, px, part[1:]))
    P = np.asarray(par, dtype=np.int64)
    parent[srt[1:] + 1] = srt[P[1:]] + 1
    parent[srt[0] + 1] = root
    # the first node goes before everything appended in the loop
    order.insert(len(order) - (len(glob) - 1), glob[0] + 1)
    if info is not None:
        info.update(zip(glob, loc))


def _linear_into(parent, ids, d, off, lo, w, root, order):
    """Linear-split tree over `ids` below node `root`; returns the relative arc bound.

    The returned value bounds the arc part of every branch, so the subtree
    finishes within (radius) * (1 + value) of the time the robot leaves
    the apex.
    """
    ids = np.asarray(ids, dtype=np.int64)
    n = len(ids)
    if n == 0:
        return 0.0
    if n == 1:
        parent[ids[0] + 1] = root
        order.append(int(ids[0]) + 1)
        return 0.0
    K = min(n, math.ceil(n / math.log2(n)))
    if K < n:
        part = np.argpartition(d[ids], K - 1)
        A, B = ids[part[:K]], ids[part[K:]]
    else:
        A, B = ids, ids[:0]
    info = {}
    _split_into(parent, A, d, off, lo, w, root, order, info)
    bound = GOLDEN * w
    if not len(B):
        return bound
    s = 4 * w / K ** LOG2_GOLDEN
    nsub = max(1, math.ceil(w / s)) if s > 0 else 1

    def subs(x):
        if s <= 0:
            return np.zeros(len(x), dtype=np.int64)
        return np.clip((x - lo) // s, 0, nsub - 1).astype(np.int64)

    # small integer keys make the stable sort a radix sort
    sb = subs(off[B]).astype(np.int16 if nsub < 2 ** 15 else np.int64)
    perm = np.argsort(sb, kind="stable")
    counts = np.bincount(sb, minlength=nsub)
    cuts = np.concatenate([[0], np.cumsum(counts)]).tolist()
    Bsorted = B[perm]
    # leaves of the split-cone tree by subcone, deepest first, then lowest index
    Al = list(info)
    sa = subs(off[np.asarray(Al, dtype=np.int64)]).tolist()
    leaves = {}
    free = {}
    kids = {}
    first = None
    for a, i in zip(Al, sa):
        ia = info[a]
        free[a] = 2 - ia[4]
        if ia[4] == 0:
            leaves.setdefault(i, []).append((-ia[2], a))
        if ia[5] is None:
            first = a
        else:
            kids.setdefault(ia[5], []).append(a)
    for v in leaves.values():
        v.sort()
    m = int(counts.max())
    bound = GOLDEN * w + s * (1 + math.floor(math.log2(m)))
    worst = 0.0
    for i in np.flatnonzero(counts).tolist():
        g = Bsorted[cuts[i]:cuts[i + 1]]
        H = _heap_into(parent, g, d, -1, order)
        root_i = int(H[0])
        t = float(off[root_i])
        tail = s * math.floor(math.log2(len(g)))
        host = None
        for _, a in leaves.get(i, ()):
            if free[a] > 0:
                host = a
                break
        if host is None:
            host = _descend(kids, info, first, t, free)
            if host is not None:
                # stays within the proof budget: cert <= golden * (w - x) and
                # the extra edge costs at most the host's interval
                worst = max(worst, info[host][3] + info[host][1] + tail)
        if host is None:
            host = min((a for a in Al if free[a] > 0),
                       key=lambda a: (info[a][3] + abs(off[a] - t), a))
            worst = max(worst, info[host][3] + abs(float(off[host]) - t) + tail)
        free[host] -= 1
        parent[root_i + 1] = host + 1
    return max(bound, worst)


def _descend(kids, info, first, theta, free):
    """Split-cone node whose unexplored part holds direction theta, if it has a free robot."""
    node = first
    while True:
        nxt = None
        for b in kids.get(node, ()):
            blo, bx = info[b][0], info[b][1]
            if blo - EPS <= theta <= blo + bx + EPS:
                nxt = b
                break
        if nxt is None:
            return node if free[node] > 0 else None
        node = nxt


def _finish(instance, parent, order, bound, name, t0, waypoints=None, **details):
    tree = WakeupTree.from_parents(instance.positions, parent, instance.norm, waypoints, order=order)
    return StrategyReport(tree, float(bound), time.perf_counter() - t0, name, details)


def _empty(instance, name, t0):
    return _finish(instance, [-1], [0], 0.0, name, t0)


def heap_strategy(instance: Instance, cone: Cone | None = None) -> StrategyReport:
    """Min-heap on the distance from p0, the heap top hung below p0.

    The bound is r * (1 + w * floor(log2 n)) with w the arc length of `cone`
    (or of the smallest cone holding every sleeper), capped per edge at 2.
    """
    t0 = time.perf_counter()
    n = instance.n
    if n == 0:
        return _empty(instance, "heap", t0)
    _, d, _, w, r = _cone_setup(instance, cone)
    parent = np.full(n + 1, -1, dtype=np.int64)
    order = [0]
    _heap_into(parent, np.arange(n), d, 0, order)
    bound = r * (1 + min(w, 2.0) * math.floor(math.log2(n)))
    return _finish(instance, parent, order, bound, "heap", t0, arc_length=w)


def split_cone_strategy(instance: Instance, cone: Cone | None = None) -> StrategyReport:
    """Split-cone tree: each node halves its cone at ratio 1/golden, keeping itself in the larger part.

    `details["certificate"]` maps each sleeper to the arc budget charged to
    its branch by the analysis; every value stays below golden * w.
    """
    t0 = time.perf_counter()
    n = instance.n
    if n == 0:
        return _empty(instance, "split_cone", t0)
    _, d, off, w, r = _cone_setup(instance, cone)
    parent = np.full(n + 1, -1, dtype=np.int64)
    order = [0]
    info = {}
    _split_into(parent, np.arange(n), d, off, 0.0, w, 0, order, info)
    cert = {j: v[3] for j, v in info.items()}
    interval = {j: (v[0], v[1]) for j, v in info.items()}
    return _finish(instance, parent, order, r * (1 + GOLDEN * w), "split_cone", t0,
                   arc_length=w, certificate=cert, interval=interval)


def linear_split_bound(n, w):
    """Closed-form bound 1 + golden*w + 4w*floor(log2 n)/K^log2(golden), K = ceil(n/log2 n)."""
    if n < 2:
        return 1.0
    K = math.ceil(n / math.log2(n))
    return 1 + GOLDEN * w + 4 * w * math.floor(math.log2(n)) / K ** LOG2_GOLDEN


def linear_split_strategy(instance: Instance, cone: Cone | None = None) -> StrategyReport:
    """Split-cone on the ceil(n/log2 n) closest sleepers, heaps on narrow subcones for the rest."""
    t0 = time.perf_counter()
    n = instance.n
    if n == 0:
        return _empty(instance, "linear_split", t0)
    _, d, off, w, r = _cone_setup(instance, cone)
    parent = np.full(n + 1, -1, dtype=np.int64)
    order = [0]
    arc = _linear_into(parent, np.arange(n), d, off, 0.0, w, 0, order)
    return _finish(instance, parent, order, r * (1 + arc), "linear_split", t0, arc_length=w)


def line_optimal(instance: Instance) -> StrategyReport:
    """Optimal tree when p0 and every sleeper lie on one line."""
    t0 = time.perf_counter()
    n = instance.n
    if n == 0:
        return _empty(instance, "line_optimal", t0)
    rel, d = _relative(instance)
    e = np.hypot(rel[:, 0], rel[:, 1])
    far = int(np.argmax(e))
    scale = max(1.0, float(e[far]))
    if e[far] > 0:
        u = rel[far] / e[far]
        cross = rel[:, 0] * u[1] - rel[:, 1] * u[0]
        if np.any(np.abs(cross) > 1e-9 * scale):
            raise InvalidInputError("line_optimal needs collinear points")
        t = rel @ u
    else:
        t = np.zeros(n)
    dl = d.tolist()
    A = [j for j in range(n) if t[j] >= 0]
    B = [j for j in range(n) if t[j] < 0]
    sides = [S for S in (A, B) if S]
    near = [min(S, key=lambda j: (dl[j], j)) for S in sides]
    farthest = [max(S, key=lambda j: (dl[j], j)) for S in sides]
    P = instance.sleepers
    norm = instance.norm
    best = None
    for k, a in enumerate(near):
        M = max(float(norm(P[a] - P[v])) for v in farthest)
        val = dl[a] + M
        if best is None or val < best[0]:
            best = (val, k)
    val, k = best
    a = near[k]
    parent = np.full(n + 1, -1, dtype=np.int64)
    order = [0, a + 1]
    parent[a + 1] = 0
    _heap_into(parent, [j for j in sides[k] if j != a], d, a + 1, order)
    if len(sides) == 2:
        _heap_into(parent, sides[1 - k], d, a + 1, order)
    return _finish(instance, parent, order, val, "line_optimal", t0)


def _isqrt_ceil(n):
    k = math.isqrt(n)
    return k if k * k == n else k + 1


def general_norm_wakeup(instance: Instance, threshold: int = N_THRESHOLD, time_budget=None) -> StrategyReport:
    """Linear-time tree for any norm; exact search below `threshold` sleepers.

    The disk is cut into ceil(sqrt n) equal cones.  The densest one is woken
    by the linear-split strategy, its robots come back to p0, and each other
    nonempty cone is then woken in parallel by one of them.
    """
    t0 = time.perf_counter()
    n = instance.n
    if n == 0:
        return _empty(instance, "general", t0)
    if n < threshold:
        res = optimal_tree(instance, max_n=max(threshold, n), time_budget=time_budget)
        return StrategyReport(res.tree, res.optimum, time.perf_counter() - t0, "general:exact",
                              {"optimal": res.optimal})
    norm = instance.norm
    rel, d = _relative(instance)
    r = float(d.max())
    k = _isqrt_ceil(n)
    w = norm.perimeter / k
    off = _offsets(norm, rel, d, 0.0)
    cone = np.minimum((off // w).astype(np.int64), k - 1)
    counts = np.bincount(cone, minlength=k)
    dense = int(np.argmax(counts))
    members = np.argsort(cone, kind="stable")
    cuts = np.concatenate([[0], np.cumsum(counts)])
    parent = np.full(n + 1, -1, dtype=np.int64)
    order = [0]
    arc1 = _linear_into(parent, members[cuts[dense]:cuts[dense + 1]], d, off, dense * w, w, 0, order)
    # free robots of the first phase, earliest wake first
    wake = {0: 0.0}
    nkids = {}
    P = instance.positions
    for v in order[1:]:
        p = parent[v]
        wake[v] = wake[p] + float(norm(P[v] - P[p]))
        nkids[p] = nkids.get(p, 0) + 1
    slots = []
    for v in order[1:]:
        slots += [v] * (2 - nkids.get(v, 0))
    slots.sort(key=lambda v: (wake[v], v))
    others = [c for c in range(k) if c != dense and counts[c]]
    if len(others) > len(slots):
        raise RuntimeError("not enough robots for the second phase")
    waypoints = {}
    arc2 = 0.0
    p0 = np.array(instance.p0, dtype=float).reshape(1, 2)
    for c, v in zip(others, slots):
        mark = len(order)
        arc2 = max(arc2, _linear_into(parent, members[cuts[c]:cuts[c + 1]], d, off, c * w, w, v, order))
        # the robot travels back through p0 before entering its cone
        waypoints[order[mark]] = p0
    bound = r * (1 + arc1)
    if others:
        bound += r + r * (1 + arc2)
    return _finish(instance, parent, order, bound, "general", t0, waypoints,
                   cones=k, arc_length=w, densest=dense)


# four sleepers


def _hull_order(pts, idx, tol=1e-12):
    """Cyclic boundary order of the points `idx` if all lie on their hull boundary, else None."""
    Q = pts[list(idx)]
    c = Q.mean(axis=0)
    span = float(np.max(np.ptp(Q, axis=0))) if len(Q) else 0.0
    if span == 0.0:
        return list(idx)
    ctr = Q - c
    # collinear sets: order along the line
    ax = ctr[np.argmax(np.hypot(ctr[:, 0], ctr[:, 1]))]
    cr = ctr[:, 0] * ax[1] - ctr[:, 1] * ax[0]
    if np.all(np.abs(cr) <= tol * span * span):
        t = ctr @ ax
        return [idx[i] for i in np.argsort(t, kind="stable")]
    ang = np.arctan2(ctr[:, 1], ctr[:, 0])
    cyc = [idx[i] for i in np.argsort(ang, kind="stable")]
    m = len(cyc)
    for i in range(m):
        a, b, q = pts[cyc[i - 1]], pts[cyc[i]], pts[cyc[(i + 1) % m]]
        turn = (b[0] - a[0]) * (q[1] - b[1]) - (b[1] - a[1]) * (q[0] - b[0])
        if turn < -tol * span * span:
            return None
    return cyc


def _in_triangle(p, a, b, c, tol=1e-12):
    """Strictly inside triangle abc."""
    def cr(u, v, w):
        return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])
    s = [cr(a, b, p), cr(b, c, p), cr(c, a, p)]
    return all(x > tol for x in s) or all(x < -tol for x in s)


def _four_candidates(pts):
    """(label, parent) pairs from the proof cases; node 0 is O and sleepers are 1..4."""
    out = []
    for Q in combinations(range(5), 4):
        cyc = _hull_order(pts, list(Q))
        if cyc is None:
            continue
        if 0 not in Q:
            # racquet: enter the hull anywhere, then go both ways around it
            for s in range(4):
                q = [cyc[(s + i) % 4] for i in range(4)]
                for a, b in (((q[0], q[1]), (q[1], q[2])), ((q[0], q[3]), (q[3], q[2]))):
                    par = [-1] * 5
                    par[q[0]] = 0
                    par[q[1]] = q[0]
                    par[q[3]] = q[0]
                    par[b[1]] = b[0]
                    out.append(("case1", par))
            continue
        D = next(j for j in range(1, 5) if j not in Q)
        s = cyc.index(0)
        ring = [cyc[(s + i) % 4] for i in range(4)]
        for A, B, C in ((ring[1], ring[2], ring[3]), (ring[3], ring[2], ring[1])):
            pa, pb, pc = pts[A], pts[B], pts[C]
            if not _in_triangle(pc, pa, pb, -pa):
                par = [-1] * 5
                par[A], par[D], par[B], par[C] = 0, A, A, B
                out.append(("case2a", par))
            else:
                par = [-1] * 5
                par[C], par[D], par[B], par[A] = 0, C, C, B
                out.append(("case2b", par))
    return out


def wake_four_general(instance: Instance) -> StrategyReport:
    """Tree of makespan at most r * (1 + Lambda) for exactly four sleepers."""
    t0 = time.perf_counter()
    if instance.n != 4:
        raise InvalidInputError(f"wake_four_general needs exactly 4 sleepers, got {instance.n}")
    norm = instance.norm
    rel, d = _relative(instance)
    r = float(d.max())
    bound = r * (1 + norm.Lambda)
    pts = np.vstack([np.zeros(2), rel])
    best = None
    for label, par in _four_candidates(pts):
        tree = WakeupTree.from_parents(instance.positions, par, norm)
        if best is None or tree.makespan < best[1].makespan - 1e-15:
            best = (label, tree)
    if best is None or best[1].makespan > bound * (1 + 1e-9) + 1e-12:
        res = optimal_tree(instance, max_n=4)
        best = ("exact", res.tree)
    return StrategyReport(best[1], bound, time.perf_counter() - t0, f"four:{best[0]}")


# wake-up ratio bounds


def gamma_bounds(norm: Norm, n: int | None = None) -> GammaBounds:
    """Known lower and upper bounds on the wake-up ratio (gamma_n when n is given)."""
    lam = norm.Lambda
    pi_eta = norm.half_circumference
    uppers = [3 + GOLDEN * pi_eta]
    if norm.kind == "lp":
        q = 0.0 if math.isinf(norm.p) else 1.0 / norm.p
        uppers.append(5 * 2 ** min(q, 1 - q))
    if n is None:
        return GammaBounds(1 + lam, min(uppers), norm, None)
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    small = {0: 0.0, 1: 1.0, 2: 3.0, 3: 3.0, 4: 1 + lam}
    if n in small:
        return GammaBounds(small[n], small[n], norm, n)
    uppers.append(3 + 4 * GOLDEN * pi_eta / math.ceil(1 + math.sqrt(1 + n)))
    return GammaBounds(3.0, min(uppers), norm, n)
