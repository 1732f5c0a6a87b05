"""Instances, wake-up trees, schedules, validation and lower bounds."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .norms import EPS, InvalidInputError, Norm


class ValidationError(ValueError):
    """A tree or schedule breaks a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, eq=False)
class Instance:
    """One awake robot at `p0` and the sleeping robots `sleepers` (rows)."""

    norm: Norm
    p0: np.ndarray
    sleepers: np.ndarray

    def __post_init__(self):
        p0 = np.array(self.p0, dtype=float).reshape(2)
        S = np.array(self.sleepers, dtype=float).reshape(-1, 2)
        if not (np.all(np.isfinite(p0)) and np.all(np.isfinite(S))):
            raise InvalidInputError("instance coordinates must be finite")
        p0.setflags(write=False)
        S.setflags(write=False)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "sleepers", S)

    @property
    def n(self):
        return len(self.sleepers)

    @cached_property
    def positions(self):
        """All robot positions, p0 first."""
        P = np.vstack([self.p0, self.sleepers])
        P.setflags(write=False)
        return P

    @cached_property
    def radius(self):
        if self.n == 0:
            return 0.0
        return float(np.max(self.norm(self.sleepers - self.p0)))

    @property
    def radius_r(self):
        return self.radius

    def scaled(self, lam):
        """Copy with every position scaled by lam about the origin."""
        return Instance(self.norm, self.p0 * lam, self.sleepers * lam)

    def with_norm(self, norm):
        return Instance(norm, self.p0, self.sleepers)


@dataclass(frozen=True, eq=False)
class WakeupTree:
    """Rooted wake-up tree over robot indices 0..n (0 is the awake robot).

    `waypoints[i]` holds the intermediate points of the path from the parent
    of i to i (the endpoints are the node positions themselves).
    """

    positions: np.ndarray
    parent: np.ndarray
    wake_time: np.ndarray
    waypoints: Mapping[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def from_parents(cls, positions, parent, norm, waypoints=None, order=None):
        """Build a tree and compute wake times along the stored paths.

        `order` may give a known topological order of the nodes (parents
        first); it is checked, not trusted.
        """
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        parent = np.asarray(parent, dtype=np.int64)
        wp = {}
        for k, v in (waypoints or {}).items():
            if not (isinstance(v, np.ndarray) and v.dtype == float and v.ndim == 2):
                v = np.asarray(v, dtype=float).reshape(-1, 2)
            if len(v):
                wp[int(k)] = v
        waypoints = wp
        lengths = _edge_lengths(positions, parent, waypoints, norm)
        if len(parent) > _JUMP_MIN:
            return cls(positions, parent, _jump_sums(parent, lengths), waypoints)
        if order is not None:
            order = np.asarray(order, dtype=np.int64)
            rank = np.full(len(parent), -1)
            if len(order) == len(parent) and order[0] == 0:
                rank[order] = np.arange(len(order))
            if np.any(rank < 0) or np.any(rank[parent[1:]] >= rank[1:]):
                order = None
            else:
                order = order.tolist()
        if order is None:
            order = _bfs_order(parent)
        if len(order) != len(parent):
            raise ValidationError(["unreachable node or cycle"])
        wake = np.zeros(len(parent))
        par = parent.tolist()
        lens = lengths.tolist()
        w = wake.tolist()
        for i in order[1:]:
            w[i] = w[par[i]] + lens[i]
        return cls(positions, parent, np.array(w), waypoints)

    @property
    def n(self):
        return len(self.parent) - 1

    @property
    def makespan(self):
        return float(np.max(self.wake_time)) if len(self.wake_time) else 0.0

    def children(self):
        kids = [[] for _ in range(len(self.parent))]
        for i, p in enumerate(self.parent.tolist()):
            if p >= 0:
                kids[p].append(i)
        return kids

    def edge_path(self, i):
        """Polyline from the parent of i to i, endpoints included."""
        p = int(self.parent[i])
        mid = self.waypoints.get(i)
        pts = [self.positions[p]]
        if mid is not None:
            pts.extend(mid)
        pts.append(self.positions[i])
        return np.vstack(pts)

    def depth(self):
        """Number of edges on the longest root-to-leaf path."""
        d = np.zeros(len(self.parent), dtype=int)
        for i in _bfs_order(self.parent)[1:]:
            d[i] = d[self.parent[i]] + 1
        return int(d.max()) if len(d) else 0


def _edge_lengths(positions, parent, waypoints, norm):
    lengths = np.zeros(len(parent))
    if len(parent) <= 1:
        return lengths
    idx = np.arange(1, len(parent))
    par = parent[1:]
    if np.any((par < 0) | (par >= len(parent))):
        raise ValidationError(["parent index out of range"])
    lengths[1:] = norm(positions[idx] - positions[par])
    if waypoints:
        keys = np.fromiter(waypoints.keys(), dtype=np.int64, count=len(waypoints))
        mids = [waypoints[k] for k in keys.tolist()]
        cnt = np.array([len(m) for m in mids])
        M = np.concatenate(mids).reshape(-1, 2)
        # key k owns segments seg[k] .. seg[k] + cnt[k]
        seg = np.cumsum(cnt + 1) - (cnt + 1)
        moff = np.cumsum(cnt) - cnt
        owner = np.repeat(np.arange(len(keys)), cnt + 1)
        pos = np.arange(len(owner)) - seg[owner]
        mi = moff[owner] + pos
        A = np.where((pos == 0)[:, None], positions[parent[keys]][owner], M[np.maximum(mi - 1, 0)])
        last = pos == cnt[owner]
        B = np.where(last[:, None], positions[keys][owner], M[np.minimum(mi, len(M) - 1)])
        lengths[keys] = np.add.reduceat(norm(B - A), seg)
    return lengths


_JUMP_MIN = 4096


def _jump_sums(parent, lengths):
    """Root-to-node path sums by pointer jumping (O(log depth) vector passes)."""
    n = len(parent)
    anc = parent.copy()
    anc[0] = 0
    if np.any(anc < 0):
        raise ValidationError(["unreachable node or cycle"])
    acc = lengths.copy()
    acc[0] = 0.0
    for _ in range(int(np.log2(n)) + 2):
        if not anc.any():
            return acc
        acc += acc[anc]
        anc = anc[anc]
    if anc.any():
        raise ValidationError(["unreachable node or cycle"])
    return acc


def _bfs_order(parent):
    """Nodes reachable from root 0 in breadth-first order."""
    n = len(parent)
    kids = [[] for _ in range(n)]
    for i, p in enumerate(parent.tolist()):
        if i and 0 <= p < n:
            kids[p].append(i)
    order = [0] if n else []
    seen = [False] * n
    if n:
        seen[0] = True
    k = 0
    while k < len(order):
        for c in kids[order[k]]:
            if not seen[c]:
                seen[c] = True
                order.append(c)
        k += 1
    return order


def validate(tree, instance, eps=EPS):
    """Return the list of invariant violations (empty when the tree is valid)."""
    out = []
    n = instance.n
    P = instance.positions
    par = np.asarray(tree.parent)
    if len(par) != n + 1 or len(tree.positions) != n + 1 or len(tree.wake_time) != n + 1:
        return [f"size mismatch: tree has {len(par) - 1} sleepers, instance has {n}"]
    diff = np.max(np.abs(np.asarray(tree.positions) - P), axis=1)
    for i in np.nonzero(diff > eps)[0]:
        out.append(f"position mismatch at node {i}")
    if par[0] != -1:
        out.append("root must have parent -1")
    bad = [i for i in range(1, n + 1) if not (0 <= par[i] <= n) or par[i] == i]
    for i in bad:
        out.append(f"invalid parent {par[i]} for node {i}")
    if bad:
        return out
    order = _bfs_order(par)
    if len(order) != n + 1:
        out.append("unreachable node or cycle: every sleeper must appear exactly once")
    deg = np.bincount(par[1:], minlength=n + 1) if n else np.zeros(1, dtype=int)
    if n >= 1 and deg[0] != 1:
        out.append(f"root out-degree is {deg[0]}, must be 1")
    for i in np.nonzero(deg[1:] > 2)[0] + 1:
        out.append(f"out-degree of node {i} is {deg[i]} > 2")
    if abs(tree.wake_time[0]) > eps:
        out.append("root wake time must be 0")
    if n == 0:
        return out
    lengths = _edge_lengths(np.asarray(tree.positions), par, tree.waypoints, instance.norm)[1:]
    direct = instance.norm(P[1:] - P[par[1:]])
    wt = np.asarray(tree.wake_time)
    dt = wt[1:] - wt[par[1:]]
    sub = (dt < direct - eps) | (lengths < direct - eps)
    mismatch = ~sub & (np.abs(dt - lengths) > eps * np.maximum(1.0, np.abs(lengths)))
    for i in np.nonzero(sub)[0]:
        out.append(f"sub-metric edge into node {i + 1}: {dt[i]:.12g} < {direct[i]:.12g}")
    for i in np.nonzero(mismatch)[0]:
        out.append(f"wake-time mismatch at node {i + 1}: {dt[i]:.12g} vs path {lengths[i]:.12g}")
    return out


def makespan(tree, norm=None):
    """Largest wake time; raises ValidationError on structural defects."""
    par = np.asarray(tree.parent)
    n = len(par) - 1
    errs = []
    if n >= 1:
        deg = np.bincount(par[1:][par[1:] >= 0], minlength=n + 1)
        if deg[0] != 1:
            errs.append(f"root out-degree is {deg[0]}, must be 1")
        if np.any(deg[1:] > 2):
            errs.append("out-degree above 2")
        if len(_bfs_order(par)) != n + 1:
            errs.append("unreachable node or cycle")
    if errs:
        raise ValidationError(errs)
    if norm is not None:
        return WakeupTree.from_parents(tree.positions, par, norm, tree.waypoints).makespan
    return tree.makespan


def trivial_lower_bound(instance):
    """max(r, min over first targets u of dist(p0,u) + farthest distance from u)."""
    n = instance.n
    if n == 0:
        return 0.0
    r = instance.radius
    if n == 1:
        return r
    S = instance.sleepers
    first = instance.norm(S - instance.p0)
    far = farthest_distances(instance.norm, S)
    return float(max(r, np.min(first + far)))


def farthest_distances(norm, S):
    """For each row of S, the largest distance to another row."""
    n = len(S)
    if norm.is_polygonal:
        # support-function trick: max_v eta(v-u) = max_i (max_{v != u} a_i.v - a_i.u)
        A = norm._facets
        proj = S @ A.T
        order = np.argsort(-proj, axis=0, kind="stable")
        cols = np.arange(A.shape[0])
        own = order[0]
        top = proj[own, cols]
        vals = top[None, :] - proj
        vals[own, cols] = proj[order[1], cols] - proj[own, cols]
        return np.maximum(vals.max(axis=1), 0.0)
    out = np.zeros(n)
    block = max(1, 4_000_000 // max(n, 1))
    for s in range(0, n, block):
        D = norm((S[s:s + block, None, :] - S[None, :, :]).reshape(-1, 2)).reshape(-1, n)
        out[s:s + block] = D.max(axis=1)
    return out


# schedules


@dataclass(frozen=True)
class Leg:
    """One move of a robot: depart at `depart`, follow `path`, wake `target` (or None) on arrival."""

    depart: float
    path: np.ndarray
    target: int | None


@dataclass(frozen=True, eq=False)
class Schedule:
    """Execution trace of a wake-up process started by one or more awake robots.

    Robots are keyed by ('start', s) for initially awake robot s or
    ('woken', j) for the robot woken at target j.
    """

    starts: np.ndarray
    start_times: np.ndarray
    targets: np.ndarray
    wake_time: np.ndarray
    routes: Mapping[tuple, tuple]

    @property
    def makespan(self):
        return float(np.max(self.wake_time)) if len(self.wake_time) else 0.0

    def robot_origin(self, key):
        kind, j = key
        if kind == "start":
            return self.starts[j], float(self.start_times[j])
        return self.targets[j], float(self.wake_time[j])

    def final_states(self, norm):
        """(position, time) of every robot after its last leg."""
        out = {}
        keys = [("start", s) for s in range(len(self.starts))] + [("woken", j) for j in range(len(self.targets))]
        for key in keys:
            pos, t = self.robot_origin(key)
            for leg in self.routes.get(key, ()):
                t = leg.depart + float(np.sum(norm(np.diff(leg.path, axis=0))))
                pos = leg.path[-1]
            out[key] = (np.asarray(pos), t)
        return out

    def completion_time(self, norm):
        return max(t for _, t in self.final_states(norm).values())

    def to_tree(self, norm):
        """Wake-up tree view (single start robot only)."""
        if len(self.starts) != 1:
            raise ValueError("a wake-up tree needs exactly one start robot")
        m = len(self.targets)
        positions = np.vstack([self.starts[0], self.targets])
        parent = np.full(m + 1, -1, dtype=np.int64)
        waypoints = {}
        for key, legs in self.routes.items():
            node = 0 if key[0] == "start" else key[1] + 1
            for leg in legs:
                if leg.target is None:
                    continue
                j = leg.target + 1
                parent[j] = node
                if len(leg.path) > 2:
                    waypoints[j] = leg.path[1:-1]
                node = j
        return WakeupTree.from_parents(positions, parent, norm, waypoints)


def validate_schedule(sched, norm, eps=EPS):
    """List of violations of unit speed, causality and wake-once rules."""
    out = []
    m = len(sched.targets)
    woken_by = [0] * m
    for key, legs in sched.routes.items():
        pos, t = sched.robot_origin(key)
        for leg in legs:
            if leg.depart < t - eps:
                out.append(f"robot {key} departs at {leg.depart} before it is free at {t}")
            if np.max(np.abs(leg.path[0] - pos)) > eps:
                out.append(f"robot {key} teleports")
            length = float(np.sum(norm(np.diff(leg.path, axis=0))))
            t = leg.depart + length
            pos = leg.path[-1]
            if leg.target is not None:
                j = leg.target
                woken_by[j] += 1
                if np.max(np.abs(sched.targets[j] - pos)) > eps:
                    out.append(f"target {j} woken away from its position")
                if abs(sched.wake_time[j] - t) > eps * max(1.0, t):
                    out.append(f"target {j} wake time {sched.wake_time[j]} != arrival {t}")
    for j, c in enumerate(woken_by):
        if c != 1:
            out.append(f"target {j} woken {c} times")
    return out
