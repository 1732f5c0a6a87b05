"""Reference implementations used only by the tests.

They share no code with the package: plain Python loops, no pruning.
Running this file prints the frozen values used in the test modules.
"""
import itertools
import math

import numpy as np


def lp_dist(p, a, b):
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    if p == 1:
        return dx + dy
    if math.isinf(p):
        return max(dx, dy)
    return (dx ** p + dy ** p) ** (1.0 / p)


def matrix(points, p):
    return [[lp_dist(p, a, b) for b in points] for a in points]


def brute_makespan(D):
    """Optimal makespan by exhaustive search over every wake-up tree.

    A state is a queue of (free time, node) robots; the head robot either
    wakes some remaining sleeper or stops for good.  Every binary tree
    arises this way, so the minimum is exact.
    """
    n = len(D) - 1
    best = [math.inf]

    def rec(robots, left, cur):
        if cur >= best[0]:
            return
        if not left:
            best[0] = cur
            return
        if not robots:
            return
        (t, i), rest = robots[0], robots[1:]
        for j in left:
            t2 = t + D[i][j]
            rec(rest + [(t2, j), (t2, j)], left - {j}, max(cur, t2))
        rec(rest, left, cur)

    rec([(0.0, 0)], frozenset(range(1, n + 1)), 0.0)
    return best[0]


def l1_arc(a_deg, b_deg, steps=200000):
    """l1 length of the anticlockwise l1-circle arc between two directions, by fine chords."""
    t = np.linspace(math.radians(a_deg), math.radians(b_deg), steps)
    c, s = np.cos(t), np.sin(t)
    P = np.column_stack([c, s]) / (np.abs(c) + np.abs(s))[:, None]
    return float(np.sum(np.abs(np.diff(P, axis=0)).sum(axis=1)))


def uniform_l1_disk(rng, n, r=1.0):
    s = rng.uniform(-0.5, 0.5, (n, 2))
    return r * np.column_stack([s[:, 0] + s[:, 1], s[:, 0] - s[:, 1]])


def uniform_l2_disk(rng, n, r=1.0):
    t = rng.uniform(0, 2 * math.pi, n)
    rad = r * np.sqrt(rng.uniform(0, 1, n))
    return np.column_stack([rad * np.cos(t), rad * np.sin(t)])


def monotone_triples(points):
    """Every ordered triple (i, j, k) whose steps share one quadrant direction."""
    out = []
    for i, j, k in itertools.permutations(range(len(points)), 3):
        a, b, c = points[i], points[j], points[k]
        if (b[0] - a[0]) * (c[0] - b[0]) >= 0 and (b[1] - a[1]) * (c[1] - b[1]) >= 0:
            out.append((i, j, k))
    return out


def is_nondecreasing(tree, inst, tol=1e-9):
    d = inst.norm(inst.positions - inst.p0)
    par = np.asarray(tree.parent)
    return all(d[par[i]] <= d[i] + tol for i in range(1, len(par)))


def golden():
    return (1 + math.sqrt(5)) / 2


def linear_split_formula(n, w):
    K = math.ceil(n / math.log2(n))
    return 1 + golden() * w + 4 * w * math.floor(math.log2(n)) / K ** math.log2(golden())


def square13_6_points(eps):
    # left corner at the origin, B the top corner, four points spread on [C, D]
    B = (0.5, 0.5)
    pts = [(B[0] - eps / 2, B[1] - eps / 2), B]
    C, Dd = (1.0, 0.0), (0.5, -0.5)
    for k in range(4):
        pts.append((C[0] + (Dd[0] - C[0]) * k / 3, C[1] + (Dd[1] - C[1]) * k / 3))
    return [(0.0, 0.0)] + pts


if __name__ == "__main__":
    print("l1 arc from 0 to 180 deg:", l1_arc(0, 180))
    print("square13_6 eps=1/6:", brute_makespan(matrix(square13_6_points(1 / 6), 1)))
    print("square13_6 eps=0:", brute_makespan(matrix(square13_6_points(0.0), 1)))
    print("cross4 l1:", brute_makespan(matrix([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)], 1)))
    sq = [(0, 0)] + [(math.cos(k * math.pi / 2), math.sin(k * math.pi / 2)) for k in range(4)]
    print("square l2:", brute_makespan(matrix(sq, 2)))
    print("linear split bound n=10000 w=pi/4:", linear_split_formula(10000, math.pi / 4))
    print("line (0.5,0),(0.9,0),(-0.2,0) l1:", brute_makespan(matrix([(0, 0), (0.5, 0), (0.9, 0), (-0.2, 0)], 1)))
