import numpy as np
import pytest

from freezetag.core import Instance, validate, validate_schedule
from freezetag.exact import optimal_tree
from freezetag.l1 import (
    SquareRegion,
    StartConfig,
    TriangleRegion,
    densest_square,
    is_monotone,
    monotone_triple,
    wake_l1_disk,
    wake_square5,
    wake_square6_return,
    wake_triangle,
)
from freezetag.l1.fleet import Fleet, Frame
from freezetag.l1.squares import SquareWaker
from freezetag.norms import InvalidInputError, Norm

from oracles import brute_makespan, matrix, monotone_triples, uniform_l1_disk

L1 = Norm.l1()
SQ = SquareRegion((0.0, 0.0), 1.0)
TRI = TriangleRegion((0.0, 0.0), (1.0, 0.0), (0.5, 0.5))


def in_square(rng, n):
    # uniform in the l1 square with corners (0,0), (.5,.5), (1,0), (.5,-.5)
    u, v = rng.uniform(0, 1, (2, n))
    return np.column_stack([(u + v) / 2, (u - v) / 2])


def in_triangle(rng, n):
    out = []
    while len(out) < n:
        x, y = rng.uniform(0, 1), rng.uniform(0, 0.5)
        if y <= x and y <= 1 - x:
            out.append((x, y))
    return np.array(out)


def sched_instance(s, pts):
    return Instance(L1, s.starts[0], np.asarray(pts, dtype=float).reshape(-1, 2))


# monotone triples


def test_monotone_triple_examples():
    assert monotone_triple([(0, 0), (1, 1), (2, 2), (5, 0), (0, 5)]) == (0, 1, 2)
    pts = [(0, 0), (1, 2), (2, 1), (3, 3), (4, 0)]
    t = monotone_triple(pts)
    assert t in monotone_triples(pts)
    alt = [(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)]
    assert monotone_triple(alt) in monotone_triples(alt)


def test_monotone_triple_random_against_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(300):
        pts = [tuple(p) for p in rng.integers(0, 4, (5, 2)).tolist()]
        assert monotone_triple(pts) in monotone_triples(pts)


def test_monotone_triple_needs_five():
    with pytest.raises(InvalidInputError):
        monotone_triple([(0, 0), (1, 1), (2, 2), (3, 3)])


# square routines


def test_square5_examples():
    s = wake_square5(SQ, [(0.7, 0.1)])
    assert s.makespan <= 1 + 1e-12
    corners = [(0.5, 0.5), (1.0, 0.0), (0.5, -0.5), (0.5, 0.0), (0.75, 0.25)]
    s = wake_square5(SQ, corners)
    assert validate_schedule(s, L1) == []
    assert s.makespan <= 2 + 1e-9
    inst = sched_instance(s, corners)
    assert optimal_tree(inst).optimum <= s.makespan + 1e-9
    with pytest.raises(InvalidInputError):
        wake_square5(SQ, corners + [(0.2, 0.0)])


def test_square5_random():
    rng = np.random.default_rng(4)
    for _ in range(300):
        n = int(rng.integers(0, 6))
        pts = in_square(rng, n)
        s = wake_square5(SQ, pts)
        assert validate_schedule(s, L1) == []
        assert s.makespan <= 2 + 1e-9


def test_square5_outside_rejected():
    with pytest.raises(InvalidInputError):
        wake_square5(SQ, [(1.5, 0.0)])


def _square6_case(pts):
    fl = Fleet([p[0] + p[1] for p in pts], [p[0] - p[1] for p in pts])
    a = fl.start(0.0, 0.0)
    tr = []
    SquareWaker(fl, tr).square6_return(Frame(0.0, 0.0, 1.0, 1, 0, 0, 1), a, list(range(6)))
    return tr[-1], max(r.t for r in fl.agents), fl


def _check_square6(pts):
    s = wake_square6_return(SQ, pts)
    assert validate_schedule(s, L1) == []
    assert s.completion_time(L1) <= 3 + 1e-9
    ends = s.final_states(L1)
    assert len(ends) == 7
    for pos, _ in ends.values():
        assert np.allclose(pos, (0, 0), atol=1e-12)


def test_square6_monotone_chain_case1():
    chain = [(0.1, 0.05), (0.2, 0.1), (0.3, 0.15), (0.4, 0.2), (0.45, 0.3), (0.5, 0.4)]
    name, t, _ = _square6_case(chain)
    assert name == "S6-case1"
    assert t <= 3 + 1e-9
    _check_square6(chain)


@pytest.mark.parametrize("case", ["S6-case2a", "S6-case3"])
def test_square6_other_cases(case):
    rng = np.random.default_rng(8)
    found = 0
    for _ in range(5000):
        pts = [tuple(p) for p in in_square(rng, 6)]
        name, t, _ = _square6_case(pts)
        if name != case:
            continue
        found += 1
        assert t <= 3 + 1e-9
        _check_square6(pts)
        if found == 5:
            break
    assert found, f"no random instance reached {case}"


def test_square6_count():
    with pytest.raises(InvalidInputError):
        wake_square6_return(SQ, [(0.5, 0.0)] * 5)


# triangle routine


def test_triangle_examples():
    s = wake_triangle(TRI, np.zeros((0, 2)), StartConfig("B"))
    assert s.makespan == 0.0
    s = wake_triangle(TRI, [(0.6, 0.1)], StartConfig("A"))
    assert s.makespan <= 2 + 1e-9


def test_triangle_random_from_b():
    rng = np.random.default_rng(9)
    for k in range(30):
        n = 20 if k < 20 else int(rng.integers(1, 9))
        pts = in_triangle(rng, n)
        s = wake_triangle(TRI, pts, StartConfig("B"))
        assert validate_schedule(s, L1) == []
        assert s.makespan <= 2 * (1 + 1e-6)
        if n <= 8:
            inst = sched_instance(s, pts)
            assert optimal_tree(inst).optimum <= s.makespan + 1e-9


@pytest.mark.parametrize("start", [StartConfig("A"), StartConfig("C"), StartConfig("leg", (0.25, 0.25))])
def test_triangle_other_starts(start):
    rng = np.random.default_rng(10)
    for _ in range(20):
        pts = in_triangle(rng, int(rng.integers(1, 30)))
        s = wake_triangle(TRI, pts, start)
        assert validate_schedule(s, L1) == []
        assert s.makespan <= 2 * (1 + 1e-6)


def test_triangle_bad_start():
    with pytest.raises(InvalidInputError):
        wake_triangle(TRI, [(0.5, 0.1)], StartConfig("leg", (0.5, 0.0)))
    with pytest.raises(InvalidInputError):
        wake_triangle(TRI, [(0.5, 0.6)], StartConfig("B"))


# the disk algorithm


def test_disk_examples():
    cross = Instance(L1, (0, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    t = wake_l1_disk(cross)
    assert validate(t, cross) == []
    assert t.makespan == pytest.approx(5.0, abs=1e-9)
    one = Instance(L1, (0, 0), [(0.3, 0.2)])
    assert wake_l1_disk(one).makespan == pytest.approx(0.5)
    assert wake_l1_disk(Instance(L1, (0, 0), [])).n == 0


def test_disk_thousand_points_many_seeds():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        inst = Instance(L1, (0, 0), uniform_l1_disk(rng, 1000))
        t = wake_l1_disk(inst)
        assert validate(t, inst) == []
        assert t.makespan <= 5 * inst.radius * (1 + 1e-6)


def test_disk_every_dispatch_branch():
    rng = np.random.default_rng(12)
    seen = set()
    for _ in range(400):
        n = int(rng.integers(1, 40))
        p0 = rng.uniform(-2, 2, 2)
        pts = p0 + uniform_l1_disk(rng, n, float(rng.uniform(0.1, 5)))
        inst = Instance(L1, p0, pts)
        tr = []
        t = wake_l1_disk(inst, trace=tr)
        seen.update(x for x in tr if x.startswith("disk"))
        assert validate(t, inst) == []
        assert t.makespan <= 5 * inst.radius * (1 + 1e-6)
    assert seen == {"disk-n0=1", "disk-n0<=5", "disk-n0<=10", "disk-n0>=11"}


def test_disk_linear_method():
    rng = np.random.default_rng(1)
    inst = Instance(L1, (0, 0), uniform_l1_disk(rng, 5000))
    tr = []
    t = wake_l1_disk(inst, trace=tr)
    assert "cones" in tr
    assert validate(t, inst) == []
    assert t.makespan <= 5 * inst.radius


def test_disk_rejects_other_norms():
    with pytest.raises(InvalidInputError):
        wake_l1_disk(Instance(Norm.l2(), (0, 0), [(1, 0)]))


def test_disk_against_exact_small():
    rng = np.random.default_rng(13)
    for _ in range(80):
        n = int(rng.integers(1, 8))
        inst = Instance(L1, (0, 0), uniform_l1_disk(rng, n))
        t = wake_l1_disk(inst)
        assert brute_makespan(matrix(inst.positions.tolist(), 1)) <= t.makespan + 1e-9


def test_monotone_edges_are_shortest():
    rng = np.random.default_rng(14)
    for _ in range(40):
        inst = Instance(L1, (0, 0), uniform_l1_disk(rng, int(rng.integers(5, 300))))
        t = wake_l1_disk(inst)
        for i in range(1, t.n + 1):
            path = t.edge_path(i)
            seg = float(np.sum(L1(np.diff(path, axis=0))))
            if is_monotone(path):
                assert seg == pytest.approx(L1(path[-1] - path[0]), abs=1e-9)
            # k monotone pieces inside the disk cost at most k diameters
            k = _monotone_pieces(path)
            assert seg <= k * 2 * inst.radius + 1e-9


def _monotone_pieces(path):
    k, start = 1, 0
    for j in range(2, len(path)):
        if not is_monotone(path[start:j + 1]):
            k += 1
            start = j - 1
    return k


def test_densest_square_ties_and_counts():
    idx, counts = densest_square(np.array([[1.0, 0.1], [0.1, 1.0], [-1.0, 0.0], [0.0, -1.0]]))
    assert counts == [1, 1, 1, 1] and idx == 0
    rng = np.random.default_rng(15)
    for _ in range(100):
        xy = uniform_l1_disk(rng, int(rng.integers(1, 50)))
        idx, counts = densest_square(xy)
        assert sum(counts) == len(xy)
        assert all(counts[idx] >= c for c in counts)
        assert all(counts[k] < counts[idx] for k in range(idx))
