import math

import numpy as np
import pytest

from freezetag.cones import (
    GOLDEN,
    gamma_bounds,
    general_norm_wakeup,
    heap_strategy,
    line_optimal,
    linear_split_bound,
    linear_split_strategy,
    split_cone_strategy,
    wake_four_general,
)
from freezetag.core import Instance, validate
from freezetag.exact import optimal_tree
from freezetag.norms import Cone, InvalidInputError, Norm

from oracles import brute_makespan, is_nondecreasing, linear_split_formula, matrix, uniform_l2_disk

L1, L2 = Norm.l1(), Norm.l2()
HEX = Norm.regular_polygon(6)


def cone_instance(rng, norm, n, w, s0=None):
    s0 = rng.uniform(0, norm.perimeter) if s0 is None else s0
    s = s0 + rng.uniform(0, w, n)
    rad = np.sqrt(rng.uniform(0, 1, n))
    pts = norm.arc_point(s) * rad[:, None]
    return Instance(norm, (0, 0), pts), Cone.from_params(norm, s0, w)


# heap


def test_heap_examples():
    inst = Instance(L2, (0, 0), [(0.9, 0), (0, 0.5), (-0.2, 0)])
    rep = heap_strategy(inst)
    assert list(rep.tree.parent).index(0) == 3
    one = Instance(L2, (0, 0), [(0.3, 0.4)])
    assert heap_strategy(one).makespan == pytest.approx(0.5)


@pytest.mark.parametrize("norm", [L1, L2, HEX], ids=lambda n: n.label)
@pytest.mark.parametrize("w", [0.0, 0.1, 0.5, math.pi / 2, 3.0])
def test_heap_cone_bound(norm, w):
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(1, 300))
        inst, cone = cone_instance(rng, norm, n, w)
        rep = heap_strategy(inst, cone)
        assert validate(rep.tree, inst) == []
        assert is_nondecreasing(rep.tree, inst)
        assert rep.makespan <= 1 + w * math.floor(math.log2(n)) + 1e-6
        assert rep.makespan <= rep.claimed_bound + 1e-9


def test_heap_is_a_min_heap():
    rng = np.random.default_rng(22)
    inst = Instance(L2, (0, 0), uniform_l2_disk(rng, 1000))
    t = heap_strategy(inst).tree
    kids = t.children()
    assert len(kids[0]) == 1
    assert all(len(k) <= 2 for k in kids)


# line


def test_line_examples():
    assert line_optimal(Instance(L2, (0, 0), [(1, 0), (-1, 0)])).makespan == pytest.approx(3.0)
    inst = Instance(L1, (0, 0), [(0.5, 0), (0.9, 0), (-0.2, 0)])
    # min over the two nearest points of first leg + farthest reach: min(0.5 + 0.7, 0.2 + 1.1)
    assert line_optimal(inst).makespan == pytest.approx(1.2, abs=1e-12)
    assert brute_makespan(matrix(inst.positions.tolist(), 1)) == pytest.approx(1.2, abs=1e-12)
    assert line_optimal(Instance(L2, (0, 0), [(0.4, 0)])).makespan == pytest.approx(0.4)


def test_line_rejects_non_collinear():
    with pytest.raises(InvalidInputError):
        line_optimal(Instance(L2, (0, 0), [(1, 0), (0, 1)]))


@pytest.mark.parametrize("norm", [L1, L2, Norm.lp(3), HEX], ids=lambda n: n.label)
def test_line_matches_exact(norm):
    rng = np.random.default_rng(23)
    for _ in range(25):
        n = int(rng.integers(1, 8))
        ang = rng.uniform(0, math.pi)
        d = np.array([math.cos(ang), math.sin(ang)])
        t = rng.uniform(-1, 1, n)
        if rng.random() < 0.3:
            t[0] = t[-1]
        p0 = rng.uniform(-1, 1, 2)
        inst = Instance(norm, p0, p0 + t[:, None] * d)
        rep = line_optimal(inst)
        assert validate(rep.tree, inst) == []
        assert rep.makespan == pytest.approx(optimal_tree(inst).optimum, abs=1e-9)
        assert rep.claimed_bound == pytest.approx(rep.makespan, abs=1e-9)


# split cone


def test_split_cone_ray():
    inst = Instance(L2, (0, 0), [(0.2, 0), (0.9, 0), (0.5, 0), (0.7, 0)])
    rep = split_cone_strategy(inst, Cone(np.array([1.0, 0.0]), 0.0, L2))
    assert rep.makespan == pytest.approx(0.9)


def test_split_cone_examples():
    rng = np.random.default_rng(24)
    inst, cone = cone_instance(rng, L2, 64, math.pi / 2)
    rep = split_cone_strategy(inst, cone)
    assert validate(rep.tree, inst) == []
    assert rep.makespan <= 1 + GOLDEN * math.pi / 2 + 1e-9
    assert 1 + GOLDEN * math.pi / 2 == pytest.approx(3.5416, abs=1e-4)
    one, c1 = cone_instance(rng, L2, 1, 1.0)
    assert split_cone_strategy(one, c1).makespan == pytest.approx(float(L2(one.sleepers[0])))


def test_split_cone_outside():
    inst = Instance(L2, (0, 0), [(0.5, 0.0), (-0.5, 0.1)])
    with pytest.raises(InvalidInputError):
        split_cone_strategy(inst, Cone(np.array([1.0, 0.0]), 1.0, L2))


@pytest.mark.parametrize("norm", [L1, L2, HEX], ids=lambda n: n.label)
@pytest.mark.parametrize("w", [0.1, 0.5, math.pi / 2, 3.0])
def test_split_cone_bound_and_certificates(norm, w):
    rng = np.random.default_rng(25)
    for _ in range(25):
        n = int(rng.integers(1, 400))
        inst, cone = cone_instance(rng, norm, n, w)
        rep = split_cone_strategy(inst, cone)
        assert validate(rep.tree, inst) == []
        assert is_nondecreasing(rep.tree, inst)
        assert rep.makespan <= 1 + GOLDEN * w + 1e-6
        # the arc budget charged to every branch stays below golden * w
        cert = rep.details["certificate"]
        assert len(cert) == n
        assert max(cert.values()) < GOLDEN * w + 1e-12


# linear split


def test_linear_split_small():
    inst = Instance(L2, (0, 0), [(0.5, 0.1), (0.2, 0.3)])
    rep = linear_split_strategy(inst)
    assert validate(rep.tree, inst) == []
    assert rep.makespan <= rep.claimed_bound + 1e-9


def test_linear_split_ten_thousand():
    rng = np.random.default_rng(26)
    w = math.pi / 4
    inst, cone = cone_instance(rng, L2, 10_000, w)
    rep = linear_split_strategy(inst, cone)
    assert validate(rep.tree, inst) == []
    assert is_nondecreasing(rep.tree, inst)
    # frozen from oracles.linear_split_formula(10000, pi/4)
    assert linear_split_formula(10_000, w) == pytest.approx(2.681857475651593, abs=1e-12)
    assert linear_split_bound(10_000, w) == pytest.approx(2.681857475651593, abs=1e-12)
    assert rep.makespan <= 2.681857475651593 + 1e-6


@pytest.mark.parametrize("norm", [L1, L2, HEX], ids=lambda n: n.label)
@pytest.mark.parametrize("w", [0.1, 0.5, math.pi / 2])
def test_linear_split_bound(norm, w):
    rng = np.random.default_rng(27)
    for _ in range(15):
        n = int(rng.integers(2, 3000))
        inst, cone = cone_instance(rng, norm, n, w)
        rep = linear_split_strategy(inst, cone)
        assert validate(rep.tree, inst) == []
        assert is_nondecreasing(rep.tree, inst)
        assert rep.makespan <= rep.claimed_bound + 1e-6


def test_linear_split_skewed_input():
    # most points crowd one end of the cone, so some subcones hold no split-cone leaf
    rng = np.random.default_rng(28)
    for _ in range(20):
        n = int(rng.integers(50, 2000))
        s = np.concatenate([rng.uniform(0, 0.01, n - 5), rng.uniform(0, 1.0, 5)])
        rad = np.concatenate([rng.uniform(0.9, 1, n - 5), rng.uniform(0, 0.2, 5)])
        inst = Instance(L2, (0, 0), L2.arc_point(s) * rad[:, None])
        rep = linear_split_strategy(inst, Cone.from_params(L2, 0.0, 1.0))
        assert validate(rep.tree, inst) == []
        assert rep.makespan <= rep.claimed_bound + 1e-6


# general


def test_general_examples():
    sq = Instance(L2, (0, 0), [(math.cos(a), math.sin(a)) for a in np.arange(4) * math.pi / 2])
    rep = general_norm_wakeup(sq)
    assert rep.makespan == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-9)
    assert general_norm_wakeup(Instance(L2, (0, 0), [])).tree.n == 0


def test_general_million_points():
    rng = np.random.default_rng(29)
    n = 10 ** 6
    inst = Instance(L2, (0, 0), uniform_l2_disk(rng, n))
    rep = general_norm_wakeup(inst)
    assert validate(rep.tree, inst) == []
    assert rep.makespan <= 3 + 90 / 1000
    assert rep.makespan <= gamma_bounds(L2, n).upper + 1e-6


@pytest.mark.parametrize("norm", [L1, L2, HEX, Norm.lp(3)], ids=lambda n: n.label)
def test_general_valid_and_bounded(norm):
    rng = np.random.default_rng(30)
    for n in [1, 5, 9, 10, 37, 200, 1000, 5000]:
        pts = norm.arc_point(rng.uniform(0, norm.perimeter, n)) * np.sqrt(rng.uniform(0, 1, n))[:, None]
        inst = Instance(norm, (0.3, -0.2), pts + (0.3, -0.2))
        rep = general_norm_wakeup(inst)
        assert validate(rep.tree, inst) == []
        assert rep.makespan <= rep.claimed_bound + 1e-6
        if n >= 9:
            assert rep.makespan <= gamma_bounds(norm, n).upper * inst.radius + 1e-6


# four robots


def test_four_examples():
    cross = Instance(L1, (0, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert wake_four_general(cross).makespan == pytest.approx(5.0, abs=1e-9)
    sq = Instance(L2, (0, 0), [(1, 0), (0, 1), (-1, 0), (0, -1)])
    rep = wake_four_general(sq)
    assert rep.makespan <= 1 + 2 * math.sqrt(2) + 1e-6
    assert optimal_tree(sq).optimum == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-9)
    rng = np.random.default_rng(31)
    near = Instance(L2, (0, 0), (0.1, 0.1) + rng.uniform(-0.02, 0.02, (4, 2)))
    rep = wake_four_general(near)
    assert rep.makespan < 0.5
    assert rep.makespan >= optimal_tree(near).optimum - 1e-9


def test_four_needs_four():
    with pytest.raises(InvalidInputError):
        wake_four_general(Instance(L2, (0, 0), [(1, 0)]))


@pytest.mark.parametrize("norm", [L1, L2, HEX, Norm.lp(1.5)], ids=lambda n: n.label)
def test_four_random(norm):
    rng = np.random.default_rng(32)
    for _ in range(300):
        pts = norm.arc_point(rng.uniform(0, norm.perimeter, 4)) * np.sqrt(rng.uniform(0, 1, 4))[:, None]
        inst = Instance(norm, (0, 0), pts)
        rep = wake_four_general(inst)
        assert validate(rep.tree, inst) == []
        assert rep.makespan <= 1 + norm.Lambda + 1e-6
        assert rep.makespan >= optimal_tree(inst).optimum - 1e-9


# gamma


def test_gamma_examples():
    g = gamma_bounds(L1)
    assert (g.lower, g.upper) == (pytest.approx(5.0), pytest.approx(5.0))
    g = gamma_bounds(L2)
    assert g.lower == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-6)
    assert g.upper == pytest.approx(5 * math.sqrt(2), abs=1e-6)


def test_gamma_small_n_exact():
    for n, v in [(0, 0.0), (1, 1.0), (2, 3.0), (3, 3.0)]:
        g = gamma_bounds(L2, n)
        assert g.lower == g.upper == v
    g = gamma_bounds(HEX, 4)
    assert g.lower == g.upper == pytest.approx(4.0)


@pytest.mark.parametrize("norm", [L1, L2, HEX, Norm.lp(3), Norm.linf()], ids=lambda n: n.label)
def test_gamma_lower_below_upper(norm):
    for n in list(range(0, 100)) + [528, 529, 10 ** 4, 10 ** 8]:
        g = gamma_bounds(norm, n)
        assert g.lower <= g.upper + 1e-12
    g = gamma_bounds(norm)
    assert g.lower <= g.upper + 1e-12
    assert g.upper <= 3 + 4 * GOLDEN + 1e-12


def test_gamma_n_formula():
    # 3 + 4*golden*pi / ceil(1 + sqrt(1 + n)); 529 is the first n where it beats 1 + 2 sqrt 2
    assert gamma_bounds(L2, 529).upper == pytest.approx(3 + 4 * GOLDEN * math.pi / 25)
    assert gamma_bounds(L2, 529).upper < 1 + 2 * math.sqrt(2)
