import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freezetag.norms import (
    Cone,
    DomainError,
    InvalidInputError,
    Norm,
    arc_length,
    arc_walk,
    cone_contains,
    dist,
    half_circumference,
    half_parallelogram_perimeter,
)

from oracles import l1_arc

HEX = Norm.regular_polygon(6)
NORMS = [Norm.l1(), Norm.l2(), Norm.linf(), Norm.lp(1.5), Norm.lp(3), HEX, Norm.regular_polygon(8, 0.3)]


def test_dist_examples():
    assert dist(Norm.l1(), (0, 0), (0.5, 0.5)) == pytest.approx(1.0)
    assert dist(Norm.l2(), (0, 0), (3, 4)) == pytest.approx(5.0)
    assert dist(Norm.linf(), (1, -1), (-1, 2)) == pytest.approx(3.0)


def test_dist_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        dist(Norm.l2(), (0, 0), (math.nan, 1))
    with pytest.raises(InvalidInputError):
        dist(Norm.l1(), (math.inf, 0), (0, 1))


@pytest.mark.parametrize("norm", NORMS, ids=lambda n: n.label)
def test_metric_axioms(norm):
    rng = np.random.default_rng(11)
    U, V, W = (rng.uniform(-1, 1, (500, 2)) for _ in range(3))
    duv, dvu = norm(V - U), norm(U - V)
    assert np.allclose(duv, dvu, atol=1e-12)
    assert np.all(duv <= norm(W - U) + norm(V - W) + 1e-9)
    lam = rng.uniform(-3, 3, 500)
    assert np.allclose(norm((V - U) * lam[:, None]), np.abs(lam) * duv, rtol=1e-9, atol=1e-12)
    assert norm(np.zeros(2)) == 0.0


def test_lambda_examples():
    assert half_parallelogram_perimeter(Norm.l1()) == pytest.approx(4.0)
    assert half_parallelogram_perimeter(Norm.l2()) == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    assert half_parallelogram_perimeter(HEX) == pytest.approx(3.0, abs=1e-6)


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, math.inf])
def test_lambda_closed_form(p):
    q = 0 if math.isinf(p) else 1 / p
    assert Norm.lp(p).Lambda == pytest.approx(2 ** (1 + max(q, 1 - q)), abs=1e-6)


def test_lambda_polygon_brute_force():
    # sup of eta(u+v) + eta(u-v) over a dense grid of boundary pairs
    for norm in (HEX, Norm.regular_polygon(8, 0.3), Norm.regular_polygon(10)):
        s = np.linspace(0, norm.perimeter, 400, endpoint=False)
        P = norm.arc_point(s)
        A, B = P[:, None, :], P[None, :, :]
        grid = np.max(norm((A + B).reshape(-1, 2)) + norm((A - B).reshape(-1, 2)))
        assert norm.Lambda >= grid - 1e-9
        assert norm.Lambda <= grid + 1e-2


def test_half_circumference_examples():
    assert half_circumference(Norm.l2()) == pytest.approx(math.pi, abs=1e-7)
    assert half_circumference(Norm.l1()) == pytest.approx(4.0, abs=1e-9)
    assert half_circumference(HEX) == pytest.approx(3.0, abs=1e-9)


@pytest.mark.parametrize("norm", NORMS, ids=lambda n: n.label)
def test_constants_in_range(norm):
    assert 2 - 1e-9 <= norm.Lambda <= 4 + 1e-9
    assert 3 - 1e-6 <= norm.half_circumference <= 4 + 1e-6


def test_lp_half_circumference_against_chords():
    for p in (1.5, 3.0):
        norm = Norm.lp(p)
        t = np.linspace(0, math.pi, 400001)
        c, s = np.cos(t), np.sin(t)
        P = np.column_stack([c, s]) / norm(np.column_stack([c, s]))[:, None]
        assert norm.half_circumference == pytest.approx(float(np.sum(norm(np.diff(P, axis=0)))), abs=1e-6)


def test_arc_walk_examples():
    assert np.allclose(arc_walk(Norm.l2(), (1, 0), math.pi / 2), (0, 1), atol=1e-6)
    # independent chord integration: the l1 half circle has length 4, a quarter 2
    assert l1_arc(0, 90) == pytest.approx(2.0, abs=1e-4)
    assert l1_arc(0, 180) == pytest.approx(4.0, abs=1e-4)
    assert np.allclose(arc_walk(Norm.l1(), (1, 0), 2.0), (0, 1), atol=1e-9)
    assert np.allclose(arc_walk(Norm.l1(), (1, 0), 4.0), (-1, 0), atol=1e-9)
    for norm in NORMS:
        A = norm.arc_point(0.7)
        assert np.allclose(arc_walk(norm, A, 0.0), A)


def test_arc_walk_off_circle():
    with pytest.raises(DomainError):
        arc_walk(Norm.l2(), (0.5, 0), 1.0)


@pytest.mark.parametrize("norm", NORMS, ids=lambda n: n.label)
def test_arc_walk_round_trip_and_additivity(norm):
    rng = np.random.default_rng(5)
    for _ in range(50):
        A = norm.arc_point(rng.uniform(0, norm.perimeter))
        w1, w2 = rng.uniform(0, norm.perimeter / 2, 2)
        B = arc_walk(norm, A, w1)
        C = arc_walk(norm, B, w2)
        assert abs(norm(B) - 1) < 1e-9
        assert arc_length(norm, A, B) == pytest.approx(w1, abs=1e-6)
        assert arc_length(norm, A, B) + arc_length(norm, B, C) == pytest.approx(arc_length(norm, A, C), abs=1e-6)


def test_cone_contains_examples():
    cone = Cone(np.array([1.0, 0.0]), math.pi / 2, Norm.l2())
    assert cone_contains(cone, (0.3, 0.3))
    assert not cone_contains(cone, (-0.1, 0.5))
    assert cone_contains(cone, (0.0, 0.0))
    assert cone_contains(cone, (0.0, 1.0))
    with pytest.raises(DomainError):
        cone_contains(cone, (2.0, 0.0))


def test_cone_invariants():
    with pytest.raises(DomainError):
        Cone(np.array([0.5, 0.0]), 1.0, Norm.l2())
    with pytest.raises(DomainError):
        Cone(np.array([1.0, 0.0]), 2 * math.pi, Norm.l2())


def test_polygon_validation():
    with pytest.raises(InvalidInputError):
        Norm.polygon([[1, 0], [0, 1], [-1, 0]])
    with pytest.raises(InvalidInputError):
        Norm.polygon([[1, 0], [0, -1], [-1, 0], [0, 1]])  # clockwise
    with pytest.raises(InvalidInputError):
        Norm.lp(0.5)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6), st.sampled_from(NORMS))
def test_triangle_inequality_property(xs, norm):
    u, v, w = np.array(xs).reshape(3, 2)
    assert norm(v - u) <= norm(w - u) + norm(v - w) + 1e-9
