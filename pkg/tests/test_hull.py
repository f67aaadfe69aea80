import random
from fractions import Fraction

import pytest

from polystrata import hull, linalg
from polystrata.errors import SizeLimitError
from oracles import hull_facet_oracle, lower_facet_oracle, random_point_configuration


def test_square_with_center():
    h = hull.convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2))])
    assert len(h.facets) == 4
    assert all(4 not in f.incidence for f in h.facets)


def test_parabola_lower_facets():
    h = hull.convex_hull([(0, 0), (1, 1), (2, 4)])
    assert sorted(h.facets[i].incidence for i in h.lower_facets) == [(0, 1), (1, 2)]


def test_flat_lift_single_lower_facet():
    h = hull.convex_hull([(0, 0), (1, 0), (2, 0)])
    # collinear input: 1-dimensional hull, reported as such
    assert h.dim == 1
    assert any(f.incidence == (0, 2) or set(f.incidence) >= {0, 2} for f in h.facets)
    env = hull.lower_envelope([(0,), (1,), (2,)], [0, 0, 0])
    assert [c.marking for c in env.cells] == [(0, 1, 2)]


def test_every_point_vertex_or_interior():
    rng = random.Random(77)
    for _ in range(100):
        n = rng.randint(4, 10)
        dim = rng.randint(1, 3)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(rng.randint(-4, 4) for _ in range(dim)))
        pts = sorted(pts)
        h = hull.convex_hull(pts)
        if h.dim != dim:
            continue
        for j, p in enumerate(pts):
            slacks = [linalg.dot(f.normal, p) - f.offset for f in h.facets]
            assert all(s >= 0 for s in slacks)
            on_some = any(s == 0 for s in slacks)
            incident = any(j in f.incidence for f in h.facets)
            assert on_some == incident


def test_facets_match_bruteforce_oracle():
    rng = random.Random(123)
    checked = 0
    while checked < 60:
        pts = random_point_configuration(rng, max_points=10, max_dim=3, spread=4)
        h = hull.convex_hull(pts)
        if h.dim != len(pts[0]):
            continue  # oracle handles the full-dimensional case
        checked += 1
        assert sorted(f.incidence for f in h.facets) == hull_facet_oracle(pts)


def test_dimension_cap():
    with pytest.raises(SizeLimitError):
        hull.convex_hull([tuple(1 if i == j else 0 for i in range(9)) for j in range(9)])


def test_envelope_matches_oracle_basics():
    env = hull.lower_envelope([(0,), (1,), (2,)], [0, -1, 0])
    assert [c.marking for c in env.cells] == [(0, 1), (1, 2)]
    assert lower_facet_oracle([(0,), (1,), (2,)], [0, -1, 0]) == [(0, 1), (1, 2)]
    env = hull.lower_envelope([(0,), (1,), (2,), (3,)], [0, 0, 1, 0])
    assert [c.marking for c in env.cells] == [(0, 1, 3)]
    assert lower_facet_oracle([(0,), (1,), (2,), (3,)], [0, 0, 1, 0]) == [(0, 1, 3)]


def test_envelope_random_against_oracle():
    rng = random.Random(2024)
    for _ in range(60):
        pts = random_point_configuration(rng, max_points=8, max_dim=2, spread=5)
        hts = [Fraction(rng.randint(-20, 20)) for _ in pts]
        env = hull.lower_envelope(pts, hts)
        assert [c.marking for c in env.cells] == lower_facet_oracle(pts, hts)


def test_envelope_support_signs():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]
    hts = [0, 1, 1, 1, 9]
    env = hull.lower_envelope(pts, hts)
    for cell in env.cells:
        for j, (p, h) in enumerate(zip(pts, hts)):
            s = env.support_sign(cell, p, h)
            assert (s == 0) == (j in cell.marking)
            assert s >= 0


def test_ambient_plane_full_dim():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    hts = [0, 0, 0, 1]
    env = hull.lower_envelope(pts, hts)
    for cell in env.cells:
        a, a0, den = env.ambient_plane(cell)
        for j, (p, h) in enumerate(zip(pts, hts)):
            s = h * den - linalg.dot(a, p) - a0
            assert (s == 0) == (j in cell.marking)
            assert s >= 0
