import random
from fractions import Fraction

import pytest

from polystrata import subdivisions as sd
from polystrata.errors import InputError, SizeLimitError
from polystrata.polytopes import PointConfiguration
from oracles import lower_facet_oracle

C3 = PointConfiguration([(0,), (1,), (2,)])
C4 = PointConfiguration([(0,), (1,), (2,), (3,)])
SQUARE = PointConfiguration([(0, 0), (1, 0), (0, 1), (1, 1)])
NESTED = PointConfiguration([(0, 0), (18, 0), (0, 18), (3, 3), (9, 3), (3, 9)])
TWISTED = [(0, 1, 4), (1, 4, 5), (1, 2, 5), (2, 3, 5), (0, 2, 3), (0, 3, 4), (3, 4, 5)]


def test_flat_lift():
    sub = sd.regular_subdivision(C3, [0, 0, 0])
    assert sub.cells == ((0, 1, 2),)


def test_convex_lift():
    sub = sd.regular_subdivision(C3, [0, -1, 0])
    assert sub.cells == ((0, 1), (1, 2))


def test_partial_flat_lift_keeps_single_cell():
    # point 1 lies exactly on the envelope segment; the cell is [0,3] with
    # marking {0,1,3}, never split at the interior marked point
    sub = sd.regular_subdivision(C4, [0, 0, 1, 0])
    assert sub.cells == ((0, 1, 3),)
    assert lower_facet_oracle(C4.points, [0, 0, 1, 0]) == [(0, 1, 3)]


def test_heights_as_dict():
    sub = sd.regular_subdivision(C3, {0: 0, 1: -1, 2: 0})
    assert sub.cells == ((0, 1), (1, 2))
    with pytest.raises(InputError):
        sd.regular_subdivision(C3, {0: 0, 1: -1})


def test_is_regular_round_trip():
    sub = sd.regular_subdivision(C3, [0, -1, 0])
    res = sd.is_regular(sub)
    assert res.regular
    assert sd.regular_subdivision(C3, res.certificate).cells == sub.cells


def test_trivial_subdivision_regular():
    sub = sd.MarkedSubdivision(C3, [(0, 1, 2)])
    res = sd.is_regular(sub)
    assert res.regular


def test_twisted_nested_triangles_not_regular():
    sub = sd.MarkedSubdivision(NESTED, TWISTED)
    sd.validate_subdivision(sub)
    assert not sd.is_regular(sub).regular


def test_invalid_subdivision_rejected():
    with pytest.raises(InputError):
        sd.validate_subdivision(sd.MarkedSubdivision(C4, [(0, 2), (1, 3)]))  # overlap
    with pytest.raises(InputError):
        sd.validate_subdivision(sd.MarkedSubdivision(C4, [(0, 2)]))  # volume gap


def test_gkz_examples():
    assert sd.gkz_vector(sd.MarkedSubdivision(C3, [(0, 2)])) == (2, 0, 2)
    assert sd.gkz_vector(sd.MarkedSubdivision(C3, [(0, 1), (1, 2)])) == (1, 2, 1)
    with pytest.raises(InputError):
        sd.gkz_vector(sd.MarkedSubdivision(C3, [(0, 1, 2)]))  # not a triangulation


def test_gkz_total_is_dimension_times_volume():
    rng = random.Random(12)
    for _ in range(30):
        n = rng.randint(3, 7)
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(-4, 4), rng.randint(-4, 4)))
        config = PointConfiguration(sorted(pts))
        geo = sd._geometry(config)
        for t in sd.enumerate_triangulations(config)[:5]:
            v = sd.gkz_vector(t)
            assert sum(v) == (geo.e + 1) * geo.total_volume


def test_enumerate_triangulations_collinear():
    tris = sd.enumerate_triangulations(C4)
    assert len(tris) == 4
    cells = {t.cells for t in tris}
    assert ((0, 3),) in cells and ((0, 1), (1, 2), (2, 3)) in cells


def test_enumerate_triangulations_simple():
    assert len(sd.enumerate_triangulations(PointConfiguration([(0, 0), (1, 0), (0, 1)]))) == 1
    assert len(sd.enumerate_triangulations(SQUARE)) == 2


def test_enumeration_size_limits():
    big = PointConfiguration([(i,) for i in range(13)])
    with pytest.raises(SizeLimitError):
        sd.enumerate_triangulations(big)


def test_secondary_polytope_c3():
    poly = sd.secondary_polytope(C3)
    assert set(poly.vertices) == {(2, 0, 2), (1, 2, 1)}
    assert poly.dim == 1


def test_secondary_polytope_c4():
    poly = sd.secondary_polytope(C4)
    assert poly.dim == 2
    assert len(poly.vertices) == 4
    faces = poly.faces()
    assert len(faces[0]) == 4 and len(faces[1]) == 4 and len(faces[2]) == 1


def test_secondary_polytope_point():
    poly = sd.secondary_polytope(PointConfiguration([(0, 0), (1, 0), (0, 1)]))
    assert poly.dim == 0


def test_enumerate_regular_subdivisions_counts():
    regs4 = sd.enumerate_regular_subdivisions(C4)
    assert len(regs4) == 9
    expected = {
        ((0, 3),),
        ((0, 1, 3),),
        ((0, 2, 3),),
        ((0, 1, 2, 3),),
        ((0, 1), (1, 3)),
        ((0, 2), (2, 3)),
        ((0, 1), (1, 2, 3)),
        ((0, 1, 2), (2, 3)),
        ((0, 1), (1, 2), (2, 3)),
    }
    assert {s.cells for s, _ in regs4} == expected
    assert len(sd.enumerate_regular_subdivisions(C3)) == 3
    single = sd.enumerate_regular_subdivisions(PointConfiguration([(0, 0), (1, 0), (0, 1)]))
    assert len(single) == 1


def test_bijection_face_count():
    for config in (C3, C4, SQUARE):
        regs = sd.enumerate_regular_subdivisions(config)
        faces = sd.secondary_polytope(config).faces()
        assert len(regs) == sum(len(v) for v in faces.values())


def test_enumerate_all_subdivisions_collinear_all_regular():
    subs = sd.enumerate_all_subdivisions(C4)
    assert len(subs) == 9
    assert all(flag for _, flag in subs)


def test_enumerate_all_subdivisions_square():
    subs = sd.enumerate_all_subdivisions(SQUARE)
    assert all(flag for _, flag in subs)
    tri_cells = {s.cells for s, _ in subs if len(s.cells) == 2}
    assert tri_cells == {((0, 1, 2), (1, 2, 3)), ((0, 1, 3), (0, 2, 3))}


def test_enumerate_all_nested_triangles_has_nonregular():
    subs = sd.enumerate_all_subdivisions(NESTED)
    flags = {s.cells: flag for s, flag in subs}
    assert tuple(sorted(tuple(sorted(c)) for c in TWISTED)) in flags
    assert not flags[tuple(sorted(tuple(sorted(c)) for c in TWISTED))]
    assert any(not f for f in flags.values())
    assert any(f for f in flags.values())


def test_round_trip_property():
    rng = random.Random(2718)
    for _ in range(200):
        n = rng.randint(3, 9)
        dim = rng.choice([1, 2])
        pts = set()
        while len(pts) < n:
            pts.add(tuple(rng.randint(-6, 6) for _ in range(dim)))
        config = PointConfiguration(sorted(pts))
        heights = [Fraction(rng.randint(-20, 20)) for _ in range(n)]
        sub = sd.regular_subdivision(config, heights)
        res = sd.is_regular(sub)
        assert res.regular
        assert sd.regular_subdivision(config, res.certificate).cells == sub.cells


def test_gkz_vertex_property_nested_triangles():
    tris = sd.enumerate_triangulations(NESTED)
    assert len(tris) > 2
    gkzs = {t.cells: sd.gkz_vector(t) for t in tris}
    poly = sd.secondary_polytope(NESTED)
    vertex_set = set(poly.vertices)
    found_nonregular = False
    for t in tris:
        v = gkzs[t.cells]
        if sd.is_regular(t).regular:
            assert v in vertex_set
        else:
            found_nonregular = True
            assert v not in vertex_set
    assert found_nonregular


def test_stratum_dimensions():
    rep = sd.stratum_dimensions(C3, sd.MarkedSubdivision(C3, [(0, 1, 2)]))
    assert rep.secondary_codim == 0 and not rep.extra_component_flag
    rep = sd.stratum_dimensions(C3, sd.MarkedSubdivision(C3, [(0, 1), (1, 2)]))
    assert rep == sd.StratumReport(1, 0, False)
    rep = sd.stratum_dimensions(SQUARE, sd.MarkedSubdivision(SQUARE, [(0, 1, 3), (0, 2, 3)]))
    assert rep == sd.StratumReport(1, 0, False)


def test_stratum_dimensions_rejects_nonregular():
    with pytest.raises(InputError):
        sd.stratum_dimensions(NESTED, sd.MarkedSubdivision(NESTED, TWISTED))


def test_stratum_codim_matches_face_dim():
    for config in (C4, SQUARE):
        dim_secondary = config.n - config.dim - 1
        for sub, fdim in sd.enumerate_regular_subdivisions(config):
            rep = sd.stratum_dimensions(config, sub)
            assert rep.secondary_codim == dim_secondary - fdim
