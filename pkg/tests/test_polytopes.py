import random
from fractions import Fraction

import pytest

from polystrata import polytopes as pt
from polystrata.errors import InputError


def test_hypersimplex_1_3_is_standard_triangle():
    p = pt.hypersimplex(1, 3)
    assert p.vertices == ((0, 0, 1), (0, 1, 0), (1, 0, 0))


def test_hypersimplex_2_4_counts():
    p = pt.hypersimplex(2, 4)
    assert len(p.vertices) == 6
    assert p.dim == 3
    assert len(p.lattice_points()) == 6  # vertices only
    assert p.normalized_volume() == 4


def test_hypersimplex_bad_range():
    with pytest.raises(InputError):
        pt.hypersimplex(0, 3)
    with pytest.raises(InputError):
        pt.hypersimplex(3, 3)


def test_segment_lattice_data():
    seg = pt.LatticePolytope([(0,), (2,)])
    assert seg.lattice_points() == ((0,), (1,), (2,))
    assert seg.normalized_volume() == 2


def test_unit_square_volume():
    sq = pt.LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert sq.normalized_volume() == 2  # two unimodular triangles


def test_from_points_drops_interior():
    p = pt.LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (1, 1), (2, 2), (1, 0)])
    assert p.vertices == ((0, 0), (0, 2), (2, 0), (2, 2))


def test_non_integral_rejected():
    with pytest.raises(InputError):
        pt.LatticePolytope([(Fraction(1, 2), 0)])


def test_lower_dimensional_volume_uses_induced_lattice():
    # segment from (0,0) to (2,2): its lattice has basis (1,1)
    seg = pt.LatticePolytope([(0, 0), (2, 2)])
    assert seg.normalized_volume() == 2
    # triangle in a plane inside Z^3
    tri = pt.LatticePolytope([(0, 0, 0), (1, 0, 1), (0, 1, 1)])
    assert tri.normalized_volume() == 1


def test_meet_properly():
    t1 = pt.LatticePolytope([(0, 0), (1, 0), (1, 1)])
    t2 = pt.LatticePolytope([(0, 0), (0, 1), (1, 1)])
    ok, common = pt.meet_properly(t1, t2)
    assert ok and len(common) == 2
    big = pt.LatticePolytope([(0, 0), (2, 0), (0, 2)])
    assert not pt.meet_properly(t1, big)[0]
    far = pt.LatticePolytope([(5, 5), (6, 5), (5, 6)])
    ok, common = pt.meet_properly(t1, far)
    assert ok and common == []


def test_faces_of_square():
    sq = pt.LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    faces = sq.faces()
    assert len(faces[0]) == 4 and len(faces[1]) == 4 and len(faces[2]) == 1
    assert len(sq.edges()) == 4


def test_faces_of_hypersimplex():
    p = pt.hypersimplex(2, 4)  # octahedron
    faces = p.faces()
    assert len(faces[0]) == 6 and len(faces[1]) == 12 and len(faces[2]) == 8


def test_euclidean_volume():
    assert pt.euclidean_volume([(0, 0), (1, 0), (0, 1), (1, 1)]) == 1
    assert pt.euclidean_volume([(0, 0), (2, 0), (0, 2)]) == 2
    assert pt.euclidean_volume([(0, 0), (1, 1)]) == 0  # lower-dimensional
    cube = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    assert pt.euclidean_volume(cube) == 1


def test_volume_additivity_random_subdivisions():
    from polystrata.polytopes import PointConfiguration
    from polystrata import subdivisions as sd

    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(4, 8)
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(-4, 4), rng.randint(-4, 4)))
        config = PointConfiguration(sorted(pts))
        heights = [rng.randint(-9, 9) for _ in range(n)]
        sub = sd.regular_subdivision(config, heights)
        geo = sd._geometry(config)
        assert sum(geo.cell_volume(c) for c in sub.cells) == geo.total_volume


def test_point_configuration_validation():
    with pytest.raises(InputError):
        pt.PointConfiguration([(0, 0), (0, 0)])
    with pytest.raises(InputError):
        pt.PointConfiguration([])
    c = pt.PointConfiguration([(0, 0), (Fraction(1, 2), 1)])
    assert not c.is_integral()
    assert c.dim == 1
