import random

import pytest

from polystrata import complexes as cx
from polystrata import linalg
from polystrata.errors import InputError
from polystrata.polytopes import LatticePolytope, PointConfiguration


SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_validate_two_squares_sharing_edge():
    pc = cx.validate_complex([SQUARE, [(1, 0), (2, 0), (1, 1), (2, 1)]])
    assert len(pc.maximal) == 2


def test_validate_overlap_rejected():
    with pytest.raises(cx.ComplexViolation) as err:
        cx.validate_complex([[(0, 0), (2, 0), (0, 1), (2, 1)], [(1, 0), (3, 0), (1, 1), (3, 1)]])
    assert err.value.pair == (0, 1)


def test_validate_diagonal_split():
    pc = cx.validate_complex([[(0, 0), (1, 0), (1, 1)], [(0, 0), (0, 1), (1, 1)]])
    assert len(pc.maximal) == 2


def test_tilde_lattices():
    assert cx.tilde_lattice(LatticePolytope([(0,), (1,)])) == [(1, 0), (0, 1)]
    assert cx.tilde_lattice(LatticePolytope([(1,)])) == [(1, 1)]
    assert linalg.lattice_eq(
        cx.tilde_lattice(LatticePolytope([(0,), (2,)])), [(1, 0), (0, 1)]
    )
    # rank is always dim + 1
    for cell in (LatticePolytope(SQUARE), LatticePolytope([(0, 0), (3, 3)])):
        assert len(cx.tilde_lattice(cell)) == cell.dim + 1


def test_cech_single_cell():
    pc = cx.validate_complex([SQUARE])
    cech = cx.cech_lattice_complex(pc)
    assert cech.chain.ranks == (3,)


def test_cech_segment_chain():
    pc = cx.validate_complex([[(0,), (1,)], [(1,), (2,)]])
    cech = cx.cech_lattice_complex(pc)
    assert cech.chain.ranks == (4, 1)
    # boundary injective
    assert linalg.smith_normal_form(cech.chain.boundaries[0]).rank == 1


def test_cech_square_split():
    pc = cx.validate_complex([[(0, 0), (1, 0), (1, 1)], [(0, 0), (0, 1), (1, 1)]])
    cech = cx.cech_lattice_complex(pc)
    # cell lattices have rank 3 each; the shared diagonal has lattice rank 2
    assert cech.chain.ranks == (6, 2)


def test_gluing_single_cells_battery():
    cells = [
        [(0,), (1,)],
        [(0,), (2,)],
        SQUARE,
        [(0, 0), (1, 0), (0, 1)],
        [(0, 0), (2, 0), (0, 2)],
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
    ]
    for c in cells:
        pc = cx.validate_complex([c])
        g = cx.gluing_cohomology(pc)
        assert g.h1_rank == 0
        assert g.h0_rank == LatticePolytope(c).dim + 1
        assert g.h0_torsion == ()


def test_gluing_examples():
    pc = cx.validate_complex([[(0,), (1,)], [(1,), (2,)]])
    g = cx.gluing_cohomology(pc)
    assert (g.h0_rank, g.h1_rank) == (3, 0)
    pc = cx.validate_complex([[(0, 0), (1, 0), (1, 1)], [(0, 0), (0, 1), (1, 1)]])
    g = cx.gluing_cohomology(pc)
    # closed-cover cell model: chain has ranks (6,2), all homology in degree 0
    assert (g.h0_rank, g.h1_rank) == (4, 0)


def test_functoriality_of_cell_lattices():
    pc = cx.validate_complex([[(0, 0), (2, 0), (0, 2)], [(2, 0), (0, 2), (2, 2)]])
    cech = cx.cech_lattice_complex(pc)
    by_level = {s: basis for lvl in cech.levels for s, _, basis in lvl}
    small = by_level[(0, 1)]
    for subset in ((0,), (1,)):
        big = by_level[subset]
        for row in small:
            assert linalg.in_lattice(row, big)


def test_boundary_squared_zero_random_complexes():
    rng = random.Random(17)
    from polystrata import subdivisions as sd

    built = 0
    while built < 25:
        n = rng.randint(4, 7)
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(-3, 3), rng.randint(-3, 3)))
        config = PointConfiguration(sorted(pts))
        sub = sd.regular_subdivision(config, [rng.randint(-6, 6) for _ in range(n)])
        if not 2 <= len(sub.cells) <= 4:
            continue
        built += 1
        cells = [
            LatticePolytope.from_points([config.points[i] for i in c]) for c in sub.cells
        ]
        pc = cx.validate_complex(cells)
        cech = cx.cech_lattice_complex(pc)  # ChainComplex asserts d o d = 0
        h = cx.homology(cech.chain)
        euler_ranks = sum((-1) ** p * r for p, r in enumerate(cech.chain.ranks))
        euler_h = sum((-1) ** p * grp.rank for p, grp in enumerate(h))
        assert euler_ranks == euler_h


def test_pseudomanifold_single_square():
    pc = cx.validate_complex([SQUARE])
    rep = cx.pseudomanifold_check(pc)
    assert rep.status == "with_boundary" and len(rep.boundary) == 4


def test_pseudomanifold_two_triangles():
    pc = cx.validate_complex([[(0, 0), (1, 0), (1, 1)], [(0, 0), (0, 1), (1, 1)]])
    rep = cx.pseudomanifold_check(pc)
    assert rep.status == "with_boundary" and len(rep.boundary) == 4


def test_pseudomanifold_three_squares_on_edge():
    c1 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
    c2 = [(0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 0, 1)]
    c3 = [(0, 0, 0), (1, 0, 0), (0, -1, 0), (1, -1, 0)]
    pc = cx.validate_complex([c1, c2, c3])
    rep = cx.pseudomanifold_check(pc)
    assert rep.status == "not_pseudomanifold"
    assert rep.witness[0] == "overcrowded-face"


def test_pseudomanifold_non_pure():
    pc = cx.validate_complex([SQUARE, [(2, 0), (3, 0)]])
    rep = cx.pseudomanifold_check(pc)
    assert rep.status == "not_pseudomanifold"
    assert rep.witness[0] == "non-pure"


def test_marked_complex_validation():
    pc = cx.validate_complex([SQUARE])
    with pytest.raises(InputError):
        cx.marked_complex(pc, {0: [(0, 0), (1, 0)]})  # hull != cell
    mc = cx.marked_complex(pc, {0: SQUARE})
    assert mc.markings[0] == tuple(sorted(SQUARE))


def test_marked_section_segment_01():
    pc = cx.validate_complex([[(0,), (1,)]])
    mc = cx.marked_complex(pc, {0: [(0,), (1,)]})
    res = cx.pair_cohomology(mc)
    assert res.h1_rank == 0 and res.h0_rank == 0 and res.h0_torsion == ()
    assert res.automorphisms_finite and not res.automorphism_flag


def test_marked_section_segment_02_torsion():
    pc = cx.validate_complex([[(0,), (2,)]])
    mc = cx.marked_complex(pc, {0: [(0,), (2,)]})
    res = cx.pair_cohomology(mc)
    assert res.h0_rank == 0 and res.h0_torsion == (2,)
    assert res.automorphisms_finite


def test_marked_section_single_vertex():
    pc = cx.validate_complex([[(5,)]])
    mc = cx.marked_complex(pc, {0: [(5,)]})
    res = cx.pair_cohomology(mc)
    assert (res.h0_rank, res.h1_rank) == (0, 0)
    assert res.h0_torsion == () and res.h1_torsion == ()


def test_full_marking_automorphisms_track_lattice_generation():
    # full marking always spans, so automorphisms are finite; they are
    # trivial exactly when the degree-one lifts of the lattice points
    # generate the saturated cell lattice
    cells = [
        [(0,), (1,)],
        [(0,), (3,)],
        SQUARE,
        [(0, 0), (2, 0), (0, 2)],
        [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)],  # empty simplex, index 2
    ]
    for c in cells:
        cell = LatticePolytope(c)
        pc = cx.validate_complex([cell])
        mc = cx.marked_complex(pc, {0: list(cell.lattice_points())})
        res = cx.pair_cohomology(mc)
        assert res.automorphisms_finite and not res.automorphism_flag
        gens = [(1,) + tuple(m) for m in cell.lattice_points()]
        generated_is_saturated = linalg.lattice_eq(
            linalg.hermite_normal_form(gens), linalg.saturate(gens)
        )
        assert (res.h0_torsion == ()) == generated_is_saturated
