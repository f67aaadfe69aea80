import itertools
import random
from fractions import Fraction

import pytest

from polystrata import matroids as mt
from polystrata import polytopes as pt
from polystrata.errors import InputError
from oracles import det_expansion


def uniform_rank_function(r, n):
    """d_I = 0 for proper subsets, d(full) = r, all blocks 1-dimensional."""
    full = (1 << n) - 1
    return mt.RankFunction(n, r, [1] * n, {full: r})


def random_subspace(rng, n, r):
    while True:
        rows = [
            [Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(r)
        ]
        from polystrata import linalg

        if linalg.rank(rows) == r:
            return rows


def test_rank_function_validation():
    with pytest.raises(InputError):
        # d(full) = 3 > sum of dims = 2: monotone bound violated
        mt.RankFunction(2, 3, [1, 1], {3: 3})
    with pytest.raises(InputError):
        mt.RankFunction(2, 1, [1, 1], {0: 1, 3: 1})  # d(empty) != 0
    rf = mt.RankFunction(2, 2, [1, 1], {1: 1, 2: 1, 3: 2})
    assert mt.check_submodular(rf).ok


def test_submodular_violation_reported():
    # d({1,2}) = 2 but singletons 0: d(I&J)+d(I|J) = 0+2 < 1+1 fails only if
    # singletons are bigger; build an explicit violation instead
    rf = mt.RankFunction(3, 1, [1, 1, 1], {1: 1, 2: 1, 3: 1, 5: 1, 6: 1, 7: 1})
    res = mt.check_submodular(rf)
    assert not res.ok
    i, j = res.violation
    assert i == (0,) and j == (1,)


def test_rank_function_of_diagonal_line():
    basis = [[1, 1, 1]]
    rf = mt.rank_function_of_subspace(basis, [1, 1, 1])
    for mask in range(7):
        assert rf.d[mask] == 0
    assert rf.d[7] == 1
    assert mt.check_submodular(rf).ok


def test_rank_function_full_and_zero():
    basis = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rf = mt.rank_function_of_subspace(basis, [1, 1, 1])
    for mask in range(8):
        assert rf.d[mask] == bin(mask).count("1")
    with pytest.raises(InputError):
        mt.rank_function_of_subspace([[1, 0], [2, 0]], [1, 1])  # dependent rows


def test_random_subspaces_submodular_and_polytopes():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randint(2, 6)
        r = rng.randint(1, n)
        rows = random_subspace(rng, n, r)
        rf = mt.rank_function_of_subspace(rows, [1] * n)
        assert mt.check_submodular(rf).ok
        poly = mt.generalized_matroid_polytope(rf)
        assert not poly.is_empty
        assert all(x in (0, 1) for v in poly.vertices for x in v)


def test_generalized_matroid_polytope_uniform_is_hypersimplex():
    rf = uniform_rank_function(2, 4)
    poly = mt.generalized_matroid_polytope(rf)
    assert set(poly.vertices) == set(pt.hypersimplex(2, 4).vertices)


def test_generalized_matroid_polytope_point():
    rf = mt.RankFunction(1, 3, [3], {1: 3})
    poly = mt.generalized_matroid_polytope(rf)
    assert poly.vertices == ((3,),)


def test_generalized_matroid_polytope_diagonal_line():
    rf = mt.rank_function_of_subspace([[1, 1, 1]], [1, 1, 1])
    poly = mt.generalized_matroid_polytope(rf)
    assert set(poly.vertices) == set(pt.hypersimplex(1, 3).vertices)


def test_unimodular_examples():
    vs = mt.VectorSystem(2, ((1, 0), (0, 1), (1, 1)))
    assert mt.is_unimodular_system(vs).ok
    vs = mt.VectorSystem(2, ((1, 0), (1, 2)))
    res = mt.is_unimodular_system(vs)
    assert not res.ok
    assert res.witness_indices == (0, 1) and res.witness_minor == 2


def test_unimodular_against_expansion_oracle():
    rng = random.Random(5)
    for _ in range(60):
        r = rng.randint(1, 3)
        k = rng.randint(r, r + 4)
        vecs = tuple(tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(k))
        res = mt.is_unimodular_system(mt.VectorSystem(r, vecs))
        oracle_ok = all(
            det_expansion([list(vecs[i]) for i in sub]) in (-1, 0, 1)
            for sub in itertools.combinations(range(k), r)
        )
        assert res.ok == oracle_ok


def test_idp_unit_square():
    sq = pt.LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert mt.is_idp_polytope(sq, 3).ok


def test_idp_hypersimplex():
    assert mt.is_idp_polytope(pt.hypersimplex(2, 4), 3).ok


def test_idp_reeve_simplex_fails():
    reeve = pt.LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 3)])
    res = mt.is_idp_polytope(reeve, 2)
    assert not res.ok
    assert res.witness_level == 2
    with pytest.raises(InputError):
        mt.is_idp_polytope(reeve, 1)


def test_matroid_polytope_tests():
    assert mt.is_matroid_polytope(pt.hypersimplex(2, 4))
    bad = pt.LatticePolytope([(1, 1, 0, 0), (0, 0, 1, 1)])
    assert not mt.is_matroid_polytope(bad)
    with pytest.raises(InputError):
        mt.is_matroid_polytope(pt.LatticePolytope([(0, 0), (2, 0)]))


def test_matroid_polytope_split_cells():
    # split Delta(2,4) along x1 + x2 = 1
    v = pt.hypersimplex(2, 4).vertices
    upper = [p for p in v if p[0] + p[1] >= 1]
    lower = [p for p in v if p[0] + p[1] <= 1]
    assert mt.is_matroid_polytope(pt.LatticePolytope(upper))
    assert mt.is_matroid_polytope(pt.LatticePolytope(lower))


def test_cographic_columns_are_unimodular():
    from polystrata import periodic as pe
    from oracles import random_connected_graph

    rng = random.Random(55)
    for _ in range(50):
        nv, edges = random_connected_graph(rng, max_vertices=7, max_edges=12)
        g = pe.Graph(nv, edges)
        basis = pe.cycle_space_basis(g)
        if not basis:
            continue
        cols = tuple(tuple(row[e] for row in basis) for e in range(len(edges)))
        assert mt.is_unimodular_system(mt.VectorSystem(len(basis), cols)).ok
