import random
from math import gcd

import pytest

from polystrata import linalg
from oracles import det_expansion, minor_gcd


def snf_diag(res, nr, nc):
    return tuple(
        tuple(
            res.invariant_factors[i] if i == j and i < len(res.invariant_factors) else 0
            for j in range(nc)
        )
        for i in range(nr)
    )


def test_snf_identity():
    res = linalg.smith_normal_form(linalg.identity(3))
    assert res.invariant_factors == (1, 1, 1)


def test_snf_2468():
    a = [[2, 4], [6, 8]]
    res = linalg.smith_normal_form(a)
    # d1 = gcd of entries, d1*d2 = |det| = 8
    assert res.invariant_factors == (2, 4)
    assert linalg.mat_mul(linalg.mat_mul(res.left, a), res.right) == snf_diag(res, 2, 2)


def test_snf_zero_matrix():
    res = linalg.smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert res.invariant_factors == ()


def test_snf_random_against_minor_gcd_oracle():
    rng = random.Random(20240214)
    for _ in range(200):
        nr = rng.randint(1, 6)
        nc = rng.randint(1, 6)
        a = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        res = linalg.smith_normal_form(a)
        assert linalg.mat_mul(linalg.mat_mul(res.left, a), res.right) == snf_diag(res, nr, nc)
        for k in range(len(res.invariant_factors) - 1):
            assert res.invariant_factors[k + 1] % res.invariant_factors[k] == 0
        assert abs(det_expansion(res.left)) == 1
        assert abs(det_expansion(res.right)) == 1
        # product of the first k invariant factors = gcd of all k x k minors
        prod = 1
        for k, d in enumerate(res.invariant_factors, start=1):
            prod *= d
            assert prod == minor_gcd(a, k)
        assert minor_gcd(a, len(res.invariant_factors) + 1) == 0 or len(
            res.invariant_factors
        ) == min(nr, nc)


def test_det_matches_expansion():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 5)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert linalg.det(a) == det_expansion(a)


def test_int_rank_matches_rational_rank():
    rng = random.Random(8)
    for _ in range(100):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        a = [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)]
        assert linalg.int_rank(a) == linalg.rank(a)


def test_saturate_index_two():
    assert linalg.saturate([(2, 0)]) == [(1, 0)]


def test_saturate_full_lattice():
    assert linalg.lattice_eq(linalg.saturate([(1, 1), (1, 2)]), [(1, 0), (0, 1)])


def test_saturate_empty():
    assert linalg.saturate([]) == []


def test_saturate_properties():
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(1, 4)
        k = rng.randint(1, 3)
        gens = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(k)]
        sat = linalg.saturate(gens)
        # same rational span
        assert linalg.rank(list(gens) + list(sat)) == linalg.rank(list(gens))
        assert linalg.rank(sat) == len(sat) == linalg.rank(list(gens))
        # torsion-free quotient: SNF of the basis has unit invariant factors
        if sat:
            assert set(linalg.smith_normal_form(sat).invariant_factors) <= {1}
        # generators lie in the saturation
        for g in gens:
            assert linalg.in_lattice(g, sat) or all(x == 0 for x in g)


def test_kernel_basis():
    ker = linalg.kernel_basis([[1, 2, 3]])
    assert len(ker) == 2
    for v in ker:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0


def test_hnf_canonical():
    b1 = linalg.hermite_normal_form([(2, 1), (0, 3)])
    b2 = linalg.hermite_normal_form([(2, 4), (0, 3)])
    assert b1 == b2  # same lattice, same canonical basis


def test_int_solve():
    sol = linalg.int_solve([[2, 0], [0, 3]], (4, 9))
    assert sol == (2, 3)
    assert linalg.int_solve([[2]], (3,)) is None
