"""Rank functions, generalized matroid polytopes and unimodularity tests.

Ground sets are 0-indexed and subsets are encoded as bitmasks.  Rank
functions are stored densely (one value per bitmask), which keeps the
exhaustive submodularity check a plain loop; desk scale caps the ground
set size rather than the algorithm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import InputError, SizeLimitError
from . import linalg
from . import polytopes as _pt

MAX_GROUND = 20


def _mask_to_set(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


class RankFunction:
    """A function d: subsets of {0..n-1} -> Z>=0 with the basic sanity axioms.

    Construction enforces d(empty) = 0, d(full) = r, monotonicity and the
    block bound d(I) <= sum of dim E_i over I.  Submodularity is *not*
    required here; see :func:`check_submodular`.
    """

    __slots__ = ("n", "r", "block_dims", "d")

    def __init__(self, n: int, r: int, block_dims, d):
        if not 0 < n <= MAX_GROUND:
            raise InputError(f"ground set size must be in 1..{MAX_GROUND}")
        dims = tuple(int(x) for x in block_dims)
        if len(dims) != n or any(x <= 0 for x in dims):
            raise InputError("block_dims must list one positive integer per element")
        full = (1 << n) - 1
        if callable(d):
            dense = tuple(int(d(m)) for m in range(full + 1))
        elif isinstance(d, dict):
            dense = tuple(int(d.get(m, 0)) for m in range(full + 1))
        else:
            dense = tuple(int(x) for x in d)
            if len(dense) != full + 1:
                raise InputError("dense rank table must have 2^n entries")
        if dense[0] != 0:
            raise InputError("d(empty) must be 0")
        if dense[full] != r:
            raise InputError("d(full) must equal r")
        for m in range(full + 1):
            bound = sum(dims[i] for i in _mask_to_set(m))
            if not 0 <= dense[m] <= bound:
                raise InputError(f"d violates 0 <= d(I) <= sum dims on mask {m}")
            for i in range(n):
                if not m >> i & 1 and dense[m] > dense[m | 1 << i]:
                    raise InputError(f"d not monotone at mask {m}, element {i}")
        self.n = n
        self.r = int(r)
        self.block_dims = dims
        self.d = dense

    def __eq__(self, other):
        return (
            isinstance(other, RankFunction)
            and (self.n, self.r, self.block_dims, self.d)
            == (other.n, other.r, other.block_dims, other.d)
        )

    def __hash__(self):
        return hash((self.n, self.r, self.block_dims, self.d))


class SubmodularityResult(NamedTuple):
    ok: bool
    violation: tuple[tuple[int, ...], tuple[int, ...]] | None

    def __bool__(self):
        return self.ok


def check_submodular(rf: RankFunction) -> SubmodularityResult:
    """Exhaustively check d(I&J) + d(I|J) >= d(I) + d(J) over all pairs.

    Returns the first violating pair in bitmask order, if any.
    """
    d = rf.d
    full = (1 << rf.n) - 1
    for i in range(full + 1):
        di = d[i]
        for j in range(full + 1):
            if d[i & j] + d[i | j] < di + d[j]:
                return SubmodularityResult(False, (_mask_to_set(i), _mask_to_set(j)))
    return SubmodularityResult(True, None)


def rank_function_of_subspace(basis_rows, block_dims) -> RankFunction:
    """Rank function I -> dim(V ∩ ⊕_{i in I} E_i) of a subspace V.

    ``basis_rows`` span V inside the block-decomposed ambient space; rows
    must be independent.  Ranks are computed exactly over the rationals.
    """
    dims = tuple(int(x) for x in block_dims)
    N = sum(dims)
    rows = [tuple(Fraction(x) for x in row) for row in basis_rows]
    if any(len(row) != N for row in rows):
        raise InputError("basis rows must have length sum(block_dims)")
    r = len(rows)
    if rows and linalg.rank(rows) != r:
        raise InputError("basis rows are dependent")
    n = len(dims)
    offsets = [0]
    for x in dims:
        offsets.append(offsets[-1] + x)

    def unit(k):
        v = [Fraction(0)] * N
        v[k] = Fraction(1)
        return tuple(v)

    dense = []
    for mask in range(1 << n):
        block_units = [
            unit(k)
            for i in _mask_to_set(mask)
            for k in range(offsets[i], offsets[i + 1])
        ]
        # dim(V ∩ E_I) = dim V + dim E_I - dim(V + E_I)
        stacked = rows + block_units
        dense.append(r + len(block_units) - (linalg.rank(stacked) if stacked else 0))
    return RankFunction(n, r, dims, dense)


@dataclass(frozen=True)
class HRepPolytope:
    """A polytope given by equalities/inequalities, with computed vertices.

    Inequalities are written coeffs . x >= rhs.  Vertices may be rational;
    ``is_empty`` reflects exact infeasibility.
    """

    num_vars: int
    equalities: tuple
    inequalities: tuple
    vertices: tuple

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        if not self.vertices:
            return -1
        from . import hull as _hull

        return _hull.affine_span(self.vertices).dim

    def integral_vertices(self) -> bool:
        return all(Fraction(x).denominator == 1 for v in self.vertices for x in v)

    def as_lattice_polytope(self) -> _pt.LatticePolytope:
        if not self.integral_vertices():
            raise InputError("polytope has non-integral vertices")
        return _pt.LatticePolytope(self.vertices)


def generalized_matroid_polytope(rf: RankFunction) -> HRepPolytope:
    """The polytope {0 <= x_i <= dim E_i, sum x = r, sum_{i in I} x_i >= d_I}.

    The full inequality display is recorded; vertex enumeration drops rows
    that are dominated by a subset row (sound: sum_I x >= sum_J x >= d_J for
    J inside I).  Emptiness is a reported outcome, not an error.
    """
    n = rf.n
    if n > 8:
        raise SizeLimitError("vertex enumeration capped at 8 blocks")
    eqs = [(tuple(Fraction(1) for _ in range(n)), Fraction(rf.r))]
    ineqs = []
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        ineqs.append((tuple(e), Fraction(0)))
        ineqs.append((tuple(-x for x in e), Fraction(-rf.block_dims[i])))
    full = (1 << n) - 1
    subset_rows = []
    for mask in range(1, full):
        coeffs = tuple(Fraction(1 if mask >> i & 1 else 0) for i in range(n))
        subset_rows.append((coeffs, Fraction(rf.d[mask]), mask))
    ineqs.extend((c, rhs) for c, rhs, _ in subset_rows)

    essential = [
        (c, rhs)
        for c, rhs, mask in subset_rows
        if rf.d[mask] > 0
        and all(
            rf.d[sub] < rf.d[mask]
            for sub in range(mask)
            if sub & mask == sub and sub != mask
        )
    ]
    work_ineqs = ineqs[: 2 * n] + essential
    verts = _pt.vertices_of_hrep(eqs, work_ineqs, n)
    return HRepPolytope(n, tuple(eqs), tuple(ineqs), tuple(verts))


@dataclass(frozen=True)
class VectorSystem:
    r: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(len(v) != self.r for v in self.vectors):
            raise InputError("vectors must live in Z^r")


class UnimodularityResult(NamedTuple):
    ok: bool
    witness_indices: tuple[int, ...] | None
    witness_minor: int | None

    def __bool__(self):
        return self.ok


def is_unimodular_system(vs: VectorSystem) -> UnimodularityResult:
    """Check that every maximal minor of the vector system lies in {0, 1, -1}.

    All C(n, r) minors are evaluated exactly; the first offending subset (in
    index order) is returned as a witness.
    """
    vecs = [tuple(int(x) for x in v) for v in vs.vectors]
    for subset in itertools.combinations(range(len(vecs)), vs.r):
        m = linalg.det([vecs[i] for i in subset])
        if m not in (-1, 0, 1):
            return UnimodularityResult(False, subset, m)
    return UnimodularityResult(True, None, None)


class IdpResult(NamedTuple):
    ok: bool
    witness_point: tuple[int, ...] | None
    witness_level: int | None

    def __bool__(self):
        return self.ok


def is_idp_polytope(p: _pt.LatticePolytope, degree_bound: int) -> IdpResult:
    """Whether lattice points of cone levels 2..degree_bound decompose into level-1 sums.

    Verifies that every lattice point of k*P is a sum of k lattice points of
    P; a failure is returned with the first missing point (in its ambient
    coordinates) and the level where it occurs.
    """
    if degree_bound < 2:
        raise InputError("degree_bound must be at least 2")
    origin, basis, vcoords = p.lattice_coordinates()
    e = len(basis)
    if e == 0:
        return IdpResult(True, None, None)
    base = _pt.LatticePolytope(vcoords)
    level1 = set(base.lattice_points())
    reachable = set(level1)
    for k in range(2, degree_bound + 1):
        reachable = {linalg.vec_add(a, b) for a in reachable for b in level1}
        target = base.scale(k).lattice_points()
        for t in target:
            if t not in reachable:
                ambient = linalg.vec_add(
                    linalg.vec_scale(k, origin),
                    tuple(
                        sum(t[j] * basis[j][i] for j in range(e))
                        for i in range(p.ambient_dim)
                    ),
                )
                return IdpResult(False, ambient, k)
        reachable = set(target)  # all of them decompose, so all are reachable
    return IdpResult(True, None, None)


def is_matroid_polytope(p: _pt.LatticePolytope) -> bool:
    """Edge test: every edge parallel to some e_i - e_j.

    Requires the polytope to sit in a hypersimplex slice {0 <= x <= 1,
    sum x = r}; anything else is an input error.
    """
    sums = {sum(v) for v in p.vertices}
    if len(sums) != 1 or any(x not in (0, 1) for v in p.vertices for x in v):
        raise InputError("polytope is not contained in a 0/1 slice {sum x = r}")
    for a, b in p.edges():
        diff = [x - y for x, y in zip(a, b)]
        nonzero = [x for x in diff if x]
        if sorted(nonzero) != [-1, 1]:
            return False
    return True
