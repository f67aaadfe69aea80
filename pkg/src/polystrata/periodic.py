"""Periodic Delaunay and semi-Delaunay decompositions, Voronoi cones,
GL(g,Z) equivalence, hyperplane arrangements and cographic subdivisions.

Envelope-based decompositions follow a window-doubling policy: lattice
points of sup-norm <= W are lifted by the height, the lower envelope is
computed, and the run is accepted once (a) the cells meeting the closed
fundamental box are unchanged across a doubling, (b) each such cell passes
the exact empty-paraboloid check against the full doubled window, and, for
positive definite forms, (c) a rational tail bound certifies the check for
every lattice point beyond the doubled window.  The output is therefore
self-validating rather than trusting the termination heuristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import NamedTuple

from .errors import DivergenceError, InputError, SizeLimitError
from . import hull as _hull
from . import linalg
from .matroids import VectorSystem, UnimodularityResult, is_unimodular_system
from .polytopes import (
    LatticePolytope,
    euclidean_volume,
    vertices_of_hrep,
)

MAX_WINDOW = 64


def _num(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


class QuadraticForm:
    """Symmetric rational g x g matrix, certified positive semidefinite.

    PSD is checked exactly (all principal minors nonnegative); positive
    definiteness is the leading-minors test.
    """

    __slots__ = ("g", "matrix", "_pd")

    def __init__(self, matrix):
        rows = [tuple(Fraction(x) for x in r) for r in matrix]
        g = len(rows)
        if any(len(r) != g for r in rows):
            raise InputError("form matrix must be square")
        if g > 6:
            raise SizeLimitError("forms capped at g <= 6")
        for i in range(g):
            for j in range(g):
                if rows[i][j] != rows[j][i]:
                    raise InputError("form matrix must be symmetric")
        for subset in itertools.chain.from_iterable(
            itertools.combinations(range(g), k) for k in range(1, g + 1)
        ):
            minor = _fraction_det([[rows[i][j] for j in subset] for i in subset])
            if minor < 0:
                raise InputError(f"form is not positive semidefinite (minor {subset})")
        self.g = g
        self.matrix = tuple(rows)
        self._pd = all(
            _fraction_det([[rows[i][j] for j in range(k + 1)] for i in range(k + 1)]) > 0
            for k in range(g)
        )

    def is_positive_definite(self) -> bool:
        return self._pd

    def __call__(self, m) -> Fraction:
        return sum(
            self.matrix[i][j] * m[i] * m[j] for i in range(self.g) for j in range(self.g)
        )

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"QuadraticForm({[[str(x) for x in r] for r in self.matrix]})"


def _fraction_det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


class ResidueFunction:
    """A rational value per residue class of Z^g modulo a finite-index sublattice."""

    __slots__ = ("g", "period_basis", "values", "_binv")

    def __init__(self, period_basis, values):
        basis = tuple(tuple(int(x) for x in row) for row in period_basis)
        g = len(basis)
        if any(len(r) != g for r in basis):
            raise InputError("period basis must be square")
        d = abs(linalg.det(basis))
        if d == 0:
            raise InputError("period basis is singular")
        self.g = g
        self.period_basis = basis
        self._binv = None
        vals = {}
        for key, v in values.items():
            res = self.residue(tuple(int(x) for x in key))
            vals[res] = Fraction(v)
        if len(vals) != d:
            raise InputError(f"need one value per residue class ({d} classes)")
        self.values = vals

    def coords(self, m):
        sol = linalg.solve(linalg.transpose(self.period_basis), m)
        return sol

    def residue(self, m) -> tuple[int, ...]:
        c = self.coords(m)
        z = tuple(floor(x) for x in c)
        shift = linalg.mat_vec(linalg.transpose(self.period_basis), z)
        return linalg.vec_sub(m, shift)

    def __call__(self, m) -> Fraction:
        return self.values[self.residue(m)]


@dataclass(frozen=True)
class PeriodicCell:
    vertices: tuple  # lattice points for envelope cells; rational for arrangements
    marking: tuple  # lattice points on the supporting lower hyperplane


class PeriodicSubdivision:
    """Period-lattice orbit representatives of the maximal cells.

    Each representative is translated so that its lexicographically
    smallest vertex lies in the half-open fundamental box of the period
    lattice, and cells are sorted; equality of representatives therefore
    decides equality of periodic subdivisions.
    """

    __slots__ = ("g", "period_basis", "cells")

    def __init__(self, g, period_basis, cells):
        self.g = g
        self.period_basis = tuple(tuple(int(x) for x in r) for r in period_basis)
        self.cells = tuple(sorted(cells, key=lambda c: (c.vertices, c.marking)))

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicSubdivision)
            and self.g == other.g
            and linalg.hermite_normal_form(self.period_basis)
            == linalg.hermite_normal_form(other.period_basis)
            and self.cells == other.cells
        )

    def __hash__(self):
        return hash((self.g, tuple(linalg.hermite_normal_form(self.period_basis)), self.cells))

    def __repr__(self):
        return f"PeriodicSubdivision(g={self.g}, {len(self.cells)} cells/period)"

    def cell_invariants(self):
        from math import factorial

        inv = []
        for c in self.cells:
            vol = euclidean_volume(c.vertices) * factorial(self.g)
            inv.append((len(c.vertices), len(c.marking), vol))
        return tuple(sorted(inv))

    def verify_tiling(self) -> None:
        """Exact check that period translates tile a doubled fundamental box.

        Clipped volumes must add up to the box volume and distinct
        translates may only overlap in lower dimension.  Desk scale: g <= 3.
        """
        if self.g > 3:
            raise SizeLimitError("tiling verification supported for g <= 3")
        B = self.period_basis
        region = [tuple(Fraction(2 * x) for x in linalg.mat_vec(linalg.transpose(B), z))
                  for z in itertools.product((0, 1), repeat=self.g)]
        region_eqs, region_ins = _hrep_of_rational(region)
        target = euclidean_volume(region)
        pieces = []
        total = Fraction(0)
        for cell in self.cells:
            ceqs, cins = _hrep_of_rational(cell.vertices)
            lo, hi = _translate_range(cell.vertices, region, B)
            for z in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
                shift = linalg.mat_vec(linalg.transpose(B), z)
                eqs = [(n, c + linalg.dot(n, shift)) for n, c in ceqs]
                ins = [(n, c + linalg.dot(n, shift)) for n, c in cins]
                verts = vertices_of_hrep(eqs + region_eqs, ins + region_ins, self.g)
                if not verts:
                    continue
                vol = euclidean_volume(verts)
                if vol == 0:
                    continue
                total += vol
                pieces.append((eqs, ins, verts))
        if total != target:
            raise AssertionError(
                f"translates do not tile: clipped volume {total} != {target}"
            )
        for (e1, i1, v1), (e2, i2, v2) in itertools.combinations(pieces, 2):
            if not _bbox_overlap(v1, v2):
                continue
            common = vertices_of_hrep(e1 + e2, i1 + i2, self.g)
            if common and _hull.affine_span(common).dim == self.g:
                raise AssertionError("two period translates overlap in full dimension")


def _bbox_overlap(v1, v2) -> bool:
    d = len(v1[0])
    for i in range(d):
        if max(x[i] for x in v1) < min(x[i] for x in v2):
            return False
        if max(x[i] for x in v2) < min(x[i] for x in v1):
            return False
    return True


def _hrep_of_rational(verts):
    vs = sorted({tuple(Fraction(x) for x in v) for v in verts})
    d = len(vs[0])
    scale = 1
    for v in vs:
        for x in v:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [tuple(int(x * scale) for x in v) for v in vs]
    span = _hull.affine_span(ints)
    eqs = []
    if span.dim < d:
        diffs = [linalg.vec_sub(p, ints[0]) for p in ints]
        for w in linalg.nullspace(diffs):
            wi, _ = linalg.clear_denominators(w)
            wi = linalg.primitive(wi)
            eqs.append((wi, Fraction(linalg.dot(wi, ints[0]), scale)))
        ins = []
        if span.dim > 0:
            # facet inequalities inside the span, lifted (desk scale: reuse full hull)
            hres = _hull.convex_hull(vs)
            ins = [(f.normal, Fraction(f.offset)) for f in hres.facets]
        return eqs, ins
    raw = _hull._facets_int(ints, d)
    ins = [(n, Fraction(c, scale)) for n, c, _ in raw]
    return eqs, ins


def _translate_range(cell_verts, region_verts, basis):
    """Integer coordinate ranges z such that cell + z.B can meet the region."""
    g = len(basis)
    bt = linalg.transpose(basis)
    lo, hi = [], []
    cell_coords = [linalg.solve(bt, v) for v in cell_verts]
    region_coords = [linalg.solve(bt, v) for v in region_verts]
    for i in range(g):
        cmin = min(c[i] for c in cell_coords)
        cmax = max(c[i] for c in cell_coords)
        rmin = min(c[i] for c in region_coords)
        rmax = max(c[i] for c in region_coords)
        lo.append(floor(rmin - cmax))
        hi.append(floor(rmax - cmin) + 1)
    return lo, hi


# ---------------------------------------------------------------------------
# envelope-driven periodic subdivisions


def _window_points(g, w):
    return [tuple(p) for p in itertools.product(range(-w, w + 1), repeat=g)]


def _canonical_translate(marking, basis):
    """Translate a cell so its lex-smallest vertex lies in the half-open
    fundamental box of the period lattice; returns the shift applied."""
    v = min(marking)
    coords = linalg.solve(linalg.transpose(basis), v)
    z = tuple(floor(x) for x in coords)
    shift = linalg.mat_vec(linalg.transpose(basis), z)
    return tuple(-x for x in shift)


def _cells_meeting(env, pts, box_lo, box_hi, box_eqs, box_ins, g):
    """Envelope cells whose polytope meets the box, with ambient planes."""
    out = []
    for cell in env.cells:
        mpts = [pts[i] for i in cell.marking]
        if any(
            max(m[i] for m in mpts) < box_lo[i] or min(m[i] for m in mpts) > box_hi[i]
            for i in range(g)
        ):
            continue
        ceqs, cins = _hrep_of_rational(mpts)
        verts = vertices_of_hrep(ceqs + box_eqs, cins + box_ins, g)
        if verts:
            out.append((tuple(sorted(mpts)), env.ambient_plane(cell)))
    return out


def _empty_paraboloid_ok(marking, plane, pts2, heights2) -> bool:
    """Exact supporting-hyperplane check: marked lifts on the plane, all
    other lifts strictly above.  Plane is ambient (A, A0, D); heights may
    be arbitrary rationals."""
    a, a0, den = plane
    marked = set(marking)
    for m, h in zip(pts2, heights2):
        s = h * den - linalg.dot(a, m) - a0
        if m in marked:
            if s != 0:
                return False
        elif s <= 0:
            return False
    return True


def _tail_certificate(q: QuadraticForm, qinv, plane, radius) -> bool:
    """Certify q(m) strictly above the ambient plane for ||m||_inf >= radius.

    Completing the square, q(m) - a.m - b = (m - m*)^T q (m - m*) - c* with
    m* = q^{-1} a / 2 and c* = m*^T q m* + b, so it suffices that the
    ellipsoid {(x - m*)^T q (x - m*) <= c*} lies strictly inside the
    sup-norm ball of the given radius: its half-width along coordinate i is
    sqrt(c* (q^{-1})_ii), compared squared to stay rational."""
    g = q.g
    aa, a0, den = plane
    a = [Fraction(x, den) for x in aa]
    b = Fraction(a0, den)
    mstar = [sum(qinv[i][j] * a[j] for j in range(g)) / 2 for i in range(g)]
    cstar = q(mstar) + b
    if cstar < 0:
        return True
    for i in range(g):
        gap = Fraction(radius) - abs(mstar[i])
        if gap <= 0 or gap * gap <= cstar * qinv[i][i]:
            return False
    return True


def _fraction_matrix_inverse(rows):
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    red, piv = linalg.rref(aug)
    if piv != list(range(n)):
        raise InputError("matrix not invertible")
    return [row[n:] for row in red]


def delaunay(q: QuadraticForm, max_window: int = MAX_WINDOW) -> PeriodicSubdivision:
    """The Z^g-periodic decomposition induced by the height m -> q(m).

    Requires a positive definite form (semidefinite heights need
    semi_delaunay with an explicit period lattice and residue function).
    Every output cell carries an exact empty-paraboloid certificate.
    """
    if not q.is_positive_definite():
        raise InputError("delaunay requires a positive definite form")
    g = q.g
    if g > 4:
        raise SizeLimitError("delaunay capped at g <= 4")
    identity = linalg.identity(g)
    box = [tuple(z) for z in itertools.product((0, 1), repeat=g)]
    box_eqs, box_ins = _hrep_of_rational(box)
    region = ((-2,) * g, (3,) * g)  # unit box plus margin; seed cell is at 0
    prev_keys = None
    w = 2
    history = []
    while w <= max_window:
        pts = _window_points(g, w)
        heights = [q(m) for m in pts]
        env = _hull.lower_envelope(pts, heights, region_bbox=region)
        cells = _cells_meeting(env, pts, (0,) * g, (1,) * g, box_eqs, box_ins, g)
        keys = frozenset(m for m, _ in cells)
        history.append((w, len(keys)))
        if keys == prev_keys:
            pts2 = _window_points(g, 2 * w)
            hs2 = [q(m) for m in pts2]
            qinv = _fraction_matrix_inverse(q.matrix)
            certified = all(
                _empty_paraboloid_ok(m, plane, pts2, hs2)
                and _tail_certificate(q, qinv, plane, 2 * w + 1)
                for m, plane in cells
            )
            if certified:
                return _build_periodic(g, identity, cells)
        prev_keys = keys
        w *= 2
    raise DivergenceError(
        "window doubling did not stabilize", {"history": history, "max_window": max_window}
    )


def _build_periodic(g, basis, cells) -> PeriodicSubdivision:
    reps = {}
    for marking, _plane in cells:
        t = _canonical_translate(marking, basis)
        shifted = tuple(sorted(linalg.vec_add(m, t) for m in marking))
        if shifted in reps:
            continue
        verts = LatticePolytope.from_points(shifted).vertices
        reps[shifted] = PeriodicCell(verts, shifted)
    return PeriodicSubdivision(g, basis, tuple(reps.values()))


def semi_delaunay(q: QuadraticForm, r: ResidueFunction, max_window: int = MAX_WINDOW) -> PeriodicSubdivision:
    """Periodic decomposition for the height q(m) + r(m mod period lattice).

    The height must be proper: window doubling that fails to stabilize
    (flat or semidefinite heights whose envelope has unbounded faces) is
    reported as an error rather than truncated output.
    """
    if q.g != r.g:
        raise InputError("form and residue function dimension mismatch")
    g = q.g
    if g > 4:
        raise SizeLimitError("semi_delaunay capped at g <= 4")
    basis = r.period_basis
    corners = [
        linalg.mat_vec(linalg.transpose(basis), z)
        for z in itertools.product((0, 1), repeat=g)
    ]
    box_eqs, box_ins = _hrep_of_rational(corners)
    extent = max(abs(x) for c in corners for x in c) if corners else 1
    box_lo = tuple(min(c[i] for c in corners) for i in range(g))
    box_hi = tuple(max(c[i] for c in corners) for i in range(g))
    region = (
        tuple(x - 2 * extent for x in box_lo),
        tuple(x + 2 * extent for x in box_hi),
    )
    prev_keys = None
    w = max(2, 2 * extent)
    history = []
    while w <= max_window:
        pts = _window_points(g, w)
        try:
            heights = [q(m) + r(m) for m in pts]
            env = _hull.lower_envelope(pts, heights, region_bbox=region)
        except SizeLimitError as exc:
            raise InputError(f"improper height: {exc}") from exc
        cells = _cells_meeting(env, pts, box_lo, box_hi, box_eqs, box_ins, g)
        keys = frozenset(m for m, _ in cells)
        history.append((w, len(keys)))
        if keys == prev_keys:
            pts2 = _window_points(g, 2 * w)
            hs2 = [q(m) + r(m) for m in pts2]
            if all(
                _empty_paraboloid_ok(m, plane, pts2, hs2)
                for m, plane in cells
            ):
                return _build_periodic(g, basis, cells)
        prev_keys = keys
        w *= 2
    raise DivergenceError(
        "improper height: window doubling did not stabilize",
        {"history": history, "max_window": max_window},
    )


# ---------------------------------------------------------------------------
# Voronoi cones


def same_voronoi_cone(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    """Whether two positive definite forms induce the same decomposition."""
    if q1.g != q2.g:
        raise InputError("forms of different dimension")
    return delaunay(q1) == delaunay(q2)


def voronoi_cone_dimension(d: PeriodicSubdivision, q: QuadraticForm) -> int:
    """Dimension of the linear span of the cone of forms inducing d.

    Solves the equality system only (lifted marked points of every cell
    coplanar); the generating form q certifies that the strict inequalities
    can be met, and must itself satisfy the equalities.
    """
    g = d.g
    if q.g != g:
        raise InputError("certificate form dimension mismatch")
    nvars = g * (g + 1) // 2
    pairs = [(i, j) for i in range(g) for j in range(i, g)]

    def quad_coords(m):
        return [
            Fraction(m[i] * m[j] if i == j else 2 * m[i] * m[j]) for i, j in pairs
        ]

    rows = []
    for cell in d.cells:
        pts = [tuple(int(x) for x in p) for p in cell.marking]
        base = _affine_basis_points(pts, g)
        mat = [[Fraction(1)] * len(base)] + [
            [Fraction(b[k]) for b in base] for k in range(g)
        ]
        for m in pts:
            if m in base:
                continue
            mu = linalg.solve(mat, [Fraction(1)] + [Fraction(x) for x in m])
            row = quad_coords(m)
            for b, cf in zip(base, mu):
                bc = quad_coords(b)
                row = [x - cf * y for x, y in zip(row, bc)]
            rows.append(row)
    qvec = [q.matrix[i][j] for i, j in pairs]
    for row in rows:
        if sum(a * b for a, b in zip(row, qvec)) != 0:
            raise InputError("certificate form does not induce this decomposition")
    return nvars - (linalg.rank(rows) if rows else 0)


def _affine_basis_points(pts, e):
    chosen = [pts[0]]
    rows: list = []
    for p in pts[1:]:
        if len(chosen) == e + 1:
            break
        dvec = linalg.vec_sub(p, chosen[0])
        if linalg.rank(rows + [list(dvec)]) > len(rows):
            rows.append(list(dvec))
            chosen.append(p)
    return chosen


# ---------------------------------------------------------------------------
# GL(g, Z) search


class GLSearchResult(NamedTuple):
    found: bool
    witness: tuple | None  # unimodular matrix U with U . d1 = d2

    def __bool__(self):
        return self.found


def transform_subdivision(u, d: PeriodicSubdivision) -> PeriodicSubdivision:
    """Apply a unimodular matrix to every cell and renormalize."""
    g = d.g
    basis = tuple(
        tuple(linalg.mat_vec(u, row)) for row in d.period_basis
    )
    cells = []
    for c in d.cells:
        marking = [tuple(linalg.mat_vec(u, m)) for m in c.marking]
        t = _canonical_translate(sorted(marking), basis)
        marking = tuple(sorted(linalg.vec_add(m, t) for m in marking))
        verts = LatticePolytope.from_points(marking).vertices
        cells.append(PeriodicCell(verts, marking))
    return PeriodicSubdivision(g, basis, cells)


def _gl_generators(g):
    gens = []
    for i in range(g):
        for j in range(g):
            if i != j:
                for s in (1, -1):
                    m = [list(r) for r in linalg.identity(g)]
                    m[i][j] = s
                    gens.append(tuple(tuple(r) for r in m))
    for i in range(g):
        m = [list(r) for r in linalg.identity(g)]
        m[i][i] = -1
        gens.append(tuple(tuple(r) for r in m))
    for i in range(g):
        for j in range(i + 1, g):
            m = [list(r) for r in linalg.identity(g)]
            m[i][i] = m[j][j] = 0
            m[i][j] = m[j][i] = 1
            gens.append(tuple(tuple(r) for r in m))
    return gens


def gl_equivalent(d1: PeriodicSubdivision, d2: PeriodicSubdivision, word_bound: int = 4) -> GLSearchResult:
    """Bounded search for U in GL(g,Z) with U . d1 = d2.

    Words up to ``word_bound`` in the standard generators (transvections,
    permutations, sign flips) are tried after fast invariant rejection.
    NOT_FOUND (found=False) is explicitly inconclusive.
    """
    if d1.g != d2.g:
        raise InputError("subdivisions of different dimension")
    if d1.cell_invariants() != d2.cell_invariants():
        return GLSearchResult(False, None)
    g = d1.g
    ident = linalg.identity(g)
    if transform_subdivision(ident, d1) == d2:
        return GLSearchResult(True, ident)
    gens = _gl_generators(g)
    seen = {ident}
    frontier = [ident]
    for _ in range(word_bound):
        new = []
        for u in frontier:
            for gmat in gens:
                w = linalg.mat_mul(gmat, u)
                if w in seen:
                    continue
                seen.add(w)
                if transform_subdivision(w, d1) == d2:
                    return GLSearchResult(True, w)
                new.append(w)
        frontier = new
    return GLSearchResult(False, None)


# ---------------------------------------------------------------------------
# hyperplane arrangements and cographic subdivisions


class HyperplaneSubdivision(NamedTuple):
    subdivision: PeriodicSubdivision
    vertices_integral: bool
    unimodularity: UnimodularityResult


def _generic_unit_point(vectors, r):
    """A point of (0,1)^r with every l_i . x non-integral.

    Coordinates 1/p_k for distinct primes p_k larger than any entry: then
    sum l_k / p_k is integral only if p_k divides l_k for all k, i.e. l = 0.
    """
    maxabs = max(abs(x) for v in vectors for x in v)
    primes = []
    n = max(maxabs, 1)
    while len(primes) < r:
        n += 1
        if all(n % d for d in range(2, int(n**0.5) + 1)):
            primes.append(n)
    x0 = tuple(Fraction(1, p) for p in primes)
    assert all(linalg.dot(v, x0).denominator != 1 for v in vectors)
    return x0


def hyperplane_subdivision(l: VectorSystem, region_margin: Fraction = Fraction(1, 2)) -> HyperplaneSubdivision:
    """Cells of the periodic arrangement {l_i(x) = n, n in Z}, modulo Z^r.

    Zero vectors impose nothing and duplicate directions (up to sign) cut
    the same hyperplane families, so both are dropped before the search.
    The breadth-first search over address vectors explores every cell whose
    bounding box meets a margin around the unit box, which covers all orbit
    representatives; each cell is normalized so its smallest vertex lies in
    [0,1)^r.  The result reports whether all cell vertices are lattice
    points, which happens exactly when the system is unimodular; the exact
    minor test is returned alongside for cross-checking.
    """
    r = l.r
    vectors = []
    seen_dirs = set()
    for v in l.vectors:
        vv = tuple(int(x) for x in v)
        if not any(vv):
            continue
        canon = vv if next(x for x in vv if x) > 0 else tuple(-x for x in vv)
        if canon not in seen_dirs:
            seen_dirs.add(canon)
            vectors.append(canon)
    if not vectors or linalg.rank(vectors) < r:
        raise InputError("vectors do not span R^r")
    x0 = _generic_unit_point(vectors, r)
    nvec = len(vectors)

    # per independent family subset: adjugate and determinant, so cell
    # vertices come out of integer matrix-vector products
    tables = []
    for subset in itertools.combinations(range(nvec), r):
        mat = [vectors[i] for i in subset]
        det = linalg.det(mat)
        if det == 0:
            continue
        inv = _fraction_matrix_inverse(mat)
        adj = [[int(inv[i][j] * det) for j in range(r)] for i in range(r)]
        # family values at candidate vertices: l_j . x = (l_j . adj) levels / det
        fam = [
            [sum(vectors[j][k] * adj[k][c] for k in range(r)) for c in range(r)]
            for j in range(nvec)
        ]
        tables.append((subset, adj, det, fam))

    sides_list = list(itertools.product((0, 1), repeat=r))
    point_cache: dict = {}  # (table idx, levels) -> (family values, point key)

    def cell_vertices(addr):
        seen_pts = set()
        out = []
        for ti, (subset, adj, det, fam) in enumerate(tables):
            for sides in sides_list:
                levels = tuple(addr[i] + sd for i, sd in zip(subset, sides))
                ck = (ti, levels)
                cached = point_cache.get(ck)
                if cached is None:
                    vals = tuple(
                        sum(f * lv for f, lv in zip(fam[j], levels))
                        for j in range(nvec)
                    )
                    y = tuple(
                        sum(adj[k][c] * levels[c] for c in range(r)) for k in range(r)
                    )
                    g = abs(det)
                    for v in y:
                        g = gcd(g, v)
                    sgn = 1 if det > 0 else -1
                    key = (tuple(sgn * v // g for v in y), sgn * det // g)
                    cached = (vals, key)
                    point_cache[ck] = cached
                vals, key = cached
                ok = True
                if det > 0:
                    for j in range(nvec):
                        if not addr[j] * det <= vals[j] <= (addr[j] + 1) * det:
                            ok = False
                            break
                else:
                    for j in range(nvec):
                        if not (addr[j] + 1) * det <= vals[j] <= addr[j] * det:
                            ok = False
                            break
                if ok and key not in seen_pts:
                    seen_pts.add(key)
                    out.append(key)
        return sorted(out)  # (integer numerators, positive denominator) pairs

    def cell_rows(address):
        ins = []
        for v, a in zip(vectors, address):
            ins.append((v, Fraction(a)))
            ins.append((tuple(-x for x in v), Fraction(-(a + 1))))
        return ins

    lo2 = -2 * region_margin  # margin bounds times 2, for cross-multiplied tests
    hi2 = 2 + 2 * region_margin

    def bbox_meets_margin(verts):
        # verts are (nums, den) with den > 0; compare 2*num against den*bound
        for i in range(r):
            if all(2 * num[i] < lo2 * den for num, den in verts):
                return False
            if all(2 * num[i] > hi2 * den for num, den in verts):
                return False
        return True

    def int_dim(verts):
        base_num, base_den = verts[0]
        diffs = [
            tuple(n * base_den - b * den for n, b in zip(num, base_num))
            for num, den in verts[1:]
        ]
        return linalg.int_rank(diffs)

    start = tuple(floor(linalg.dot(v, x0)) for v in vectors)
    seen = {start}
    queue = [start]
    cells = []
    while queue:
        addr = queue.pop()
        verts = cell_vertices(addr)
        if len(verts) <= r or int_dim(verts) < r:
            continue
        if not bbox_meets_margin(verts):
            continue
        cells.append((addr, verts))
        # neighbors across facets: constraints tight on an (r-1)-dimensional
        # set; only facets meeting the margin need crossing (any two cells
        # meeting a convex region are linked through facets inside it)
        for i0, v0 in enumerate(vectors):
            for side in (0, 1):
                lvl = addr[i0] + side
                tight = [
                    (num, den)
                    for num, den in verts
                    if sum(a * b for a, b in zip(v0, num)) == lvl * den
                ]
                if len(tight) < r or not bbox_meets_margin(tight):
                    continue
                if int_dim(tight) != r - 1:
                    continue
                delta = [0] * len(vectors)
                for i, v in enumerate(vectors):
                    vals = {
                        (sum(a * b for a, b in zip(v, num)), den) for num, den in tight
                    }
                    byval = {Fraction(x, den) for x, den in vals}
                    if len(byval) == 1:
                        val = byval.pop()
                        if val == addr[i]:
                            delta[i] = -1
                        elif val == addr[i] + 1:
                            delta[i] = 1
                nb = tuple(a + dl for a, dl in zip(addr, delta))
                if nb != addr and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)

    basis = linalg.identity(r)
    reps = {}
    for addr, iverts in cells:
        verts = [tuple(Fraction(x, den) for x in num) for num, den in iverts]
        vmin = min(verts)
        t = tuple(-floor(x) for x in vmin)
        shifted = tuple(sorted(tuple(_num(x + dx) for x, dx in zip(v, t)) for v in verts))
        if shifted in reps:
            continue
        marking = _integral_points_of(shifted, r)
        reps[shifted] = PeriodicCell(shifted, marking)
    sub = PeriodicSubdivision(r, basis, tuple(reps.values()))
    integral = all(
        Fraction(x).denominator == 1 for c in sub.cells for v in c.vertices for x in v
    )
    return HyperplaneSubdivision(sub, integral, is_unimodular_system(l))


def _integral_points_of(verts, r):
    from math import ceil

    eqs, ins = _hrep_of_rational(verts)
    lo = [ceil(min(Fraction(v[i]) for v in verts)) for i in range(r)]
    hi = [floor(max(Fraction(v[i]) for v in verts)) for i in range(r)]
    out = []
    for p in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if all(linalg.dot(n, p) == c for n, c in eqs) and all(
            linalg.dot(n, p) >= c for n, c in ins
        ):
            out.append(tuple(p))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# graphs and cographic subdivisions


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple  # oriented pairs (u, v); loops and parallel edges allowed

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InputError(f"edge ({u},{v}) out of range")


def cycle_space_basis(g: Graph):
    """Fundamental cycles of a breadth-first spanning forest.

    Rows are indexed by the non-tree edges in input order; entries are the
    +-1 coefficients of the cycle in the edge space.  The row count is
    |E| - |V| + (number of components).
    """
    n = g.num_vertices
    edges = list(g.edges)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for idx, (u, v) in enumerate(edges):
        if u != v:
            adj[u].append((idx, v))
            adj[v].append((idx, u))
    parent_edge = [-1] * n
    parent = [-1] * n
    visited = [False] * n
    tree = set()
    for root in range(n):
        if visited[root]:
            continue
        visited[root] = True
        queue = [root]
        while queue:
            x = queue.pop(0)
            for idx, y in adj[x]:
                if not visited[y]:
                    visited[y] = True
                    parent[y] = x
                    parent_edge[y] = idx
                    tree.add(idx)
                    queue.append(y)

    def path_to_root(v):
        out = []
        while parent[v] != -1:
            out.append((parent_edge[v], v))
            v = parent[v]
        return out, v

    rows = []
    for idx, (u, v) in enumerate(edges):
        if idx in tree:
            continue
        row = [0] * len(edges)
        row[idx] = 1
        if u != v:
            pu, ru = path_to_root(u)
            pv, rv = path_to_root(v)
            su = {e for e, _ in pu}
            sv = {e for e, _ in pv}
            # walk v up towards the root, then down to u, skipping the common tail
            for e, child in pv:
                if e in su:
                    continue
                row[e] += 1 if edges[e][0] == child else -1
            for e, child in pu:
                if e in sv:
                    continue
                row[e] += 1 if edges[e][1] == child else -1
        rows.append(tuple(row))
    comps = sum(1 for v in range(n) if parent[v] == -1)
    assert len(rows) == len(edges) - n + comps
    return rows


def cographic_subdivision(g: Graph) -> PeriodicSubdivision:
    """Intersection of the cycle space with the unit-cube grid of the edge
    space, written in cycle-basis coordinates (periodic under the integer
    cycle lattice).  Vertices are asserted to be lattice points; this is
    the unimodularity of the cographic system.
    """
    basis = cycle_space_basis(g)
    c = len(basis)
    if c == 0:
        raise InputError("graph has no cycles")
    columns = [tuple(row[e] for row in basis) for e in range(len(g.edges))]
    result = hyperplane_subdivision(VectorSystem(c, tuple(columns)))
    if not result.vertices_integral:
        raise AssertionError("cographic subdivision produced non-integral vertices")
    sub = result.subdivision
    cells = [
        PeriodicCell(tuple(tuple(int(x) for x in v) for v in cell.vertices), cell.marking)
        for cell in sub.cells
    ]
    return PeriodicSubdivision(c, sub.period_basis, cells)
