"""Regular subdivisions, secondary polytopes and stratum comparison.

A marked subdivision of a point configuration is a list of cells, each a
label subset C_i; the cell's polytope is Conv(C_i).  Markings matter: the
same tiling with different marked points is a different subdivision (the
marking records which points sit on the lower envelope), and this is what
makes the face count of the secondary polytope come out right.

Internally a configuration is rescaled to integer coordinates and mapped
to the lattice of its affine hull, where all volumes are normalized
(integer) volumes.  Heights stay exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import InputError, SizeLimitError
from . import complexes as _cx
from . import hull as _hull
from . import linalg
from . import lp as _lp
from .polytopes import LatticePolytope, PointConfiguration, in_convex_hull, meet_properly

MAX_POINTS = 12
MAX_DIM = 3


def _as_heights(config: PointConfiguration, h) -> tuple[Fraction, ...]:
    if isinstance(h, dict):
        missing = [i for i in range(config.n) if i not in h and str(i) not in h]
        if missing:
            raise InputError(f"height function undefined on labels {missing}")
        return tuple(Fraction(h.get(i, h.get(str(i)))) for i in range(config.n))
    vals = tuple(Fraction(x) for x in h)
    if len(vals) != config.n:
        raise InputError("height count != point count")
    return vals


class MarkedSubdivision:
    """Cells (label subsets) of a subdivision of a point configuration."""

    __slots__ = ("config", "cells")

    def __init__(self, config: PointConfiguration, cells):
        cleaned = []
        for c in cells:
            cc = tuple(sorted(set(int(x) for x in c)))
            if not cc or cc[0] < 0 or cc[-1] >= config.n:
                raise InputError(f"cell {c} has labels outside the configuration")
            cleaned.append(cc)
        if len(set(cleaned)) != len(cleaned):
            raise InputError("duplicate cells")
        self.config = config
        self.cells = tuple(sorted(cleaned))

    def __eq__(self, other):
        return (
            isinstance(other, MarkedSubdivision)
            and self.config == other.config
            and self.cells == other.cells
        )

    def __hash__(self):
        return hash((self.config, self.cells))

    def __repr__(self):
        return f"MarkedSubdivision({list(self.cells)})"


class _Geometry:
    """Scaled-integer model of a configuration, shared by the subdivision ops.

    ``lat`` holds every point in coordinates of the lattice of the affine
    hull (full-dimensional), where normalized volumes are determinants.
    """

    def __init__(self, config: PointConfiguration):
        self.config = config
        pts = config.points
        scale = 1
        for p in pts:
            for x in p:
                scale = scale * x.denominator // gcd(scale, x.denominator)
        self.ints = [tuple(int(x * scale) for x in p) for p in pts]
        self.scale = scale
        diffs = [linalg.vec_sub(p, self.ints[0]) for p in self.ints[1:]]
        self.basis = linalg.saturate(diffs) if diffs else []
        self.e = len(self.basis)
        if self.e:
            bt = linalg.transpose(self.basis)
            self.lat = []
            for p in self.ints:
                sol = linalg.solve(bt, linalg.vec_sub(p, self.ints[0]))
                self.lat.append(tuple(int(x) for x in sol))
        else:
            self.lat = [() for _ in pts]
        self._cellpoly: dict[tuple, LatticePolytope] = {}
        self._compat: dict[tuple, bool] = {}
        self._hull_facets = (
            _hull._facets_int(self.lat, self.e) if self.e else []
        )
        self.total_volume = self._hull_volume()

    def _hull_volume(self) -> int:
        if self.e == 0:
            return 1
        uniq = sorted(set(self.lat))
        if len(uniq) == self.e + 1:
            return abs(linalg.det([linalg.vec_sub(p, uniq[0]) for p in uniq[1:]]))
        from .polytopes import _nvol_int

        return _nvol_int(uniq, self.e)

    def cell_polytope(self, cell: tuple[int, ...]) -> LatticePolytope:
        if cell not in self._cellpoly:
            self._cellpoly[cell] = LatticePolytope.from_points(
                [self.lat[i] for i in cell]
            )
        return self._cellpoly[cell]

    def cell_volume(self, cell: tuple[int, ...]) -> int:
        if len(cell) == self.e + 1:
            pts = [self.lat[i] for i in cell]
            return abs(linalg.det([linalg.vec_sub(p, pts[0]) for p in pts[1:]]))
        return self.cell_polytope(cell).normalized_volume()

    def marked_on_face(self, cell, face_vertices) -> tuple[int, ...]:
        return tuple(
            i for i in cell if in_convex_hull(self.lat[i], face_vertices)
        )

    def compatible(self, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        """Face-to-face intersection plus matching markings on the shared face."""
        key = (a, b) if a <= b else (b, a)
        if key not in self._compat:
            pa, pb = self.cell_polytope(a), self.cell_polytope(b)
            ok, common = meet_properly(pa, pb)
            if ok and common:
                ok = self.marked_on_face(a, common) == self.marked_on_face(b, common)
            self._compat[key] = ok
        return self._compat[key]

    def on_boundary(self, face_pts) -> bool:
        return any(
            all(linalg.dot(n, p) == c for p in face_pts)
            for n, c, _ in self._hull_facets
        )

    def generic_interior_point(self):
        """A rational point interior to the hull and off every hyperplane
        spanned by configuration points (so it lies in the open interior of
        any candidate cell that contains it)."""
        hyperplanes = set()
        for subset in itertools.combinations(range(len(self.lat)), self.e):
            base = self.lat[subset[0]]
            diffs = [linalg.vec_sub(self.lat[j], base) for j in subset[1:]]
            ker = (
                linalg.nullspace(diffs)
                if diffs
                else linalg.nullspace([[Fraction(0)] * self.e])
            )
            if len(ker) != 1:
                continue
            nvec, _ = linalg.clear_denominators(ker[0])
            nvec = linalg.primitive(nvec)
            hyperplanes.add((nvec, linalg.dot(nvec, base)))
        centroid = tuple(
            Fraction(sum(p[i] for p in self.lat), len(self.lat))
            for i in range(self.e)
        )
        denom = 2
        while True:
            cand = tuple(
                c + Fraction(1, denom ** (i + 1)) for i, c in enumerate(centroid)
            )
            ok = all(linalg.dot(n, cand) != c for n, c in hyperplanes) and all(
                linalg.dot(n, cand) > c for n, c, _ in self._hull_facets
            )
            if ok:
                return cand
            denom += 1


def _geometry(config: PointConfiguration) -> _Geometry:
    return _Geometry(config)


# ---------------------------------------------------------------------------
# regular subdivisions from heights


def regular_subdivision(config: PointConfiguration, heights) -> MarkedSubdivision:
    """Projection of the lower envelope of the lifted configuration.

    Cell markings contain every label whose lift lies ON the cell's
    supporting hyperplane, not merely the cell's vertices.
    """
    hs = _as_heights(config, heights)
    env = _hull.lower_envelope(config.points, hs)
    return MarkedSubdivision(config, [c.marking for c in env.cells])


def validate_subdivision(sub: MarkedSubdivision) -> None:
    """Raise InputError unless the cells form a marked subdivision.

    Checks full-dimensional cells, pairwise face-to-face intersections with
    consistent markings, and that cell volumes add up to the hull volume.
    """
    geo = _geometry(sub.config)
    for c in sub.cells:
        if geo.cell_polytope(c).dim != geo.e:
            raise InputError(f"cell {c} is not full-dimensional")
    for a, b in itertools.combinations(sub.cells, 2):
        if not geo.compatible(a, b):
            raise InputError(f"cells {a} and {b} do not meet properly")
    vol = sum(geo.cell_volume(c) for c in sub.cells)
    if vol != geo.total_volume:
        raise InputError(
            f"cell volumes sum to {vol}, expected {geo.total_volume} (not a covering)"
        )


class RegularityResult(NamedTuple):
    regular: bool
    certificate: tuple[Fraction, ...] | None

    def __bool__(self):
        return self.regular


def is_regular(sub: MarkedSubdivision) -> RegularityResult:
    """Decide regularity by exact LP on the heights.

    Unknowns are the heights h(m).  For each cell, the affine function
    interpolating h on the cell's marking must agree with h on the marking
    (equalities) and lie strictly below h everywhere else (strict rows).
    The gauge freedom (heights differing by an affine function) is removed
    by pinning h to zero on an affine basis of the configuration.  The
    returned certificate exactly reproduces the subdivision.
    """
    validate_subdivision(sub)
    geo = _geometry(sub.config)
    n = sub.config.n
    e = geo.e

    def affine_coeffs(basis_labels, x):
        rows = [[Fraction(1)] * len(basis_labels)]
        for k in range(e):
            rows.append([Fraction(geo.lat[b][k]) for b in basis_labels])
        rhs = [Fraction(1)] + [Fraction(x[k]) for k in range(e)]
        return linalg.solve(rows, rhs)

    constraints = []
    # gauge: pin an affine basis of the whole configuration to height zero
    pin = _greedy_affine_basis(geo.lat, e)
    for b in pin:
        row = [Fraction(0)] * n
        row[b] = Fraction(1)
        constraints.append(_lp.Constraint(tuple(row), _lp.EQ, Fraction(0)))
    for cell in sub.cells:
        cell_basis = _greedy_affine_basis([geo.lat[i] for i in cell], e)
        basis_labels = [cell[k] for k in cell_basis]
        for m in range(n):
            if m in basis_labels:
                continue
            mu = affine_coeffs(basis_labels, geo.lat[m])
            row = [Fraction(0)] * n
            row[m] = Fraction(1)
            for lbl, cf in zip(basis_labels, mu):
                row[lbl] -= cf
            if m in cell:
                constraints.append(_lp.Constraint(tuple(row), _lp.EQ, Fraction(0)))
            else:
                constraints.append(
                    _lp.Constraint(tuple(row), _lp.GE, Fraction(0), strict=True)
                )
    res = _lp.lp_feasible(_lp.LPProblem(n, tuple(constraints)))
    if res is _lp.INFEASIBLE:
        return RegularityResult(False, None)
    if regular_subdivision(sub.config, res).cells != sub.cells:
        raise AssertionError("certificate does not reproduce the subdivision")
    return RegularityResult(True, tuple(res))


def _greedy_affine_basis(points, e) -> list[int]:
    """Indices of an affinely independent subset of size e+1, greedy by index."""
    chosen = [0]
    rows: list = []
    for i in range(1, len(points)):
        if len(chosen) == e + 1:
            break
        d = linalg.vec_sub(points[i], points[chosen[0]])
        if linalg.rank(rows + [list(d)]) > len(rows):
            rows.append(list(d))
            chosen.append(i)
    if len(chosen) != e + 1:
        raise InputError("points do not affinely span")
    return chosen


# ---------------------------------------------------------------------------
# GKZ vectors


def gkz_vector(sub: MarkedSubdivision) -> tuple[int, ...]:
    """Per label, the total normalized volume of incident cells.

    Requires a triangulation: every cell's marking is exactly the vertex
    set of a simplex.
    """
    geo = _geometry(sub.config)
    entries = [0] * sub.config.n
    for cell in sub.cells:
        if len(cell) != geo.e + 1:
            raise InputError(f"cell {cell} is not a simplex with vertex marking")
        vol = geo.cell_volume(cell)
        if vol == 0:
            raise InputError(f"cell {cell} is degenerate")
        for m in cell:
            entries[m] += vol
    return tuple(entries)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _check_limits(config: PointConfiguration, max_points=MAX_POINTS):
    if config.n > max_points:
        raise SizeLimitError(f"configuration has {config.n} points; limit {max_points}")
    if config.dim > MAX_DIM:
        raise SizeLimitError(f"configuration dimension {config.dim} exceeds {MAX_DIM}")


class _Candidate(NamedTuple):
    labels: tuple[int, ...]
    volume: int
    facets: tuple  # (key, is_boundary) per facet of the cell
    contains_seed: bool


def _candidate_from_labels(geo: _Geometry, labels, seed_point) -> _Candidate | None:
    poly = geo.cell_polytope(labels)
    if poly.dim != geo.e:
        return None
    facets = []
    for fverts in poly.facet_faces():
        marked = geo.marked_on_face(labels, fverts)
        key = (tuple(sorted(fverts)), marked)
        facets.append((key, geo.on_boundary(fverts)))
    return _Candidate(
        tuple(labels),
        geo.cell_volume(labels),
        tuple(facets),
        in_convex_hull(seed_point, [geo.lat[i] for i in labels]),
    )


def _ridge_search(geo: _Geometry, candidates: list[_Candidate]):
    """Enumerate all subdivisions buildable from the given candidate cells.

    Anchored at a generic interior point: the first cell must contain it,
    each later cell is forced at the smallest open ridge, so every
    subdivision is produced exactly once.
    """
    by_facet: dict[tuple, list[int]] = {}
    for idx, cand in enumerate(candidates):
        for key, boundary in cand.facets:
            if not boundary:
                by_facet.setdefault(key, []).append(idx)
    total = geo.total_volume
    results = []

    def extend(chosen: list[int], open_ridges: set, vol: int):
        if vol == total and not open_ridges:
            results.append(tuple(sorted(candidates[i].labels for i in chosen)))
            return
        if vol >= total or not open_ridges:
            return
        ridge = min(open_ridges)
        for idx in by_facet.get(ridge, ()):
            if idx in chosen:
                continue
            cand = candidates[idx]
            if vol + cand.volume > total:
                continue
            if all(geo.compatible(cand.labels, candidates[j].labels) for j in chosen):
                newopen = set(open_ridges)
                for key, boundary in cand.facets:
                    if boundary:
                        continue
                    if key in newopen:
                        newopen.remove(key)
                    else:
                        newopen.add(key)
                extend(chosen + [idx], newopen, vol + cand.volume)

    for idx, cand in enumerate(candidates):
        if not cand.contains_seed:
            continue
        openset = {key for key, boundary in cand.facets if not boundary}
        extend([idx], openset, cand.volume)
    return sorted(results)


def enumerate_triangulations(config: PointConfiguration) -> list[MarkedSubdivision]:
    """All triangulations (cells = simplices marked by their vertices)."""
    _check_limits(config)
    geo = _geometry(config)
    if geo.e == 0:
        return [MarkedSubdivision(config, [(0,)])]
    seed = geo.generic_interior_point()
    candidates = []
    for labels in itertools.combinations(range(config.n), geo.e + 1):
        pts = [geo.lat[i] for i in labels]
        if linalg.det([linalg.vec_sub(p, pts[0]) for p in pts[1:]]) == 0:
            continue
        cand = _candidate_from_labels(geo, labels, seed)
        if cand is not None:
            candidates.append(cand)
    return [MarkedSubdivision(config, cells) for cells in _ridge_search(geo, candidates)]


def enumerate_all_subdivisions(config: PointConfiguration):
    """All marked subdivisions, each flagged by exact LP regularity.

    Returns a list of (subdivision, regular: bool) in canonical order.
    """
    _check_limits(config, max_points=10)
    geo = _geometry(config)
    if geo.e == 0:
        return [(MarkedSubdivision(config, [(0,)]), True)]
    seed = geo.generic_interior_point()
    candidates = []
    for size in range(geo.e + 1, config.n + 1):
        for labels in itertools.combinations(range(config.n), size):
            cand = _candidate_from_labels(geo, labels, seed)
            if cand is not None:
                candidates.append(cand)
    out = []
    for cells in _ridge_search(geo, candidates):
        sub = MarkedSubdivision(config, cells)
        out.append((sub, bool(is_regular(sub))))
    return out


# ---------------------------------------------------------------------------
# secondary polytope


def secondary_polytope(config: PointConfiguration) -> LatticePolytope:
    """Convex hull of the GKZ vectors of all triangulations."""
    tris = enumerate_triangulations(config)
    vectors = sorted({gkz_vector(t) for t in tris})
    poly = LatticePolytope.from_points(vectors)
    expected = config.n - config.dim - 1
    if poly.dim != expected:
        raise AssertionError(
            f"secondary polytope dimension {poly.dim} != n-d-1 = {expected}"
        )
    return poly


def enumerate_regular_subdivisions(config: PointConfiguration):
    """One marked subdivision per nonempty face of the secondary polytope.

    Each face is recovered by summing the inner normals of the facets
    through it and using that vector as a height function; the sum lies in
    the relative interior of the face's normal cone, so the face and the
    subdivision correspond.  Returns (subdivision, face_dim) pairs.
    """
    poly = secondary_polytope(config)
    h = poly.hull()
    out = {}
    for dim, faces in sorted(poly.faces().items()):
        for fverts in faces:
            vertset = set(fverts)
            w = [0] * config.n
            for facet in h.facets:
                inc_pts = {poly.vertices[i] for i in facet.incidence}
                if vertset <= inc_pts:
                    w = [a + b for a, b in zip(w, facet.normal)]
            sub = regular_subdivision(config, w)
            key = sub.cells
            if key in out:
                raise AssertionError("two faces produced the same subdivision")
            out[key] = (sub, dim)
    return sorted(out.values(), key=lambda t: (-t[1], t[0].cells))


# ---------------------------------------------------------------------------
# stratum dimensions


@dataclass(frozen=True)
class StratumReport:
    """Codimension of the secondary face vs. gluing cohomology of the stratum.

    ``extra_component_flag`` is True when the gluing moduli dimension
    exceeds the dimension of the corresponding secondary stratum, which
    guarantees components beyond the main one.
    """

    secondary_codim: int
    gluing_h1_rank: int
    extra_component_flag: bool


def marked_complex_of(sub: MarkedSubdivision) -> _cx.MarkedComplex:
    """The subdivision's cells as a validated marked polytopal complex."""
    if not sub.config.is_integral():
        raise InputError("gluing cohomology needs an integral configuration")
    pts = [tuple(int(x) for x in p) for p in sub.config.points]
    cells = [LatticePolytope.from_points([pts[i] for i in c]) for c in sub.cells]
    pc = _cx.validate_complex(cells)
    if set(pc.maximal) != set(range(len(cells))):
        raise InputError("subdivision cells are not all maximal")
    markings = {
        idx: tuple(sorted(pts[i] for i in cell)) for idx, cell in enumerate(sub.cells)
    }
    return _cx.marked_complex(pc, markings)


def stratum_dimensions(config: PointConfiguration, sub: MarkedSubdivision) -> StratumReport:
    """Compare the secondary-face dimension with the pair-gluing moduli.

    The codimension of the subdivision's secondary face equals the
    dimension of {heights affine on every marked cell} minus the global
    affine gauge; the gluing side is h1 of the marked section complex.
    """
    reg = is_regular(sub)
    if not reg:
        raise InputError("subdivision is not regular; it has no secondary stratum")
    geo = _geometry(config)
    n, e = config.n, geo.e
    rows = []
    for cell in sub.cells:
        cell_basis = _greedy_affine_basis([geo.lat[i] for i in cell], e)
        basis_labels = [cell[k] for k in cell_basis]
        mat = [[Fraction(1)] * len(basis_labels)] + [
            [Fraction(geo.lat[b][k]) for b in basis_labels] for k in range(e)
        ]
        for m in cell:
            if m in basis_labels:
                continue
            mu = linalg.solve(mat, [Fraction(1)] + [Fraction(geo.lat[m][k]) for k in range(e)])
            row = [Fraction(0)] * n
            row[m] = Fraction(1)
            for lbl, cf in zip(basis_labels, mu):
                row[lbl] -= cf
            rows.append(row)
    normal_span_dim = n - (linalg.rank(rows) if rows else 0)
    codim = normal_span_dim - (e + 1)
    h1 = _cx.pair_cohomology(marked_complex_of(sub)).h1_rank
    face_dim = (n - e - 1) - codim
    return StratumReport(codim, h1, h1 > face_dim)
