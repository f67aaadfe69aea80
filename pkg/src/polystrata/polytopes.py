"""Lattice polytopes and point configurations.

``LatticePolytope`` stores exactly its hull vertices (integer vectors);
H-representations, faces, lattice points and normalized volumes are
computed on demand and cached.  Geometry that other modules share —
polytope intersection, common-face tests, exact volumes — lives here.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .errors import InputError, SizeLimitError
from . import hull as _hull
from . import linalg
from .lp import in_convex_hull


class LatticePolytope:
    """Convex hull of finitely many integer points, stored by its vertices."""

    __slots__ = ("vertices", "_hull", "_faces", "_nvol", "_points")

    def __init__(self, vertices):
        vs = []
        for v in vertices:
            iv = tuple(int(x) for x in v)
            if any(Fraction(x) != ix for x, ix in zip(v, iv)):
                raise InputError(f"non-integral vertex {v}")
            vs.append(iv)
        if not vs:
            raise InputError("polytope needs at least one vertex")
        if len({len(v) for v in vs}) != 1:
            raise InputError("vertices of mixed dimension")
        self.vertices = tuple(sorted(set(vs)))
        self._hull = None
        self._faces = None
        self._nvol = None
        self._points = None

    @classmethod
    def from_points(cls, points) -> "LatticePolytope":
        """Hull of arbitrary integer points; redundant points are removed."""
        pts = [tuple(int(x) for x in p) for p in points]
        for p, q in zip(points, pts):
            if any(Fraction(a) != b for a, b in zip(p, q)):
                raise InputError(f"non-integral point {p}")
        uniq = sorted(set(pts))
        verts = [p for p in uniq if not in_convex_hull(p, [q for q in uniq if q != p])]
        return cls(verts)

    # -- basic geometry ----------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return self.hull().dim

    def hull(self) -> _hull.HullResult:
        if self._hull is None:
            self._hull = _hull.convex_hull(self.vertices)
        return self._hull

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({list(self.vertices)})"

    def translate(self, t) -> "LatticePolytope":
        return LatticePolytope([linalg.vec_add(v, t) for v in self.vertices])

    def scale(self, k: int) -> "LatticePolytope":
        return LatticePolytope([linalg.vec_scale(k, v) for v in self.vertices])

    def contains(self, point) -> bool:
        h = self.hull()
        p = tuple(Fraction(x) for x in point)
        for n, c in h.affine_equations:
            if linalg.dot(n, p) != c:
                return False
        return all(linalg.dot(f.normal, p) >= f.offset for f in h.facets)

    # -- lattice data --------------------------------------------------------

    def lattice_points(self) -> tuple[tuple[int, ...], ...]:
        """All integer points of the polytope (bounding box + H-rep filter)."""
        if self._points is not None:
            return self._points
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        if any((b - a) > 40 for a, b in zip(lo, hi)):
            raise SizeLimitError("bounding box too large for lattice point enumeration")
        pts = [
            p
            for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
            if self.contains(p)
        ]
        self._points = tuple(sorted(pts))
        return self._points

    def lattice_coordinates(self):
        """Vertices in coordinates of the lattice of their affine hull.

        Returns (origin, lattice basis rows, vertex coordinate tuples); the
        polytope is full-dimensional in these coordinates.
        """
        v0 = self.vertices[0]
        diffs = [linalg.vec_sub(v, v0) for v in self.vertices[1:]]
        basis = linalg.saturate(diffs) if diffs else []
        coords = [tuple()] * len(self.vertices) if not basis else None
        if basis:
            coords = []
            for v in self.vertices:
                sol = linalg.solve(linalg.transpose(basis), linalg.vec_sub(v, v0))
                coords.append(tuple(int(x) for x in sol))
        return v0, basis, coords

    def normalized_volume(self) -> int:
        """dim! times the volume relative to the lattice of the affine hull."""
        if self._nvol is None:
            _, basis, coords = self.lattice_coordinates()
            e = len(basis)
            if e == 0:
                self._nvol = 1 if self.dim == 0 else 0
            elif len(coords) == e + 1:
                edges = [linalg.vec_sub(c, coords[0]) for c in coords[1:]]
                self._nvol = abs(linalg.det(edges))
            else:
                self._nvol = _nvol_int(coords, e)
        return self._nvol

    # -- faces -------------------------------------------------------------

    def faces(self) -> dict[int, list[tuple[tuple[int, ...], ...]]]:
        """All nonempty faces, keyed by dimension; each face is its vertex tuple."""
        if self._faces is not None:
            return self._faces
        h = self.hull()
        everything = frozenset(range(len(self.vertices)))
        closure = {everything}
        frontier = [frozenset(f.incidence) for f in h.facets]
        closure.update(frontier)
        changed = True
        while changed:
            changed = False
            new = set()
            for a in closure:
                for b in frontier:
                    c = a & b
                    if c and c not in closure and c not in new:
                        new.add(c)
            if new:
                closure.update(new)
                changed = True
        byd: dict[int, list] = {}
        for s in closure:
            vs = tuple(sorted(self.vertices[i] for i in s))
            d = _hull.affine_span(vs).dim
            byd.setdefault(d, []).append(vs)
        for d in byd:
            byd[d].sort()
        self._faces = byd
        return byd

    def facet_faces(self) -> list[tuple[tuple[int, ...], ...]]:
        return self.faces().get(self.dim - 1, []) if self.dim > 0 else []

    def edges(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [tuple(f) for f in self.faces().get(1, [])]


def _nvol_int(coords: list[tuple[int, ...]], e: int) -> int:
    """Normalized volume of a full-dimensional integer polytope by apex-cone recursion."""
    if e == 0:
        return 1
    if e == 1:
        vals = [c[0] for c in coords]
        return max(vals) - min(vals)
    facets = _hull._facets_int(coords, e)
    apex = coords[0]
    total = 0
    for n, c, inc in facets:
        dist = abs(linalg.dot(n, apex) - c)
        if dist == 0:
            continue
        fpts = [coords[i] for i in inc]
        # recurse inside the facet's own lattice
        diffs = [linalg.vec_sub(p, fpts[0]) for p in fpts[1:]]
        basis = linalg.saturate(diffs)
        sub = []
        for p in fpts:
            sol = linalg.solve(linalg.transpose(basis), linalg.vec_sub(p, fpts[0]))
            sub.append(tuple(int(x) for x in sol))
        total += dist * _nvol_int(sub, e - 1)
    return total


# ---------------------------------------------------------------------------
# rational polytopes (intersections, clipped pieces)


def vertices_of_hrep(equalities, inequalities, dim: int):
    """Vertices of {x : E x = e, A x >= b} by basic-solution enumeration.

    Rows are cleared to integers and candidate basic points solved by
    Cramer's rule, so the inner loop is pure integer arithmetic.  Intended
    for small bounded systems (callers intersect with boxes or bounded
    polytopes).
    """

    def int_row(n, c):
        ints, _ = linalg.clear_denominators(list(n) + [c])
        return tuple(ints[:-1]), ints[-1]

    eqs = [int_row(n, c) for n, c in equalities]
    ins = [int_row(n, c) for n, c in inequalities]
    eq_rank = linalg.rank([n for n, _ in eqs]) if eqs else 0
    need = dim - eq_rank
    if need < 0:
        return []
    from math import comb

    if len(ins) >= need and comb(len(ins), need) > 2_000_000:
        raise SizeLimitError(f"vertex enumeration too large: C({len(ins)},{need})")
    # a maximal independent subset of the equalities, once
    base_rows: list = []
    base_rhs: list = []
    for n, c in eqs:
        if linalg.rank(base_rows + [list(n)]) > len(base_rows):
            base_rows.append(list(n))
            base_rhs.append(c)
    verts = set()
    seen_supports = set()
    for subset in itertools.combinations(range(len(ins)), need):
        rows = base_rows + [list(ins[i][0]) for i in subset]
        rhs = base_rhs + [ins[i][1] for i in subset]
        d = linalg.det(rows)
        if d == 0:
            continue
        # Cramer: x_j = det(rows with column j replaced by rhs) / d
        nums = []
        for j in range(dim):
            col = [r[j] for r in rows]
            for r, b in zip(rows, rhs):
                r[j] = b
            nums.append(linalg.det(rows))
            for r, v in zip(rows, col):
                r[j] = v
        key = (tuple(nums), d)
        if key in seen_supports:
            continue
        seen_supports.add(key)
        ok = True
        if d < 0:
            nums = [-x for x in nums]
            d = -d
        for n, c in ins:
            if sum(a * b for a, b in zip(n, nums)) < c * d:
                ok = False
                break
        if ok:
            for n, c in eqs:
                if sum(a * b for a, b in zip(n, nums)) != c * d:
                    ok = False
                    break
        if ok:
            verts.add(tuple(Fraction(x, d) for x in nums))
    return sorted(verts)


def hrep_of(p: LatticePolytope):
    h = p.hull()
    eqs = list(h.affine_equations)
    ins = [(f.normal, Fraction(f.offset)) for f in h.facets]
    return eqs, ins


def intersect_polytopes(p: LatticePolytope, q: LatticePolytope):
    """Vertices (rational) of the intersection polytope; [] when disjoint."""
    d = p.ambient_dim
    if d != q.ambient_dim:
        raise InputError("ambient dimension mismatch")
    # cheap bounding-box reject
    for i in range(d):
        if min(v[i] for v in p.vertices) > max(v[i] for v in q.vertices):
            return []
        if min(v[i] for v in q.vertices) > max(v[i] for v in p.vertices):
            return []
    ep, ip = hrep_of(p)
    eq_, iq = hrep_of(q)
    return vertices_of_hrep(ep + eq_, ip + iq, d)


def _minimal_face_vertices(p: LatticePolytope, pts) -> list[tuple[int, ...]]:
    """Vertices of the smallest face of p containing all the given points."""
    h = p.hull()
    tight = [
        f
        for f in h.facets
        if all(linalg.dot(f.normal, x) == f.offset for x in pts)
    ]
    return [
        v
        for v in p.vertices
        if all(linalg.dot(f.normal, v) == f.offset for f in tight)
    ]


def meet_properly(p: LatticePolytope, q: LatticePolytope) -> tuple[bool, list]:
    """Whether two polytopes intersect in a common face of each.

    Returns (ok, intersection vertices).  An empty intersection is proper.
    """
    common = intersect_polytopes(p, q)
    if not common:
        return True, []
    for a, b in ((p, q), (q, p)):
        for v in _minimal_face_vertices(a, common):
            if not b.contains(v):
                return False, common
    return True, common


def euclidean_volume(vertices) -> Fraction:
    """Exact Euclidean volume of conv(vertices) in its ambient space.

    Zero when the hull is not full-dimensional.
    """
    vs = sorted({tuple(Fraction(x) for x in v) for v in vertices})
    if not vs:
        return Fraction(0)
    d = len(vs[0])
    span = _hull.affine_span(vs)
    if span.dim < d:
        return Fraction(0)
    scale = 1
    for v in vs:
        for x in v:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [tuple(int(x * scale) for x in v) for v in vs]
    total = Fraction(0)
    for simplex in _triangulate_int(ints, d):
        edges = [linalg.vec_sub(v, simplex[0]) for v in simplex[1:]]
        total += abs(linalg.det(edges))
    vol = Fraction(total, _factorial(d))
    return vol / Fraction(scale) ** d


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _triangulate_int(pts: list[tuple[int, ...]], e: int):
    """Simplices (vertex lists) triangulating a full-dimensional hull."""
    if e == 1:
        vals = sorted(p[0] for p in pts)
        return [[(vals[0],), (vals[-1],)]]
    apex = pts[0]
    out = []
    for n, c, inc in _hull._facets_int(pts, e):
        if linalg.dot(n, apex) == c:
            continue
        fpts = [pts[i] for i in inc]
        diffs = [linalg.vec_sub(p, fpts[0]) for p in fpts[1:]]
        basis = linalg.saturate(diffs)
        sub = []
        for p in fpts:
            sol = linalg.solve(linalg.transpose(basis), linalg.vec_sub(p, fpts[0]))
            sub.append(tuple(int(x) for x in sol))
        for facet_simplex in _triangulate_int(sub, e - 1):
            lifted = [fpts[sub.index(s)] for s in facet_simplex]
            out.append([apex] + lifted)
    return out


# ---------------------------------------------------------------------------
# point configurations


class PointConfiguration:
    """Ordered, labelled, repetition-free list of rational points."""

    __slots__ = ("points", "_span")

    def __init__(self, points):
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if not pts:
            raise InputError("configuration needs at least one point")
        if len({len(p) for p in pts}) != 1:
            raise InputError("points of mixed dimension")
        if len(set(pts)) != len(pts):
            raise InputError("repeated points are not supported")
        self.points = tuple(pts)
        self._span = None

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    @property
    def dim(self) -> int:
        if self._span is None:
            self._span = _hull.affine_span(self.points)
        return self._span.dim

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for p in self.points for x in p)

    def __eq__(self, other):
        return isinstance(other, PointConfiguration) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointConfiguration({[tuple(map(str, p)) for p in self.points]})"


def hypersimplex(r: int, n: int) -> LatticePolytope:
    """Hull of the 0/1 vectors in Z^n with coordinate sum r."""
    if not 0 < r < n:
        raise InputError("hypersimplex requires 0 < r < n")
    verts = []
    for ones in itertools.combinations(range(n), r):
        v = [0] * n
        for i in ones:
            v[i] = 1
        verts.append(tuple(v))
    return LatticePolytope(verts)
