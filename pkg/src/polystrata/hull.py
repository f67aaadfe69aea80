"""Exact convex hulls and lower envelopes.

Two engines live here:

* :func:`convex_hull` enumerates supporting hyperplanes through point
  subsets (brute force).  At desk scale this is fast, totally robust
  against degeneracies, and easy to trust.  Facet inequalities are written
  ``normal . x >= offset`` with the *inner* normal, so every input point
  satisfies them; a facet belongs to the lower envelope exactly when the
  inner normal has positive last coordinate (the hull lies above the
  facet's hyperplane in the lift direction).

* :func:`lower_envelope` computes only the bottom side of a lifted point
  set, by pivoting a supporting hyperplane across ridges (gift wrapping
  restricted to the envelope).  This is the engine behind every regular
  subdivision and periodic decomposition; it is much faster than hulling
  the whole lifted set and handles flat (non-simplicial) cells natively:
  a cell's marking is the full set of points lying on its hyperplane,
  never an arbitrary triangulation of them.

All arithmetic is integer after denominator clearing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .errors import InputError, SizeLimitError
from . import linalg

MAX_HULL_SUBSETS = 3_000_000
MAX_CELL_POINTS = 64


def _to_fractions(points):
    return [tuple(Fraction(x) for x in p) for p in points]


@dataclass(frozen=True)
class AffineSpan:
    """Affine hull of a point set: x = origin + sum_k y_k basis[k]."""

    origin: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]  # rows, linearly independent
    dim: int

    def coords(self, p) -> tuple[Fraction, ...] | None:
        """Intrinsic coordinates of p, or None if p is off the hull."""
        if self.dim == 0:
            return () if tuple(Fraction(x) for x in p) == self.origin else None
        diff = [Fraction(a) - b for a, b in zip(p, self.origin)]
        sol = linalg.solve(linalg.transpose(self.basis), diff)
        if sol is None:
            return None
        # solve() gives one solution; verify (basis rows independent => unique)
        back = [sum(sol[k] * self.basis[k][i] for k in range(self.dim)) for i in range(len(diff))]
        return sol if back == diff else None


def affine_span(points) -> AffineSpan:
    pts = _to_fractions(points)
    origin = pts[0]
    basis: list[tuple[Fraction, ...]] = []
    rows: list[list[Fraction]] = []
    for p in pts[1:]:
        d = tuple(a - b for a, b in zip(p, origin))
        if linalg.rank(rows + [list(d)]) > len(basis):
            basis.append(d)
            rows.append(list(d))
    return AffineSpan(origin, tuple(basis), len(basis))


def _intrinsic_integer(points, span: AffineSpan):
    """Intrinsic coordinates of all points, scaled to integers.

    Returns (integer coordinate tuples, scale L) with y_int = L * y.
    """
    if span.dim == 0:
        return [() for _ in points], 1
    coords = []
    for p in points:
        c = span.coords(p)
        if c is None:
            raise InputError("point outside affine span")
        coords.append(c)
    scale = 1
    for c in coords:
        for x in c:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    return [tuple(int(x * scale) for x in c) for c in coords], scale


# ---------------------------------------------------------------------------
# brute-force facet enumeration


def _hyperplane_normal(diffs, dim: int):
    """Primitive integer normal of the hyperplane spanned by the difference
    vectors, or None when they are dependent.  Dimensions up to 3 use the
    closed perpendicular/cross-product forms."""
    if dim == 1:
        return (1,)
    if dim == 2:
        (dx, dy), = diffs
        if dx == 0 and dy == 0:
            return None
        return linalg.primitive((-dy, dx))
    if dim == 3:
        (a1, a2, a3), (b1, b2, b3) = diffs
        cr = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
        if cr == (0, 0, 0):
            return None
        return linalg.primitive(cr)
    ker = linalg.nullspace(diffs)
    if len(ker) != 1:
        return None
    nvec, _ = linalg.clear_denominators(ker[0])
    return linalg.primitive(nvec)


def _facets_int(pts: list[tuple[int, ...]], dim: int):
    """Facets of conv(pts) for a full-dimensional integer configuration.

    Returns a sorted list of (normal, offset, incidence) with primitive
    integer inner normals: normal . x >= offset for every point, equality
    exactly on the incidence set.
    """
    n = len(pts)
    if dim == 0:
        return []
    if comb(n, dim) > MAX_HULL_SUBSETS:
        raise SizeLimitError(f"hull enumeration too large: C({n},{dim})")
    import itertools

    seen: dict[tuple, list[int]] = {}
    for subset in itertools.combinations(range(n), dim):
        base = pts[subset[0]]
        diffs = [linalg.vec_sub(pts[j], base) for j in subset[1:]]
        nvec = _hyperplane_normal(diffs, dim)
        if nvec is None:
            continue  # affinely dependent subset
        c = linalg.dot(nvec, base)
        lo = hi = False
        for p in pts:
            s = linalg.dot(nvec, p) - c
            if s > 0:
                hi = True
            elif s < 0:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if lo:  # orient inward
            nvec = tuple(-x for x in nvec)
            c = -c
        key = (nvec, c)
        if key not in seen:
            seen[key] = [j for j in range(n) if linalg.dot(nvec, pts[j]) == c]
    return sorted(
        ((nv, c, tuple(inc)) for (nv, c), inc in seen.items()),
        key=lambda f: (f[2], f[0]),
    )


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]  # primitive integer inner normal, ambient coordinates
    offset: int
    incidence: tuple[int, ...]


@dataclass(frozen=True)
class HullResult:
    ambient_dim: int
    dim: int  # intrinsic dimension of the hull
    facets: tuple[Facet, ...]
    lower_facets: tuple[int, ...]  # indices of facets with normal[-1] > 0
    affine_equations: tuple[tuple[tuple[int, ...], int], ...]  # n.x == c on the hull


def convex_hull(points) -> HullResult:
    """Exact H-representation of conv(points) with facet/vertex incidences.

    Degenerate input is handled by computing inside the affine hull and
    reporting its dimension; facet normals are lifted back to ambient
    coordinates (they are inner normals: normal . x >= offset holds for
    every input point).
    """
    pts = _to_fractions(points)
    if not pts:
        raise InputError("empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise InputError("points of mixed dimension")
    if d > 8:
        raise SizeLimitError("ambient dimension > 8")
    span = affine_span(pts)
    e = span.dim

    # equations cutting out the affine hull
    equations = []
    diffs = [linalg.vec_sub(p, span.origin) for p in pts]
    for w in linalg.nullspace(diffs) if e < d else []:
        wi, _ = linalg.clear_denominators(w)
        wi = linalg.primitive(wi)
        c = linalg.dot(wi, span.origin)
        num, den = c.numerator, c.denominator
        equations.append((tuple(x * den for x in wi), num))

    if e == 0:
        return HullResult(d, 0, (), (), tuple(equations))

    if e == d:
        ints, scale = [], 1
        for p in pts:
            for x in p:
                scale = scale * x.denominator // gcd(scale, x.denominator)
        ints = [tuple(int(x * scale) for x in p) for p in pts]
        raw = _facets_int(ints, e)
        facets = []
        for nvec, c, inc in raw:
            # undo coordinate scaling: n.(scale*x) >= c  <=>  (scale*n).x >= c... keep primitive
            nv, off = _canonical_ineq(nvec, Fraction(c, scale))
            facets.append(Facet(nv, off, inc))
    else:
        ints, scale = _intrinsic_integer(pts, span)
        raw = _facets_int(ints, e)
        facets = []
        bbt = [
            [linalg.dot(bi, bj) for bj in span.basis] for bi in span.basis
        ]
        for nvec, c, inc in raw:
            # ambient normal N with (basis) N = n: take N = basis^T z, (B B^T) z = n
            z = linalg.solve(bbt, [Fraction(x) for x in nvec])
            amb = tuple(
                sum(z[k] * span.basis[k][i] for k in range(e)) for i in range(d)
            )
            off = linalg.dot(amb, span.origin) + Fraction(c, scale)
            nv, offi = _canonical_ineq_frac(amb, off)
            facets.append(Facet(nv, offi, inc))

    facets.sort(key=lambda f: (f.incidence, f.normal))
    lower = tuple(i for i, f in enumerate(facets) if f.normal[-1] > 0)
    return HullResult(d, e, tuple(facets), lower, tuple(equations))


def _canonical_ineq(nvec: tuple[int, ...], off: Fraction) -> tuple[tuple[int, ...], int]:
    den = off.denominator
    nv = tuple(x * den for x in nvec)
    c = off.numerator
    g = gcd(linalg.vec_gcd(nv), abs(c))
    if g > 1:
        nv = tuple(x // g for x in nv)
        c //= g
    return nv, c


def _canonical_ineq_frac(nvec, off: Fraction) -> tuple[tuple[int, ...], int]:
    ints, den = linalg.clear_denominators(list(nvec) + [off])
    nv, c = ints[:-1], ints[-1]
    g = gcd(linalg.vec_gcd(nv), abs(c))
    if g > 1:
        nv = tuple(x // g for x in nv)
        c //= g
    return tuple(nv), c


# ---------------------------------------------------------------------------
# lower envelopes by ridge pivoting


@dataclass(frozen=True)
class EnvelopeCell:
    marking: tuple[int, ...]  # labels on the supporting hyperplane
    plane: tuple[tuple[int, ...], int, int]  # z = (a.y + a0)/den in scaled intrinsic coords


@dataclass(frozen=True)
class Envelope:
    cells: tuple[EnvelopeCell, ...]
    span: AffineSpan
    coord_scale: int  # y_int = coord_scale * intrinsic coordinate
    height_scale: int  # H = height_scale * height

    def support_sign(self, cell: EnvelopeCell, point, height) -> int:
        """Sign of (lifted point - cell hyperplane): 0 on, +1 above, -1 below."""
        y = self.span.coords(point)
        if y is None:
            raise InputError("point outside the configuration's affine hull")
        yi = tuple(x * self.coord_scale for x in y)
        a, a0, den = cell.plane
        lhs = Fraction(height) * self.height_scale * den
        rhs = sum(ai * yi_k for ai, yi_k in zip(a, yi)) + a0
        # equality phrased over a common denominator, still exact
        diff = lhs - rhs
        return (diff > 0) - (diff < 0)

    def ambient_plane(self, cell: EnvelopeCell) -> tuple[tuple[int, ...], int, int]:
        """Cell hyperplane as integers in ambient coordinates.

        Returns (A, A0, D) with D > 0 such that a lifted point (x, h) is on
        the plane iff h*D == A.x + A0 and above iff >.  Only available for
        configurations that are full-dimensional in their ambient space.
        """
        d = len(self.span.origin)
        if self.span.dim != d:
            raise InputError("ambient plane requires a full-dimensional configuration")
        a, a0, den = cell.plane
        w = linalg.solve(self.span.basis, a)  # B w = a
        lw = [self.coord_scale * x for x in w]
        a0_amb = Fraction(a0) - sum(x * o for x, o in zip(lw, self.span.origin))
        ints, scale = linalg.clear_denominators(list(lw) + [a0_amb])
        return tuple(ints[:-1]), ints[-1], den * self.height_scale * scale


def _normalize_plane(a, a0, den):
    g = gcd(gcd(linalg.vec_gcd(a), abs(a0)), den)
    if g > 1:
        a = tuple(x // g for x in a)
        a0 //= g
        den //= g
    return a, a0, den


def _pivot_ridge(pts, hts, plane, w, w0):
    """Rotate a supporting plane around the ridge hyperplane (w, w0).

    The current cell lies on the side w.p >= w0; points strictly beyond the
    ridge constrain the rotation.  Returns (new plane, new marking) or None
    when the ridge is on the boundary of the configuration.
    """
    a, a0, den = plane
    best_num = best_den = None  # t* = best_num / best_den, both > 0
    for j, p in enumerate(pts):
        c = w0 - linalg.dot(w, p)
        if c <= 0:
            continue
        slack = hts[j] * den - linalg.dot(a, p) - a0  # >= 0, scaled by den
        num, dn = slack, den * c
        if best_num is None or num * best_den < best_num * dn:
            best_num, best_den = num, dn
    if best_num is None:
        return None
    g = gcd(best_num, best_den)
    pnum, pden = best_num // g, best_den // g
    a2 = tuple(pden * x - pnum * den * wk for x, wk in zip(a, w))
    a02 = pden * a0 + pnum * den * w0
    den2 = pden * den
    a2, a02, den2 = _normalize_plane(a2, a02, den2)
    marking = tuple(
        j for j, p in enumerate(pts) if hts[j] * den2 == linalg.dot(a2, p) + a02
    )
    return (a2, a02, den2), marking


def _ridge_normals(cell_pts, dim):
    """Inner facet normals of conv(cell_pts); (w, w0) with cell side w.x >= w0."""
    if len(cell_pts) > MAX_CELL_POINTS:
        raise SizeLimitError(
            f"envelope cell with {len(cell_pts)} marked points exceeds the"
            f" per-cell limit {MAX_CELL_POINTS} (improper height?)"
        )
    return [(f[0], f[1]) for f in _facets_int(list(cell_pts), dim)]


def lower_envelope(points, heights, region_bbox=None) -> Envelope:
    """Cells of the regular subdivision induced by the given heights.

    Works inside the affine hull of the configuration.  Each cell is
    reported with its full marking: every label whose lifted point lies on
    the cell's supporting hyperplane.  A height function that is affine on
    the whole configuration yields the single trivial cell.

    ``region_bbox`` = (lo, hi) prunes the breadth-first search to cells
    whose bounding box meets the region (in the original coordinates).
    The cells meeting any convex subregion are facet-connected inside the
    region, so pruning with a margin around the subregion of interest is
    exact for those cells; the seed cell (at the height minimum) must meet
    the region.
    """
    pts_q = _to_fractions(points)
    n = len(pts_q)
    if n == 0:
        raise InputError("empty configuration")
    span = affine_span(pts_q)
    e = span.dim
    ints, cscale = _intrinsic_integer(pts_q, span)
    hfr = [Fraction(h) for h in heights]
    if len(hfr) != n:
        raise InputError("height count != point count")
    hscale = 1
    for h in hfr:
        hscale = hscale * h.denominator // gcd(hscale, h.denominator)
    hts = [int(h * hscale) for h in hfr]

    if e == 0:
        cell = EnvelopeCell((0,), ((), hts[0], 1))
        return Envelope((cell,), span, cscale, hscale)

    # seed: start from the horizontal plane through the lowest lift and
    # rotate until the tight set is full-dimensional
    hmin = min(hts)
    plane = ((0,) * e, hmin, 1)
    marking = tuple(j for j in range(n) if hts[j] == hmin)
    while True:
        mpts = [ints[j] for j in marking]
        diffs = [linalg.vec_sub(p, mpts[0]) for p in mpts[1:]]
        ker = linalg.nullspace(diffs) if diffs else linalg.nullspace([[Fraction(0)] * e])
        if not ker:
            break  # tight set spans: full-dimensional cell
        w, _ = linalg.clear_denominators(ker[0])
        w = linalg.primitive(w)
        w0 = linalg.dot(w, mpts[0])
        step = _pivot_ridge(ints, hts, plane, w, w0)
        if step is None:
            w = tuple(-x for x in w)
            w0 = -w0
            step = _pivot_ridge(ints, hts, plane, w, w0)
        if step is None:
            raise InputError("configuration is not full-dimensional in its span")
        plane, marking = step

    in_region = None
    if region_bbox is not None:
        lo, hi = region_bbox

        def in_region(mark):
            d = len(pts_q[0])
            for i in range(d):
                coords = [pts_q[j][i] for j in mark]
                if max(coords) < lo[i] or min(coords) > hi[i]:
                    return False
            return True

    cells: dict[tuple[int, ...], tuple] = {}
    queue = [(marking, plane)]
    cells[marking] = plane
    while queue:
        cmark, cplane = queue.pop()
        cpts = [ints[j] for j in cmark]
        for w, w0 in _ridge_normals(cpts, e):
            step = _pivot_ridge(ints, hts, cplane, w, w0)
            if step is None:
                continue  # boundary ridge
            nplane, nmark = step
            if nmark not in cells and (in_region is None or in_region(nmark)):
                cells[nmark] = nplane
                queue.append((nmark, nplane))

    ordered = sorted(cells.items())
    return Envelope(
        tuple(EnvelopeCell(m, p) for m, p in ordered), span, cscale, hscale
    )
