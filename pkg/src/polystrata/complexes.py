"""Polytopal complexes, lattice sheaves and gluing cohomology.

A complex is a finite set of lattice polytopes in Z^g meeting pairwise in
common faces; the reference map is the identity embedding, so the
multiplicity-free flag is automatic.  To every cell F we attach the
saturated lattice generated by the degree-one lifts (1, m) of its lattice
points.  The Cech complex over the closed cover by maximal cells, with one
lattice summand per nonempty intersection, is realized on the chain level;
its homology (ranks and invariant factors, via Smith normal form) encodes
the torus-valued cohomology that classifies gluings: the coefficient group
k* is divisible, hence an injective Z-module, so Hom(-, k*) is exact and
H^p of the torus complex is Hom(H_p of the lattice complex, k*).  Ranks
give torus dimensions and invariant factors give the finite parts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from . import linalg
from .polytopes import LatticePolytope, intersect_polytopes, meet_properly, vertices_of_hrep, hrep_of


class ComplexViolation(InputError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class PolytopalComplex:
    """Validated collection of lattice polytopes meeting face-to-face."""

    __slots__ = ("g", "cells", "maximal", "multiplicity_free")

    def __init__(self, g, cells, maximal):
        self.g = g
        self.cells = cells
        self.maximal = maximal
        self.multiplicity_free = True  # identity reference map

    @property
    def dim(self) -> int:
        return max(self.cells[i].dim for i in self.maximal)

    def maximal_cells(self) -> list[LatticePolytope]:
        return [self.cells[i] for i in self.maximal]

    def face_poset(self) -> dict[int, list[tuple]]:
        """All faces of all cells, keyed by dimension (vertex tuples)."""
        byd: dict[int, set] = {}
        for c in self.cells:
            for d, faces in c.faces().items():
                byd.setdefault(d, set()).update(faces)
        return {d: sorted(v) for d, v in sorted(byd.items())}


def validate_complex(cells) -> PolytopalComplex:
    """Check pairwise face-to-face intersections and build the complex.

    ``cells`` is a list of vertex lists (or LatticePolytopes).  A pair whose
    intersection is not a common face raises ComplexViolation naming the
    offending cells.
    """
    polys = [c if isinstance(c, LatticePolytope) else LatticePolytope(c) for c in cells]
    if not polys:
        raise InputError("complex needs at least one cell")
    g = polys[0].ambient_dim
    if any(p.ambient_dim != g for p in polys):
        raise InputError("cells of mixed ambient dimension")
    if len(set(polys)) != len(polys):
        raise ComplexViolation("duplicate cells in complex")
    for i, j in itertools.combinations(range(len(polys)), 2):
        ok, _ = meet_properly(polys[i], polys[j])
        if not ok:
            raise ComplexViolation(
                f"cells {i} and {j} do not intersect in a common face", (i, j)
            )
    contained = set()
    for i, j in itertools.permutations(range(len(polys)), 2):
        if i != j and all(polys[j].contains(v) for v in polys[i].vertices):
            contained.add(i)
    maximal = tuple(i for i in range(len(polys)) if i not in contained)
    return PolytopalComplex(g, tuple(polys), maximal)


def tilde_lattice(cell: LatticePolytope) -> list[tuple[int, ...]]:
    """Basis of the saturation of the lattice generated by {(1, m) : m in cell}."""
    gens = [(1,) + tuple(m) for m in cell.lattice_points()]
    return linalg.saturate(gens)


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...]  # invariant factors > 1


@dataclass(frozen=True)
class ChainComplex:
    """L_0 <- L_1 <- ... with integer boundary matrices (column convention)."""

    ranks: tuple[int, ...]
    boundaries: tuple  # boundaries[k]: matrix of d_{k+1}: L_{k+1} -> L_k

    def __post_init__(self):
        for k, m in enumerate(self.boundaries):
            rows = len(m)
            cols = len(m[0]) if rows else 0
            if rows != self.ranks[k] or (rows and cols != self.ranks[k + 1]):
                raise InputError("boundary matrix shape mismatch")
        for k in range(len(self.boundaries) - 1):
            a, b = self.boundaries[k], self.boundaries[k + 1]
            if a and b and any(
                any(x != 0 for x in row) for row in linalg.mat_mul(a, b)
            ):
                raise InputError("d o d != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * r for p, r in enumerate(self.ranks))


def homology(chain: ChainComplex) -> list[HomologyGroup]:
    """Homology ranks and torsion of an integer chain complex via SNF."""
    n = len(chain.ranks)
    bd_rank = [0] * (n + 1)
    bd_factors: list[tuple[int, ...]] = [()] * (n + 1)
    for k, m in enumerate(chain.boundaries):
        if m and m[0]:
            res = linalg.smith_normal_form(m)
            bd_rank[k + 1] = res.rank
            bd_factors[k + 1] = res.invariant_factors
    out = []
    for p in range(n):
        rank_p = chain.ranks[p] - bd_rank[p] - bd_rank[p + 1]
        torsion = tuple(f for f in bd_factors[p + 1] if f > 1)
        out.append(HomologyGroup(rank_p, torsion))
    return out


@dataclass(frozen=True)
class CechComplex:
    """The lattice realization of the closed-cover Cech complex."""

    chain: ChainComplex
    levels: tuple  # levels[p] = tuple of (subset of maximal ids, face polytope, lattice basis)


def _common_face(polys) -> LatticePolytope | None:
    eqs, ins = [], []
    for p in polys:
        e, i = hrep_of(p)
        eqs.extend(e)
        ins.extend(i)
    verts = vertices_of_hrep(eqs, ins, polys[0].ambient_dim)
    if not verts:
        return None
    for v in verts:
        if any(Fraction(x).denominator != 1 for x in v):
            raise InputError("cell intersection has non-integral vertices")
    return LatticePolytope(verts)


def _coords_in_basis(vectors, basis) -> list[tuple[int, ...]]:
    out = []
    bt = linalg.transpose(basis)
    for v in vectors:
        sol = linalg.solve(bt, v)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise InputError("lattice inclusion failed (not a sublattice?)")
        out.append(tuple(int(x) for x in sol))
    return out


def cech_lattice_complex(pc: PolytopalComplex) -> CechComplex:
    """L_p = direct sum of cell lattices of (p+1)-fold intersections of maximal cells.

    Boundary maps are alternating sums of lattice inclusions, with signs by
    the position of the omitted index in the sorted subset.
    """
    maximal = sorted(pc.maximal)
    levels = []
    p = 0
    while True:
        level = []
        for subset in itertools.combinations(maximal, p + 1):
            polys = [pc.cells[i] for i in subset]
            face = polys[0] if len(polys) == 1 else _common_face(polys)
            if face is None:
                continue
            level.append((subset, face, tuple(tilde_lattice(face))))
        if not level:
            break
        levels.append(tuple(level))
        p += 1

    ranks = tuple(sum(len(basis) for _, _, basis in lvl) for lvl in levels)
    offsets = []
    for lvl in levels:
        off, acc = {}, 0
        for subset, _, basis in lvl:
            off[subset] = acc
            acc += len(basis)
        offsets.append(off)

    boundaries = []
    for p in range(1, len(levels)):
        rows = ranks[p - 1]
        cols = ranks[p]
        m = [[0] * cols for _ in range(rows)]
        index_prev = {subset: basis for subset, _, basis in levels[p - 1]}
        for subset, _, basis in levels[p]:
            col0 = offsets[p][subset]
            for j in range(len(subset)):
                target = subset[:j] + subset[j + 1 :]
                tbasis = index_prev[target]
                row0 = offsets[p - 1][target]
                coords = _coords_in_basis(basis, tbasis)
                sign = (-1) ** j
                for c, coord in enumerate(coords):
                    for r, x in enumerate(coord):
                        m[row0 + r][col0 + c] += sign * x
        boundaries.append(tuple(tuple(r) for r in m))

    return CechComplex(ChainComplex(ranks, tuple(boundaries)), tuple(levels))


@dataclass(frozen=True)
class GluingCohomology:
    """Gluing data of a polytopal complex.

    h1 classifies the gluings (the moduli of the glued object of this type);
    h0 is the dimension of its automorphism torus.  Torsion lists the finite
    invariant factors.
    """

    h0_rank: int
    h0_torsion: tuple[int, ...]
    h1_rank: int
    h1_torsion: tuple[int, ...]


def gluing_cohomology(pc: PolytopalComplex) -> GluingCohomology:
    cech = cech_lattice_complex(pc)
    h = homology(cech.chain)
    euler_chain = cech.chain.euler_characteristic()
    euler_h = sum((-1) ** p * grp.rank for p, grp in enumerate(h))
    if euler_chain != euler_h:
        raise AssertionError("Euler characteristic mismatch (internal error)")
    h1 = h[1] if len(h) > 1 else HomologyGroup(0, ())
    return GluingCohomology(h[0].rank, h[0].torsion, h1.rank, h1.torsion)


# ---------------------------------------------------------------------------
# pseudomanifold surrogate


@dataclass(frozen=True)
class PseudomanifoldReport:
    status: str  # "closed" | "with_boundary" | "not_pseudomanifold"
    boundary: tuple  # codim-1 faces (vertex tuples) lying in exactly one maximal cell
    witness: tuple | None = None


def pseudomanifold_check(pc: PolytopalComplex) -> PseudomanifoldReport:
    """Combinatorial surrogate for 'manifold with boundary'.

    Requires pure dimension, every codim-1 face in at most two maximal
    cells, and connectivity of the dual graph through shared codim-1 faces.
    """
    maximal = sorted(pc.maximal)
    dims = {pc.cells[i].dim for i in maximal}
    if len(dims) > 1:
        return PseudomanifoldReport("not_pseudomanifold", (), ("non-pure", tuple(sorted(dims))))
    incident: dict[tuple, list[int]] = {}
    for i in maximal:
        for f in pc.cells[i].facet_faces():
            incident.setdefault(f, []).append(i)
    for f, owners in sorted(incident.items()):
        if len(owners) > 2:
            return PseudomanifoldReport("not_pseudomanifold", (), ("overcrowded-face", f))
    # dual-graph connectivity through shared codim-1 faces
    if len(maximal) > 1:
        adj = {i: set() for i in maximal}
        for owners in incident.values():
            if len(owners) == 2:
                a, b = owners
                adj[a].add(b)
                adj[b].add(a)
        seen = {maximal[0]}
        stack = [maximal[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(maximal):
            return PseudomanifoldReport("not_pseudomanifold", (), ("disconnected", ()))
    boundary = tuple(sorted(f for f, owners in incident.items() if len(owners) == 1))
    return PseudomanifoldReport("closed" if not boundary else "with_boundary", boundary)


# ---------------------------------------------------------------------------
# marked complexes and the pair (cone) complex


class MarkedComplex:
    __slots__ = ("complex", "markings")

    def __init__(self, complex: PolytopalComplex, markings: dict):
        self.complex = complex
        self.markings = markings


def marked_complex(pc: PolytopalComplex, markings) -> MarkedComplex:
    """Validate markings: one point subset per maximal cell, hull-spanning,
    restricting consistently to shared faces."""
    marks = {}
    if set(markings) != set(pc.maximal):
        raise InputError("markings must be given exactly for the maximal cells")
    for i, pts in markings.items():
        cell = pc.cells[i]
        mpts = sorted({tuple(int(x) for x in m) for m in pts})
        if not mpts:
            raise InputError(f"empty marking on cell {i}")
        for m in mpts:
            if not cell.contains(m):
                raise InputError(f"marked point {m} outside cell {i}")
        if LatticePolytope.from_points(mpts).vertices != cell.vertices:
            raise InputError(f"Conv(marking) != cell for cell {i}")
        marks[i] = tuple(mpts)
    for i, j in itertools.combinations(sorted(pc.maximal), 2):
        verts = intersect_polytopes(pc.cells[i], pc.cells[j])
        if not verts:
            continue
        face = LatticePolytope(verts)
        ri = {m for m in marks[i] if face.contains(m)}
        rj = {m for m in marks[j] if face.contains(m)}
        if ri != rj:
            raise InputError(f"markings of cells {i}, {j} disagree on their shared face")
    return MarkedComplex(pc, marks)


@dataclass(frozen=True)
class ConeComplex:
    """Mapping cone of the evaluation map from the marking complex to the
    lattice complex; its homology carries the pair gluing data."""

    chain: ChainComplex  # K_p = L_p (+) L'_{p-1}
    lattice: CechComplex
    marking_levels: tuple  # marking_levels[p] = tuple of (subset, points)


def marked_section_complex(mc: MarkedComplex) -> ConeComplex:
    """Build K with K_p = L_p (+) L'_{p-1}, d(x, y) = (d x + eval(y), -d' y).

    L' is the complex of free abelian groups on the markings of the
    intersections, eval sends a marked point m to (1, m) written in the
    intersection's lattice basis.
    """
    pc = mc.complex
    cech = cech_lattice_complex(pc)
    # markings of the intersections (consistent by validation)
    marking_levels = []
    for lvl in cech.levels:
        entries = []
        for subset, face, _ in lvl:
            pts = tuple(m for m in mc.markings[subset[0]] if face.contains(m))
            entries.append((subset, pts))
        marking_levels.append(tuple(entries))

    lranks = cech.chain.ranks
    mranks = tuple(sum(len(pts) for _, pts in lvl) for lvl in marking_levels)
    nlevels = max(len(lranks), len(mranks) + 1)

    def lrank(p):
        return lranks[p] if p < len(lranks) else 0

    def mrank(p):
        return mranks[p] if 0 <= p < len(mranks) else 0

    loffsets = []
    for lvl in cech.levels:
        off, acc = {}, 0
        for subset, _, basis in lvl:
            off[subset] = acc
            acc += len(basis)
        loffsets.append(off)
    moffsets = []
    for lvl in marking_levels:
        off, acc = {}, 0
        for subset, pts in lvl:
            off[subset] = acc
            acc += len(pts)
        moffsets.append(off)

    kranks = tuple(lrank(p) + mrank(p - 1) for p in range(nlevels))
    boundaries = []
    for p in range(1, nlevels):
        rows = kranks[p - 1]
        cols = kranks[p]
        if rows == 0 or cols == 0:
            boundaries.append(tuple(tuple() for _ in range(rows)))
            continue
        m = [[0] * cols for _ in range(rows)]
        # block d_L : L_p -> L_{p-1}
        if lrank(p) and p - 1 < len(cech.chain.boundaries):
            bl = cech.chain.boundaries[p - 1]
            for r in range(len(bl)):
                for c in range(len(bl[0]) if bl else 0):
                    m[r][c] = bl[r][c]
        # block eval: L'_{p-1} -> L_{p-1}
        if mrank(p - 1):
            basis_by_subset = {s: b for s, _, b in cech.levels[p - 1]}
            for subset, pts in marking_levels[p - 1]:
                basis = basis_by_subset[subset]
                lifted = [(1,) + tuple(pt) for pt in pts]
                coords = _coords_in_basis(lifted, basis)
                r0 = loffsets[p - 1][subset]
                c0 = lrank(p) + moffsets[p - 1][subset]
                for c, coord in enumerate(coords):
                    for r, x in enumerate(coord):
                        m[r0 + r][c0 + c] += x
        # block -d_{L'}: L'_{p-1} -> L'_{p-2}
        if p >= 2 and mrank(p - 1) and mrank(p - 2):
            prev_index = {s: (pts, moffsets[p - 2][s]) for s, pts in marking_levels[p - 2]}
            for subset, pts in marking_levels[p - 1]:
                c0 = lrank(p) + moffsets[p - 1][subset]
                for j in range(len(subset)):
                    target = subset[:j] + subset[j + 1 :]
                    tpts, trow = prev_index[target]
                    sign = -((-1) ** j)
                    pos = {pt: k for k, pt in enumerate(tpts)}
                    for c, pt in enumerate(pts):
                        m[lrank(p - 1) + trow + pos[pt]][c0 + c] += sign
        boundaries.append(tuple(tuple(r) for r in m))

    chain = ChainComplex(kranks, tuple(boundaries))
    return ConeComplex(chain, cech, tuple(marking_levels))


@dataclass(frozen=True)
class PairCohomology:
    """Automorphism (h0) and moduli (h1) data of a marked complex.

    ``automorphism_flag`` is raised when the automorphism group is not
    finite although the markings affinely span every cell; for spanning
    markings these groups are expected to be finite.
    """

    h0_rank: int
    h0_torsion: tuple[int, ...]
    h1_rank: int
    h1_torsion: tuple[int, ...]
    markings_span: bool
    automorphism_flag: bool

    @property
    def automorphisms_finite(self) -> bool:
        return self.h0_rank == 0


def pair_cohomology(mc: MarkedComplex) -> PairCohomology:
    cone = marked_section_complex(mc)
    h = homology(cone.chain)
    h0 = h[0] if h else HomologyGroup(0, ())
    h1 = h[1] if len(h) > 1 else HomologyGroup(0, ())
    span = all(
        len(linalg.saturate([(1,) + tuple(m) for m in mc.markings[i]]))
        == mc.complex.cells[i].dim + 1
        for i in mc.complex.maximal
    )
    return PairCohomology(
        h0.rank, h0.torsion, h1.rank, h1.torsion, span, span and h0.rank > 0
    )
