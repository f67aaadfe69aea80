"""Exact integer and rational linear algebra.

Matrices are plain tuples of tuples (row major).  Integer routines never
leave the integers (Bareiss elimination, Smith normal form); rational
routines use ``fractions.Fraction`` throughout.  Nothing here is
floating-point, and nothing here is approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def mat(rows) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> IntMatrix:
    return tuple((0,) * c for _ in range(r))


def transpose(m) -> tuple[tuple, ...]:
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: IntVector) -> IntVector:
    """Divide an integer vector by the gcd of its entries (zero vector unchanged)."""
    g = vec_gcd(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def clear_denominators(v) -> tuple[IntVector, int]:
    """Return (integer vector, positive scale) with vector = integer/scale."""
    fr = [Fraction(x) for x in v]
    scale = 1
    for x in fr:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    return tuple(int(x * scale) for x in fr), scale


# ---------------------------------------------------------------------------
# rational elimination


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref([[Fraction(x) for x in row] for row in rows])[1])


def solve(a_rows, b) -> tuple[Fraction, ...] | None:
    """One solution x of A x = b over the rationals, or None if inconsistent."""
    if not a_rows:
        return () if all(Fraction(x) == 0 for x in b) else None
    n = len(a_rows[0])
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a_rows, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    return tuple(x)


def nullspace(rows) -> list[tuple[Fraction, ...]]:
    """Basis of the rational kernel of the row-matrix (as a map on column vectors)."""
    if not rows:
        return []
    n = len(rows[0])
    red, pivots = rref([[Fraction(x) for x in row] for row in rows])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(tuple(v))
    return basis


def int_rank(rows) -> int:
    """Rank of an integer matrix by division-free elimination.

    Entries grow, but the matrices this serves are tiny.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return 0
    nc = len(a[0])
    rank_ = 0
    for c in range(nc):
        piv = next((i for i in range(rank_, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank_], a[piv] = a[piv], a[rank_]
        pc = a[rank_][c]
        for i in range(rank_ + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [pc * x - f * y for x, y in zip(a[i], a[rank_])]
        rank_ += 1
        if rank_ == len(a):
            break
    return rank_


def det(rows) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pr is None:
                return 0
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """U·A·V = diag(invariant_factors, 0, ...) with U, V unimodular.

    ``invariant_factors`` lists only the nonzero diagonal entries; each
    divides the next.  ``rank`` equals their count.
    """

    invariant_factors: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(a_rows) -> SNFResult:
    """Smith normal form of an integer matrix, with both transforms."""
    a = [list(map(int, r)) for r in a_rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while True:
        # find a pivot of minimal absolute value in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] < 0:
            negate_row(t)
        t += 1
        if t == min(nr, nc):
            break

    # enforce the divisibility chain d_k | d_{k+1} by gcd/lcm passes on
    # adjacent diagonal pairs (entries stay inside the two rows/columns)
    changed = True
    while changed:
        changed = False
        for k in range(t - 1):
            j = k + 1
            if a[j][j] % a[k][k] == 0:
                continue
            changed = True
            add_col(j, k, 1)  # a[j][k] becomes d_j
            while a[j][k] != 0:  # Euclid on column k between rows k and j
                q = a[k][k] // a[j][k]
                add_row(j, k, -q)
                swap_rows(k, j)
            # gcd now at (k,k); clear the fill-in it left in row k
            if a[k][j] != 0:
                q = a[k][j] // a[k][k]
                add_col(k, j, -q)
            if a[k][k] < 0:
                negate_row(k)
            if a[j][j] < 0:
                negate_row(j)

    factors = tuple(a[i][i] for i in range(t) if a[i][i] != 0)
    return SNFResult(factors, mat(u), mat(v))


def kernel_basis(a_rows) -> list[IntVector]:
    """Basis (as rows) of the integer kernel {x : A x = 0}; saturated by construction."""
    a = [list(map(int, r)) for r in a_rows]
    if not a:
        return []
    nc = len(a[0])
    res = smith_normal_form(a)
    cols = transpose(res.right)
    return [tuple(cols[j]) for j in range(res.rank, nc)]


def saturate(generator_rows, ambient_dim: int | None = None) -> list[IntVector]:
    """Basis of the saturation of the lattice generated by the given rows.

    The result spans the same rational subspace and the quotient of the
    ambient lattice by it is torsion-free.  An empty generating set yields
    an empty basis (``ambient_dim`` tells the routine where it lives).
    """
    gens = [tuple(map(int, r)) for r in generator_rows]
    if not gens:
        return []
    n = len(gens[0])
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError("ambient dimension does not match generators")
    # saturation = kernel of (kernel of G), both kernels computed over Z
    w = kernel_basis(gens)  # vectors orthogonal ... G w = 0 reading rows as forms
    if not w:
        return [tuple(r) for r in identity(n)]
    sat = kernel_basis(w)
    return hermite_normal_form(sat)


def hermite_normal_form(rows) -> list[IntVector]:
    """Canonical (row-style) Hermite normal form basis of the lattice spanned by rows.

    Pivots are positive, entries above a pivot are reduced into [0, pivot).
    Zero rows are dropped, so the result is a canonical basis usable for
    lattice equality tests.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    nc = len(m[0])
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # gcd out the column below the pivot
        for i in range(r + 1, len(m)):
            while m[i][c] != 0:
                q = m[r][c] // m[i][c]
                m[r] = [x - q * y for x, y in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r] if any(row)]


def in_lattice(v, basis_rows) -> bool:
    """Whether integer vector v lies in the lattice spanned by the basis rows."""
    if not basis_rows:
        return all(x == 0 for x in v)
    sol = solve(transpose(basis_rows), v)
    return sol is not None and all(c.denominator == 1 for c in sol)


def lattice_eq(rows_a, rows_b) -> bool:
    return hermite_normal_form(rows_a) == hermite_normal_form(rows_b)


def int_solve(a_rows, b) -> tuple[int, ...] | None:
    """One integer solution of A x = b, or None (uses SNF)."""
    a = [tuple(map(int, r)) for r in a_rows]
    if not a:
        return None
    res = smith_normal_form(a)
    ub = mat_vec(res.left, tuple(map(int, b)))
    nc = len(a[0])
    y = [0] * nc
    d = list(res.invariant_factors)
    for i, bi in enumerate(ub):
        if i < len(d):
            if bi % d[i] != 0:
                return None
            y[i] = bi // d[i]
        elif bi != 0:
            return None
    return mat_vec(res.right, tuple(y))
