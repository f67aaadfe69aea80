"""Exact rational linear programming (feasibility with certificates).

A small two-phase simplex over ``fractions.Fraction`` with Bland's rule,
so termination is guaranteed and every certificate is an exact rational
point.  Strict inequalities are handled by maximizing a slack variable t
subject to (expr - rhs >= t) on the strict rows and t <= 1; the system is
strictly feasible iff the optimum is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError

GE = ">="
EQ = "="

_F0 = Fraction(0)
_F1 = Fraction(1)


class _Infeasible:
    def __repr__(self):  # pragma: no cover - cosmetic
        return "INFEASIBLE"

    def __bool__(self):
        return False


INFEASIBLE = _Infeasible()


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction
    strict: bool = False

    def __post_init__(self):
        if self.rel not in (GE, EQ):
            raise InputError(f"unknown relation {self.rel!r}")
        if self.strict and self.rel != GE:
            raise InputError("strict constraints must use >=")


@dataclass(frozen=True)
class LPProblem:
    num_vars: int
    constraints: tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise InputError(
                    f"constraint has {len(c.coeffs)} coefficients, expected {self.num_vars}"
                )


def constraint(coeffs, rel, rhs, strict=False) -> Constraint:
    return Constraint(tuple(Fraction(x) for x in coeffs), rel, Fraction(rhs), strict)


class _Tableau:
    """Dense simplex tableau; all pivoting choices follow Bland's rule."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction]):
        self.rows = rows
        self.rhs = rhs
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.basis: list[int] = [-1] * self.m

    def add_artificials(self):
        for i in range(self.m):
            if self.rhs[i] < 0:
                self.rows[i] = [-x for x in self.rows[i]]
                self.rhs[i] = -self.rhs[i]
        base = self.n
        for i, row in enumerate(self.rows):
            row.extend(_F1 if j == i else _F0 for j in range(self.m))
            self.basis[i] = base + i
        self.artificial_from = base
        self.n += self.m

    def pivot(self, r: int, c: int):
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            inv = 1 / pv
            self.rows[r] = prow = [x * inv for x in prow]
            self.rhs[r] *= inv
        for i in range(self.m):
            if i == r:
                continue
            f = self.rows[i][c]
            if f:
                self.rows[i] = [x - f * y for x, y in zip(self.rows[i], prow)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def minimize(self, cost: list[Fraction], banned: set[int]) -> Fraction:
        """Run simplex to optimality for the given cost vector; returns the optimum."""
        while True:
            # reduced costs relative to the current basis
            lam = [cost[self.basis[i]] for i in range(self.m)]
            entering = -1
            for j in range(self.n):
                if j in banned or j in self.basis:
                    continue
                red = cost[j] - sum(lam[i] * self.rows[i][j] for i in range(self.m))
                if red < 0:
                    entering = j
                    break  # Bland: first improving index
            if entering < 0:
                obj = sum(cost[self.basis[i]] * self.rhs[i] for i in range(self.m))
                return obj
            leaving = -1
            best = None
            for i in range(self.m):
                a = self.rows[i][entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leaving]
                    ):
                        best = ratio
                        leaving = i
            if leaving < 0:
                raise InputError("objective unbounded (malformed problem)")
            self.pivot(leaving, entering)

    def solution(self, nvars: int) -> list[Fraction]:
        x = [_F0] * nvars
        for i, b in enumerate(self.basis):
            if b < nvars:
                x[b] = self.rhs[i]
        return x


def _solve_standard(rows, rhs, cost_real=None):
    """Feasibility (and optional minimization) of {A y = b, y >= 0}.

    Returns (feasible, tableau) with the tableau left at the final basis.
    ``cost_real`` is minimized in a second phase when given.
    """
    t = _Tableau([list(r) for r in rows], list(rhs))
    nreal = t.n
    t.add_artificials()
    phase1 = [_F0] * nreal + [_F1] * (t.n - nreal)
    opt = t.minimize(phase1, banned=set())
    if opt != 0:
        return False, t
    # drive leftover artificials out of the basis (or drop redundant rows)
    for i in range(t.m):
        if t.basis[i] >= nreal:
            piv = next((j for j in range(nreal) if t.rows[i][j] != 0), None)
            if piv is not None:
                t.pivot(i, piv)
    live = [i for i in range(t.m) if t.basis[i] < nreal]
    t.rows = [t.rows[i] for i in live]
    t.rhs = [t.rhs[i] for i in live]
    t.basis = [t.basis[i] for i in live]
    t.m = len(live)
    banned = set(range(nreal, t.n))
    if cost_real is not None:
        cost = list(cost_real) + [_F0] * (t.n - nreal)
        t.minimize(cost, banned)
    return True, t


def lp_feasible(problem: LPProblem):
    """Exact rational point satisfying every constraint (strictly where asked),
    or INFEASIBLE.

    Free variables are split into differences of nonnegative ones; strictness
    is decided by slack maximization as described in the module docstring.
    """
    n = problem.num_vars
    strict_rows = [c for c in problem.constraints if c.strict]
    has_t = bool(strict_rows)
    # columns: x+ (n), x- (n), [t+, t-], slacks appended per inequality
    ncols = 2 * n + (2 if has_t else 0)
    tplus, tminus = 2 * n, 2 * n + 1
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def base_row(c: Constraint) -> list[Fraction]:
        row = [_F0] * ncols
        for j, a in enumerate(c.coeffs):
            row[j] = Fraction(a)
            row[n + j] = -Fraction(a)
        return row

    for c in problem.constraints:
        row = base_row(c)
        if c.strict:
            row[tplus] = Fraction(-1)
            row[tminus] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(c.rhs))
    if has_t:
        row = [_F0] * ncols
        row[tplus], row[tminus] = _F1, Fraction(-1)
        rows.append(row)
        rhs.append(_F1)  # t <= 1
    # append slack columns for inequality rows
    ineq_idx = [i for i, c in enumerate(problem.constraints) if c.rel == GE]
    if has_t:
        ineq_idx.append(len(problem.constraints))  # the t <= 1 row, as -t >= -1
    for k, i in enumerate(ineq_idx):
        for r, row in enumerate(rows):
            sign = _F0
            if r == i:
                # a.x - s = rhs for >= rows; t + s = 1 for the bound row
                sign = Fraction(1) if (has_t and i == len(problem.constraints)) else Fraction(-1)
            row.append(sign)
    ncols = len(rows[0]) if rows else ncols

    if not rows:
        return tuple([_F0] * n)

    cost = None
    if has_t:
        cost = [_F0] * ncols
        cost[tplus] = Fraction(-1)  # maximize t
        cost[tminus] = Fraction(1)
    feasible, tab = _solve_standard(rows, rhs, cost)
    if not feasible:
        return INFEASIBLE
    y = tab.solution(ncols)
    if has_t:
        tval = y[tplus] - y[tminus]
        if tval <= 0:
            return INFEASIBLE
    return tuple(y[j] - y[n + j] for j in range(n))


def in_convex_hull(point, points) -> bool:
    """Exact test whether ``point`` is a convex combination of ``points``."""
    pts = list(points)
    if not pts:
        return False
    d = len(point)
    k = len(pts)
    rows = []
    rhs = []
    for i in range(d):
        rows.append([Fraction(p[i]) for p in pts])
        rhs.append(Fraction(point[i]))
    rows.append([_F1] * k)
    rhs.append(_F1)
    feasible, _ = _solve_standard(rows, rhs)
    return feasible
