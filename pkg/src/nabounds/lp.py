"""Exact rational linear programming.

Two-phase primal simplex on a dense ``Fraction`` tableau with Bland's rule.
Every optimal solve returns a dual vector read off the final reduced costs,
so optimality can be re-checked independently with :func:`verify`.

Dual sign convention (``y`` indexed by constraint row):

* minimize: ``>=`` rows have ``y >= 0``, ``<=`` rows ``y <= 0``, ``=`` rows free;
  reduced costs ``c - A^T y`` are ``>= 0`` on nonnegative variables.
* maximize: ``<=`` rows have ``y >= 0``, ``>=`` rows ``y <= 0``;
  reduced costs are ``<= 0`` on nonnegative variables.

Free variables always have zero reduced cost, and ``b^T y`` equals the
optimal objective.

Non-optimal outcomes carry certificates too. An infeasible result has a
Farkas vector in ``dual``: signs as in the minimize convention,
``A^T y <= 0`` (``= 0`` on free variables) and ``b^T y > 0``. An unbounded
result has a feasible point in ``primal`` and an improving direction in
``ray``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

SENSES = ("<=", "=", ">=")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass int, str or Fraction")
    return Fraction(v)


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    senses: tuple[str, ...]
    rhs: tuple[Fraction, ...]
    free: tuple[bool, ...] = ()
    maximize: bool = False

    def __post_init__(self):
        n = len(self.objective)
        if n == 0:
            raise ValueError("a linear program needs at least one variable")
        object.__setattr__(self, "objective", tuple(_frac(v) for v in self.objective))
        object.__setattr__(self, "rows", tuple(tuple(_frac(v) for v in r) for r in self.rows))
        object.__setattr__(self, "rhs", tuple(_frac(v) for v in self.rhs))
        object.__setattr__(self, "senses", tuple(self.senses))
        free = tuple(bool(f) for f in self.free) if self.free else (False,) * n
        object.__setattr__(self, "free", free)
        if len(free) != n:
            raise ValueError(f"{len(free)} bound flags for {n} variables")
        if not len(self.rows) == len(self.senses) == len(self.rhs):
            raise ValueError("rows, senses and rhs must have equal length")
        for k, r in enumerate(self.rows):
            if len(r) != n:
                raise ValueError(f"row {k} has {len(r)} coefficients, expected {n}")
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise ValueError(f"unknown constraint sense {bad[0]!r}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class LPSolution:
    status: str
    objective: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    ray: tuple[Fraction, ...] = ()


def _dedupe(lp: LinearProgram) -> tuple[list[int], list[int]]:
    """Indices of the first occurrence of each distinct row, and for every
    original row the position of its representative in that list."""
    seen: dict[tuple, int] = {}
    keep: list[int] = []
    where: list[int] = []
    for k, key in enumerate(zip(lp.rows, lp.senses, lp.rhs)):
        if key not in seen:
            seen[key] = len(keep)
            keep.append(k)
        where.append(seen[key])
    return keep, where


def _fmt_row(row: Sequence[Fraction]) -> str:
    return " ".join(f"{str(v):>8}" for v in row)


class _Tableau:
    def __init__(self, rows, rhs, ncols, basis, banned, debug):
        self.T = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.ncols = ncols
        self.basis = basis
        self.banned = banned
        self.debug = debug
        self.z: list[Fraction] = []
        self.entering = -1

    def price(self, cost: Sequence[Fraction]) -> None:
        z = list(cost) + [Fraction(0)]
        for k, row in enumerate(self.T):
            cb = cost[self.basis[k]]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        z[j] -= cb * v
        self.z = z

    def pivot(self, r: int, col: int) -> None:
        prow = self.T[r]
        piv = prow[col]
        if piv != 1:
            prow = [v / piv for v in prow]
            self.T[r] = prow
        nz = [(j, v) for j, v in enumerate(prow) if v]
        for row in (*self.T[:r], *self.T[r + 1:], self.z):
            f = row[col]
            if f:
                for j, v in nz:
                    row[j] -= f * v
        self.basis[r] = col
        if self.debug is not None:
            self.debug.write(f"pivot row {r} col {col}\n")
            for row in self.T:
                self.debug.write(_fmt_row(row) + "\n")
            self.debug.write("z " + _fmt_row(self.z) + "\n\n")

    def run(self) -> bool:
        """Minimize until optimal (True) or an unbounded ray is found (False)."""
        while True:
            col = next((j for j in range(self.ncols)
                        if self.z[j] < 0 and j not in self.banned), None)
            if col is None:
                return True
            best = None
            for k, row in enumerate(self.T):
                a = row[col]
                if a > 0:
                    key = (row[-1] / a, self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                self.entering = col
                return False
            self.pivot(best[1], col)


def _expand_dual(y, keep, where, flip) -> tuple[Fraction, ...]:
    """Map duals of the merged, sign-normalised rows back to the original rows."""
    out = []
    for orig, rep in enumerate(where):
        if keep[rep] != orig:
            out.append(Fraction(0))
        else:
            out.append(-y[rep] if flip[rep] else y[rep])
    return tuple(out)


def solve(lp: LinearProgram, debug: TextIO | None = None) -> LPSolution:
    """Solve ``lp`` exactly. Duplicate rows are merged before pivoting;
    the merged duplicates receive zero dual weight."""
    keep, where = _dedupe(lp)
    n = lp.num_vars

    # structural columns: one per variable, two for a free variable
    col_of: list[tuple[int, int | None]] = []
    ncols = 0
    for j in range(n):
        if lp.free[j]:
            col_of.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of.append((ncols, None))
            ncols += 1
    nstruct = ncols

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    flip: list[bool] = []
    senses: list[str] = []
    for k in keep:
        coeffs = [Fraction(0)] * nstruct
        for j, v in enumerate(lp.rows[k]):
            pos, neg = col_of[j]
            coeffs[pos] = v
            if neg is not None:
                coeffs[neg] = -v
        b, sense = lp.rhs[k], lp.senses[k]
        f = b < 0
        if f:
            coeffs = [-v for v in coeffs]
            b = -b
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows.append(coeffs)
        rhs.append(b)
        flip.append(f)
        senses.append(sense)

    m = len(rows)
    # auxiliary columns; ident[k] is the column that starts as e_k
    extra: list[list[tuple[int, Fraction]]] = [[] for _ in range(m)]
    ident = [0] * m
    artificial: set[int] = set()
    for k, sense in enumerate(senses):
        if sense == ">=":
            extra[k].append((ncols, Fraction(-1)))
            ncols += 1
        extra[k].append((ncols, Fraction(1)))
        ident[k] = ncols
        if sense != "<=":
            artificial.add(ncols)
        ncols += 1
    full_rows = []
    for k in range(m):
        row = rows[k] + [Fraction(0)] * (ncols - nstruct)
        for c, v in extra[k]:
            row[c] = v
        full_rows.append(row)

    tab = _Tableau(full_rows, rhs, ncols, list(ident), set(), debug)
    if artificial:
        tab.price([Fraction(1) if j in artificial else Fraction(0) for j in range(ncols)])
        tab.run()
        if tab.z[-1] != 0:
            phase1 = [(Fraction(1) if ident[k] in artificial else Fraction(0)) - tab.z[ident[k]]
                      for k in range(m)]
            return LPSolution(INFEASIBLE, dual=_expand_dual(phase1, keep, where, flip))
        # drive zero-level artificials out of the basis, dropping redundant rows
        live = list(range(m))
        k = 0
        while k < len(tab.T):
            if tab.basis[k] in artificial:
                col = next((j for j in range(ncols)
                            if j not in artificial and tab.T[k][j] != 0), None)
                if col is None:
                    del tab.T[k], tab.basis[k], live[k]
                    continue
                tab.pivot(k, col)
            k += 1
    else:
        live = list(range(m))

    sign = Fraction(-1) if lp.maximize else Fraction(1)
    cost = [Fraction(0)] * ncols
    for j in range(n):
        pos, neg = col_of[j]
        cost[pos] = sign * lp.objective[j]
        if neg is not None:
            cost[neg] = -sign * lp.objective[j]
    tab.banned = artificial
    tab.price(cost)

    def structural(values):
        return tuple(values[pos] - (values[neg] if neg is not None else 0)
                     for pos, neg in col_of)

    def basic_values():
        values = [Fraction(0)] * ncols
        for k, col in enumerate(tab.basis):
            values[col] = tab.T[k][-1]
        return values

    if not tab.run():
        direction = [Fraction(0)] * ncols
        direction[tab.entering] = Fraction(1)
        for k, col in enumerate(tab.basis):
            direction[col] = -tab.T[k][tab.entering]
        return LPSolution(UNBOUNDED, primal=structural(basic_values()),
                          ray=structural(direction))

    primal = list(structural(basic_values()))

    reduced_dual = [Fraction(0)] * m
    for k in live:
        reduced_dual[k] = -tab.z[ident[k]]
    dual = [sign * y for y in _expand_dual(reduced_dual, keep, where, flip)]

    value = sum((c * x for c, x in zip(lp.objective, primal)), Fraction(0))
    return LPSolution(OPTIMAL, value, tuple(primal), tuple(dual))


def _row_violations(lp: LinearProgram, x: Sequence[Fraction], homogeneous=False) -> list[str]:
    """Sign and row violations of ``x``; with ``homogeneous`` the right-hand
    sides are taken as zero (recession directions)."""
    problems = [f"variable {j} is negative" for j in range(lp.num_vars)
                if not lp.free[j] and x[j] < 0]
    for k, (row, sense, b) in enumerate(zip(lp.rows, lp.senses, lp.rhs)):
        if homogeneous:
            b = Fraction(0)
        ax = sum((a * v for a, v in zip(row, x)), Fraction(0))
        ok = ax <= b if sense == "<=" else ax >= b if sense == ">=" else ax == b
        if not ok:
            problems.append(f"row {k}: {ax} {sense} {b} fails")
    return problems


def _dual_sign_violations(lp: LinearProgram, y: Sequence[Fraction]) -> list[str]:
    """Row-sign violations of ``y`` in the minimize orientation."""
    return [f"dual value of row {k} has the wrong sign" for k, sense in enumerate(lp.senses)
            if sense == ">=" and y[k] < 0 or sense == "<=" and y[k] > 0]


def _check_infeasible(lp: LinearProgram, y: Sequence[Fraction]) -> list[str]:
    problems = _dual_sign_violations(lp, y)
    for j in range(lp.num_vars):
        aty = sum((lp.rows[k][j] * y[k] for k in range(lp.num_rows)), Fraction(0))
        if lp.free[j] and aty != 0 or not lp.free[j] and aty > 0:
            problems.append(f"Farkas combination has coefficient {aty} on variable {j}")
    by = sum((b * v for b, v in zip(lp.rhs, y)), Fraction(0))
    if by <= 0:
        problems.append(f"Farkas combination has right-hand side {by}, not positive")
    return problems


def _check_unbounded(lp: LinearProgram, x, d) -> list[str]:
    problems = _row_violations(lp, x)
    problems += ["ray: " + p for p in _row_violations(lp, d, homogeneous=True)]
    gain = sum((c * v for c, v in zip(lp.objective, d)), Fraction(0))
    if (gain <= 0) if lp.maximize else (gain >= 0):
        problems.append(f"ray changes the objective by {gain}, not an improvement")
    return problems


def check(lp: LinearProgram, sol: LPSolution) -> list[str]:
    """Exact check of a solver outcome and its certificate; returns the list
    of violations (empty if ok)."""
    if sol.status == INFEASIBLE:
        if len(sol.dual) != lp.num_rows:
            return ["Farkas vector dimension does not match the program"]
        return _check_infeasible(lp, [_frac(v) for v in sol.dual])
    if sol.status == UNBOUNDED:
        if len(sol.primal) != lp.num_vars or len(sol.ray) != lp.num_vars:
            return ["point or ray dimension does not match the program"]
        return _check_unbounded(lp, [_frac(v) for v in sol.primal],
                                [_frac(v) for v in sol.ray])
    if sol.status != OPTIMAL:
        return [f"unknown status {sol.status!r}"]
    if len(sol.primal) != lp.num_vars or len(sol.dual) != lp.num_rows:
        return ["certificate dimensions do not match the program"]
    x = [_frac(v) for v in sol.primal]
    y = [_frac(v) for v in sol.dual]
    problems = _row_violations(lp, x)

    # orient the dual as if minimizing
    s = -1 if lp.maximize else 1
    problems += _dual_sign_violations(lp, [s * v for v in y])
    for j in range(lp.num_vars):
        red = s * lp.objective[j] - sum((lp.rows[k][j] * s * y[k]
                                         for k in range(lp.num_rows)), Fraction(0))
        if lp.free[j] and red != 0 or not lp.free[j] and red < 0:
            problems.append(f"reduced cost of variable {j} is {s * red}")

    primal_value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    dual_value = sum((b * v for b, v in zip(lp.rhs, y)), Fraction(0))
    if primal_value != dual_value:
        problems.append(f"duality gap: primal {primal_value} vs dual {dual_value}")
    if sol.objective is None or _frac(sol.objective) != primal_value:
        problems.append(f"claimed objective {sol.objective} differs from c.x = {primal_value}")
    return problems


def verify(lp: LinearProgram, sol: LPSolution) -> bool:
    return not check(lp, sol)
