"""Nonadaptive minimax bound ``DL(F)`` and its dual ``PL(F)``.

``L(F)`` is the value of

    minimize mu  s.t.  mu - sum_{i : x(i) = y(i)} p(i) >= 0   for cross-class (x, y)
                       sum_i p(i) = 1,  p >= 0

and ``DL(F) = PL(F) = 1 / (1 - L(F))``. Pairs with equal differ-sets give
identical rows, so rows are keyed by the differ-set bitmask. The dual program
(maximize nu over weights on those differ-set classes) has only
``|Gamma| + 1`` rows, so by default that is the one handed to the simplex and
the primal certificate is read off its dual vector. Either way both
certificates are re-checked against the primal program with :func:`lp.check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp as lpmod
from .adversary import (BoundReport, WeightFunction, rational_sqrt,
                        validate_weight_function)
from .certfile import problem_header
from .blackbox import PAIR_CAP, CapError, PairRelation, Problem, count_cross_pairs, \
    cross_pairs, differ_mask

INF = math.inf


@dataclass(frozen=True)
class QueryDistribution:
    problem: Problem
    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(Fraction(v) for v in self.p)
        object.__setattr__(self, "p", p)
        if len(p) != self.problem.gamma_size:
            raise ValueError(f"distribution has {len(p)} entries, expected "
                             f"{self.problem.gamma_size}")
        if any(v < 0 for v in p):
            raise ValueError("distribution has a negative entry")
        if sum(p) != 1:
            raise ValueError(f"distribution sums to {sum(p)}, not 1")

    @classmethod
    def uniform(cls, problem: Problem) -> "QueryDistribution":
        g = problem.gamma_size
        return cls(problem, (Fraction(1, g),) * g)


@dataclass(frozen=True)
class AdaptiveQueryProfile:
    problem: Problem
    p: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(QueryDistribution(self.problem, row).p for row in self.p)
        if len(rows) != len(self.problem):
            raise ValueError(f"profile has {len(rows)} rows for {len(self.problem)} inputs")
        object.__setattr__(self, "p", rows)

    @classmethod
    def constant(cls, dist: QueryDistribution) -> "AdaptiveQueryProfile":
        return cls(dist.problem, (dist.p,) * len(dist.problem))


@dataclass(frozen=True)
class DualityReport:
    L_value: Fraction
    DL_value: Fraction
    PL_value: Fraction
    primal: QueryDistribution
    dual: WeightFunction
    gap: Fraction
    restricted: bool = False

    def summary(self) -> str:
        return f"L={self.L_value} DL={self.DL_value} PL={self.PL_value} gap={self.gap}"

    def to_text(self) -> str:
        problem = self.primal.problem
        lines = [problem_header(problem), "distribution"]
        lines += [f"{i} {v}" for i, v in enumerate(self.primal.p)]
        lines.append("weight")
        lines += [f"{a} {b} {v}" for (a, b), v in self.dual.entries.items()]
        lines.append(self.summary() + (" (restricted pairs)" if self.restricted else ""))
        return "\n".join(lines) + "\n"

    def reports(self, epsilon=0) -> list[BoundReport]:
        note = {"restricted": self.restricted}
        return [BoundReport("minimax_DL", self.DL_value, Fraction(epsilon), details=note),
                BoundReport("minimax_PL", self.PL_value, Fraction(epsilon), details=note)]


# ---------------------------------------------------------------------------
# programs


def differ_classes(problem: Problem, relation: PairRelation | None = None,
                   pairs_cap: int = PAIR_CAP) -> dict[int, tuple[int, int]]:
    """Distinct differ-set masks over the pair universe, each with the
    lexicographically first pair that realises it."""
    if relation is None:
        if count_cross_pairs(problem) > pairs_cap:
            raise CapError(f"{count_cross_pairs(problem)} cross-class pairs exceed cap "
                           f"{pairs_cap}; pass a relation")
        pairs = cross_pairs(problem)
    else:
        relation.check(problem)
        if len(relation) > pairs_cap:
            raise CapError(f"{len(relation)} pairs exceed cap {pairs_cap}")
        pairs = iter(relation)
    classes: dict[int, tuple[int, int]] = {}
    xs = problem.inputs
    for a, b in pairs:
        mask = differ_mask(xs[a], xs[b])
        if mask == 0:
            raise ValueError(f"inputs {a} and {b} are identical but have different outputs")
        classes.setdefault(mask, (a, b))
    if not classes:
        raise ValueError("no cross-class pair")
    return dict(sorted(classes.items()))


def _bits(mask: int, g: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(g)]


def primal_program(masks: Sequence[int], g: int) -> lpmod.LinearProgram:
    """Variables ``(mu, p_0, ..., p_{g-1})``; one row per differ-set mask
    (in agreement form), then ``sum p = 1``."""
    rows, senses, rhs = [], [], []
    for mask in masks:
        bits = _bits(mask, g)
        rows.append([1] + [-(1 - b) for b in bits])
        senses.append(">=")
        rhs.append(0)
    rows.append([0] + [1] * g)
    senses.append("=")
    rhs.append(1)
    return lpmod.LinearProgram([1] + [0] * g, rows, senses, rhs,
                               free=[True] + [False] * g)


def dual_program(masks: Sequence[int], g: int) -> lpmod.LinearProgram:
    """Variables ``(w_D for each mask D, nu)``: maximize nu subject to
    ``nu <= sum_{D : i not in D} w_D`` for each query i and ``sum w = 1``."""
    rows, senses, rhs = [], [], []
    bits = [_bits(mask, g) for mask in masks]
    for i in range(g):
        rows.append([-(1 - b[i]) for b in bits] + [1])
        senses.append("<=")
        rhs.append(0)
    rows.append([1] * len(masks) + [0])
    senses.append("=")
    rhs.append(1)
    return lpmod.LinearProgram([0] * len(masks) + [1], rows, senses, rhs,
                               free=[False] * len(masks) + [True], maximize=True)


@dataclass(frozen=True)
class _Solved:
    L: Fraction
    p: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    masks: tuple[int, ...]
    reps: tuple[tuple[int, int], ...]


def _solve(problem: Problem, relation: PairRelation | None, form: str,
           pairs_cap: int) -> _Solved:
    classes = differ_classes(problem, relation, pairs_cap)
    masks = tuple(classes)
    g = problem.gamma_size
    primal = primal_program(masks, g)
    if form == "auto":
        form = "primal" if primal.num_rows <= g + 1 else "dual"
    if form == "primal":
        sol = lpmod.solve(primal)
        if sol.status != lpmod.OPTIMAL:
            raise ArithmeticError(f"primal program ended {sol.status}")
        mu, p = sol.primal[0], sol.primal[1:]
        w = sol.dual[:-1]
    elif form == "dual":
        sol = lpmod.solve(dual_program(masks, g))
        if sol.status != lpmod.OPTIMAL:
            raise ArithmeticError(f"dual program ended {sol.status}")
        w, nu = sol.primal[:-1], sol.primal[-1]
        p, mu = sol.dual[:-1], sol.dual[-1]
        sol = lpmod.LPSolution(lpmod.OPTIMAL, mu, (mu, *p), (*w, nu))
    else:
        raise ValueError(f"unknown form {form!r}")
    problems = lpmod.check(primal, sol)
    if problems:
        raise ArithmeticError("LP certificate rejected: " + problems[0])
    return _Solved(mu, tuple(p), tuple(w), masks, tuple(classes.values()))


def compute_L(problem: Problem, relation: PairRelation | None = None, *,
              form: str = "auto", pairs_cap: int = PAIR_CAP
              ) -> tuple[Fraction, QueryDistribution]:
    s = _solve(problem, relation, form, pairs_cap)
    return s.L, QueryDistribution(problem, s.p)


def compute_DL(problem: Problem, relation: PairRelation | None = None, *,
               form: str = "auto", pairs_cap: int = PAIR_CAP
               ) -> tuple[Fraction, QueryDistribution]:
    L, dist = compute_L(problem, relation, form=form, pairs_cap=pairs_cap)
    dl = 1 / (1 - L)
    if eval_DL_given_p(dist, relation) != dl:
        raise ArithmeticError("optimal distribution does not attain DL")
    return dl, dist


def _weight_from_solution(problem: Problem, s: _Solved) -> WeightFunction:
    return WeightFunction(problem, {pair: val for pair, val in zip(s.reps, s.w) if val})


def compute_PL_with_certificate(problem: Problem, relation: PairRelation | None = None, *,
                                form: str = "auto", pairs_cap: int = PAIR_CAP
                                ) -> tuple[Fraction, WeightFunction]:
    s = _solve(problem, relation, form, pairs_cap)
    w = _weight_from_solution(problem, s)
    pl = eval_PL_given_w(w)
    if pl != 1 / (1 - s.L):
        raise ArithmeticError(f"extracted weight gives {pl}, expected {1 / (1 - s.L)}")
    return pl, w


# ---------------------------------------------------------------------------
# evaluators


def _pairs(problem: Problem, relation: PairRelation | None):
    return cross_pairs(problem) if relation is None else iter(relation)


def eval_DL_given_p(dist: QueryDistribution, relation: PairRelation | None = None
                    ) -> Fraction | float:
    """Max over cross-class pairs of ``1 / p(differ set)``; ``math.inf`` when
    some differ set carries no mass."""
    problem = dist.problem
    xs, p = problem.inputs, dist.p
    worst = None
    seen: set[int] = set()
    for a, b in _pairs(problem, relation):
        mask = differ_mask(xs[a], xs[b])
        if mask in seen:
            continue
        seen.add(mask)
        mass = sum((p[i] for i in range(problem.gamma_size) if mask >> i & 1), Fraction(0))
        if mass == 0:
            return INF
        if worst is None or mass < worst:
            worst = mass
    if worst is None:
        raise ValueError("no cross-class pair")
    return 1 / worst


def eval_PL_given_w(w: WeightFunction) -> Fraction:
    """``sum_{x,y} w / max_i sum_{x(i) != y(i)} w`` over ordered pairs."""
    if not w.entries:
        raise ValueError("empty weight function")
    xs = w.problem.inputs
    total = 2 * w.total()
    per_index = [Fraction(0)] * w.problem.gamma_size
    for (a, b), val in w.entries.items():
        for i in range(w.problem.gamma_size):
            if xs[a][i] != xs[b][i]:
                per_index[i] += 2 * val
    return total / max(per_index)


@dataclass(frozen=True)
class AdaptiveValue:
    """Adaptive minimax expression; ``exact`` is set when every term
    ``sqrt(p_x(i) p_y(i))`` on the worst pair is rational."""

    value: float
    exact: Fraction | None
    unbounded: bool = False


def eval_adaptive_minimax(profile: AdaptiveQueryProfile,
                          relation: PairRelation | None = None) -> AdaptiveValue:
    problem = profile.problem
    xs, rows = problem.inputs, profile.p
    best_float = None
    best_exact: Fraction | None = None
    for a, b in _pairs(problem, relation):
        exact_sum: Fraction | None = Fraction(0)
        float_sum = 0.0
        for i in range(problem.gamma_size):
            if xs[a][i] == xs[b][i]:
                continue
            prod = rows[a][i] * rows[b][i]
            root = rows[a][i] if rows[a][i] == rows[b][i] else rational_sqrt(prod)
            if root is None:
                exact_sum = None
                float_sum += math.sqrt(prod)
            else:
                if exact_sum is not None:
                    exact_sum += root
                float_sum += float(root)
        if exact_sum == 0 or (exact_sum is None and float_sum == 0):
            return AdaptiveValue(INF, None, unbounded=True)
        if best_float is None or float_sum < best_float:
            best_float = float_sum
            best_exact = exact_sum
    if best_float is None:
        raise ValueError("no cross-class pair")
    return AdaptiveValue(1 / best_float, None if best_exact is None else 1 / best_exact)


def verify_duality(problem: Problem, relation: PairRelation | None = None, *,
                   form: str = "auto", pairs_cap: int = PAIR_CAP) -> DualityReport:
    """Solve once, then evaluate both certificates independently: the
    distribution through :func:`eval_DL_given_p` and the weight through
    :func:`eval_PL_given_w`. Equal values certify ``DL = PL``."""
    s = _solve(problem, relation, form, pairs_cap)
    dist = QueryDistribution(problem, s.p)
    w = _weight_from_solution(problem, s)
    ok, violations = validate_weight_function(w)
    if not ok:
        raise ArithmeticError("extracted weight invalid: " + violations[0])
    dl = eval_DL_given_p(dist, relation)
    pl = eval_PL_given_w(w)
    if dl == INF:
        raise ArithmeticError("optimal distribution leaves a differ set without mass")
    return DualityReport(s.L, dl, pl, dist, w, dl - pl, restricted=relation is not None)
