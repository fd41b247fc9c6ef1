"""Adversary certificates (weight functions and weight schemes) and the
closed-form bound evaluators built on them.

All quantities are exact ``Fraction``s. Bounds that involve a square root
are stored squared, with ``is_squared`` set on the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .blackbox import PairRelation, Problem, RelationStats, relation_stats

Pair = tuple[int, int]


def _key(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


# ---------------------------------------------------------------------------
# C_eps


@dataclass(frozen=True)
class CEpsilon:
    epsilon: Fraction
    value: float
    exact: Fraction | None
    four_eps_one_minus_eps: Fraction

    @property
    def squared(self) -> float:
        return self.value * self.value


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def c_epsilon(epsilon) -> CEpsilon:
    """The error prefactor ``(1 - 2*sqrt(eps*(1-eps))) / 2``."""
    eps = Fraction(epsilon)
    if not 0 <= eps < Fraction(1, 2):
        raise ValueError(f"epsilon must lie in [0, 1/2), got {eps}")
    prod = eps * (1 - eps)
    root = rational_sqrt(prod)
    exact = (1 - 2 * root) / 2 if root is not None else None
    value = float(exact) if exact is not None else (1 - 2 * math.sqrt(prod)) / 2
    return CEpsilon(eps, value, exact, 4 * prod)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Symmetric weights on unordered input-index pairs.

    Zero entries are dropped; anything else is stored as given so that the
    validator can report it.
    """

    problem: Problem
    entries: Mapping[Pair, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[Pair, Fraction] = {}
        for (a, b), val in dict(self.entries).items():
            val = Fraction(val)
            k = _key(a, b)
            if k in clean and clean[k] != val:
                raise ValueError(f"conflicting weights given for pair {k}")
            if val != 0:
                clean[k] = val
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, pair: Pair) -> Fraction:
        return self.entries.get(_key(*pair), Fraction(0))

    @cached_property
    def neighbours(self) -> dict[int, list[tuple[int, Fraction]]]:
        nb: dict[int, list[tuple[int, Fraction]]] = {}
        for (a, b), val in self.entries.items():
            nb.setdefault(a, []).append((b, val))
            nb.setdefault(b, []).append((a, val))
        return nb

    def wt(self, x: int) -> Fraction:
        return sum((val for _, val in self.neighbours.get(x, ())), Fraction(0))

    def v(self, x: int, i: int) -> Fraction:
        xs = self.problem.inputs
        return sum((val for y, val in self.neighbours.get(x, ()) if xs[y][i] != xs[x][i]),
                   Fraction(0))

    @cached_property
    def _v_table(self) -> dict[int, list[Fraction]]:
        return {x: [self.v(x, i) for i in range(self.problem.gamma_size)]
                for x in self.neighbours}

    def v_row(self, x: int) -> list[Fraction]:
        return self._v_table.get(x) or [Fraction(0)] * self.problem.gamma_size

    def total(self) -> Fraction:
        """Sum over unordered pairs."""
        return sum(self.entries.values(), Fraction(0))


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """A weight function plus per-query weights on ordered pairs."""

    base: WeightFunction
    primed: Mapping[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, val in dict(self.primed).items():
            val = Fraction(val)
            if val != 0:
                clean[tuple(key)] = val
        object.__setattr__(self, "primed", dict(sorted(clean.items())))

    @property
    def problem(self) -> Problem:
        return self.base.problem

    def wt(self, x: int) -> Fraction:
        return self.base.wt(x)

    @cached_property
    def _v_table(self) -> dict[tuple[int, int], Fraction]:
        table: dict[tuple[int, int], Fraction] = {}
        for (x, _, i), val in self.primed.items():
            table[(x, i)] = table.get((x, i), Fraction(0)) + val
        return table

    def v(self, x: int, i: int) -> Fraction:
        return self._v_table.get((x, i), Fraction(0))


def weight_stats(cert: WeightFunction | WeightScheme, x: int,
                 i: int | None = None) -> tuple[Fraction, Fraction | None]:
    """``(wt(x), v(x, i))``; the second item is None when ``i`` is omitted."""
    problem = cert.problem
    if not 0 <= x < len(problem):
        raise IndexError(f"input index {x} out of range")
    if i is not None and not 0 <= i < problem.gamma_size:
        raise IndexError(f"query index {i} out of range")
    return cert.wt(x), (cert.v(x, i) if i is not None else None)


def weight_from_relation(problem: Problem, relation: PairRelation | Iterable[Pair],
                         value=1) -> WeightFunction:
    pairs = relation.pairs if isinstance(relation, PairRelation) else relation
    return WeightFunction(problem, {p: Fraction(value) for p in pairs})


def validate_weight_function(w: WeightFunction) -> tuple[bool, list[str]]:
    problem = w.problem
    n = len(problem)
    violations = []
    for (a, b), val in w.entries.items():
        if not (0 <= a < n and 0 <= b < n):
            violations.append(f"pair ({a}, {b}): index out of range")
            continue
        if a == b:
            violations.append(f"pair ({a}, {b}): weight on a diagonal pair")
        if val < 0:
            violations.append(f"pair ({a}, {b}): negative weight {val}")
        if problem.outputs[a] == problem.outputs[b]:
            violations.append(f"pair ({a}, {b}): positive weight on inputs with equal output "
                              f"{problem.outputs[a]}")
    return not violations, violations


def validate_weight_scheme(scheme: WeightScheme) -> tuple[bool, list[str]]:
    ok, violations = validate_weight_function(scheme.base)
    if not ok:
        return False, violations
    problem = scheme.problem
    xs, out = problem.inputs, problem.outputs
    n, g = len(problem), problem.gamma_size
    for (x, y, i), val in scheme.primed.items():
        if not (0 <= x < n and 0 <= y < n and 0 <= i < g):
            violations.append(f"triple ({x}, {y}, {i}): index out of range")
            continue
        if val < 0:
            violations.append(f"triple ({x}, {y}, {i}): negative weight {val}")
        if xs[x][i] == xs[y][i]:
            violations.append(f"triple ({x}, {y}, {i}): weight where x(i) = y(i)")
        if out[x] == out[y]:
            violations.append(f"triple ({x}, {y}, {i}): weight on inputs with equal output")
    for (x, y), val in scheme.base.entries.items():
        for i in range(g):
            if xs[x][i] == xs[y][i]:
                continue
            prod = scheme.primed.get((x, y, i), 0) * scheme.primed.get((y, x, i), 0)
            if prod < val * val:
                violations.append(f"triple ({x}, {y}, {i}): w'(x,y,i) w'(y,x,i) = {prod} "
                                  f"< w(x,y)^2 = {val * val}")
    return not violations, violations


def scheme_from_function(w: WeightFunction) -> WeightScheme:
    """Per-query weights equal to ``w(x, y)`` wherever ``x(i) != y(i)``."""
    ok, violations = validate_weight_function(w)
    if not ok:
        raise ValueError("invalid weight function: " + violations[0])
    xs = w.problem.inputs
    primed = {}
    for (x, y), val in w.entries.items():
        for i in range(w.problem.gamma_size):
            if xs[x][i] != xs[y][i]:
                primed[(x, y, i)] = val
                primed[(y, x, i)] = val
    return WeightScheme(w, primed)


def lift_for_comparison(w: WeightFunction, s: int) -> WeightFunction:
    """Keep only the pairs with at least one endpoint in output class ``s``."""
    out = w.problem.outputs
    if s not in out:
        raise ValueError(f"output label {s} does not occur in the problem")
    return WeightFunction(w.problem, {(a, b): val for (a, b), val in w.entries.items()
                                      if out[a] == s or out[b] == s})


# ---------------------------------------------------------------------------
# reports

KINDS = ("weighted_adversary", "probabilistic", "direct_nonadaptive", "unweighted",
         "minimax_DL", "minimax_PL", "adaptive_minimax")


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound.

    ``value`` is the exact expression (squared when ``is_squared``); the
    query-count lower bound is ``prefactor * sqrt(value)`` or
    ``prefactor * value``. ``prefactor_power`` says whether the prefactor is
    C_eps (1), C_eps squared (2), or absent (0, asymptotic bound only).
    """

    kind: str
    value: Fraction | None
    epsilon: Fraction = Fraction(0)
    is_squared: bool = False
    prefactor_power: int = 1
    unbounded: bool = False
    details: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.value is not None and self.value < 0:
            raise ValueError("bound values are nonnegative")
        c_epsilon(self.epsilon)

    @property
    def value_float(self) -> float:
        if self.value is None:
            return math.inf
        return math.sqrt(self.value) if self.is_squared else float(self.value)

    @property
    def prefactor(self) -> float:
        return c_epsilon(self.epsilon).value ** self.prefactor_power

    @property
    def prefactor_exact(self) -> Fraction | None:
        c = c_epsilon(self.epsilon).exact
        return None if c is None else c ** self.prefactor_power

    @property
    def bound(self) -> float:
        return self.prefactor * self.value_float


class NoQualifyingTriple(ValueError):
    """The certificate has no pair/index the evaluator can range over."""


def _min_or_raise(best: Fraction | None, what: str) -> Fraction:
    if best is None:
        raise NoQualifyingTriple(f"no qualifying {what}")
    return best


def eval_weighted_adversary(scheme: WeightScheme, epsilon=0) -> BoundReport:
    """Squared weighted adversary expression: the minimum of
    ``wt(x) wt(y) / (v(x,i) v(y,i))`` over ``w(x,y) > 0``, ``x(i) != y(i)``."""
    xs = scheme.problem.inputs
    best = None
    where = None
    for (x, y), val in scheme.base.entries.items():
        if val <= 0:
            continue
        wx, wy = scheme.wt(x), scheme.wt(y)
        for i in range(scheme.problem.gamma_size):
            if xs[x][i] == xs[y][i]:
                continue
            denom = scheme.v(x, i) * scheme.v(y, i)
            if denom == 0:
                continue
            r = wx * wy / denom
            if best is None or r < best:
                best, where = r, (x, y, i)
    best = _min_or_raise(best, "triple")
    return BoundReport("weighted_adversary", best, Fraction(epsilon), is_squared=True,
                       prefactor_power=1, details={"argmin": where})


def eval_probabilistic(w: WeightFunction, epsilon=Fraction(1, 3)) -> BoundReport:
    """Minimum over ``w(x,y) > 0``, ``x(i) != y(i)`` of
    ``max(wt(x)/v(x,i), wt(y)/v(y,i))`` for this one weight function."""
    xs = w.problem.inputs
    best = None
    where = None
    for (x, y), val in w.entries.items():
        if val <= 0:
            continue
        wx, wy = w.wt(x), w.wt(y)
        vx, vy = w.v_row(x), w.v_row(y)
        for i in range(w.problem.gamma_size):
            if xs[x][i] == xs[y][i]:
                continue
            # v(x,i) >= w(x,y) > 0 here
            r = max(wx / vx[i], wy / vy[i])
            if best is None or r < best:
                best, where = r, (x, y, i)
    best = _min_or_raise(best, "triple")
    return BoundReport("probabilistic", best, Fraction(epsilon), prefactor_power=0,
                       details={"argmin": where})


def class_ratios(w: WeightFunction) -> dict[int, Fraction]:
    """For each output class touched by ``w``: min of ``wt(x)/v(x,i)`` over
    its inputs with ``wt(x) > 0`` and indices with ``v(x,i) > 0``."""
    out = w.problem.outputs
    ratios: dict[int, Fraction] = {}
    for x in w.neighbours:
        wx = w.wt(x)
        if wx <= 0:
            continue
        for vi in w.v_row(x):
            if vi > 0:
                r = wx / vi
                s = out[x]
                if s not in ratios or r < ratios[s]:
                    ratios[s] = r
    return dict(sorted(ratios.items()))


def eval_direct_nonadaptive(w: WeightFunction, epsilon=0) -> BoundReport:
    """Max over output classes of the class ratio (see :func:`class_ratios`).

    Classes that ``w`` does not touch are skipped rather than counted as
    +infinity.
    """
    ratios = class_ratios(w)
    if not ratios:
        raise NoQualifyingTriple("weight function touches no input")
    s, best = max(ratios.items(), key=lambda t: (t[1], -t[0]))
    return BoundReport("direct_nonadaptive", best, Fraction(epsilon), prefactor_power=2,
                       details={"class": s, "class_ratios": ratios})


def comparison_sides(w: WeightFunction, s: int) -> tuple[Fraction, Fraction] | None:
    """``(L_P witness from the lifted weight, class-s direct expression)``,
    or None when ``w`` does not touch class ``s``."""
    rhs = class_ratios(w).get(s)
    if rhs is None:
        return None
    lhs = eval_probabilistic(lift_for_comparison(w, s)).value
    return lhs, rhs


def unweighted_bound(problem: Problem, relation: PairRelation, x_class: int,
                     epsilon=0) -> BoundReport:
    """``max(m/l, m'/l')`` for the relation, cross-checked against the direct
    evaluator on the all-ones weight over the relation."""
    if x_class not in problem.outputs:
        raise ValueError(f"output label {x_class} does not occur in the problem")
    stats = relation_stats(problem, relation, x_class)
    value = max(Fraction(stats.m, stats.l), Fraction(stats.m_prime, stats.l_prime))
    direct = eval_direct_nonadaptive(weight_from_relation(problem, relation)).value
    if direct < value:
        raise ArithmeticError(f"direct evaluation {direct} fell below max(m/l, m'/l') = {value}")
    details: dict = {"stats": stats, "direct_all_ones": direct}
    others = {problem.outputs[b] if problem.outputs[a] == x_class else problem.outputs[a]
              for a, b in relation.pairs}
    if len(others) == 1:
        details["transposed"] = relation_stats(problem, relation, others.pop())
    return BoundReport("unweighted", value, Fraction(epsilon), prefactor_power=2,
                       details=details)


__all__ = [
    "BoundReport", "CEpsilon", "NoQualifyingTriple", "RelationStats", "WeightFunction",
    "WeightScheme", "c_epsilon", "class_ratios", "comparison_sides", "eval_direct_nonadaptive",
    "eval_probabilistic", "eval_weighted_adversary", "lift_for_comparison", "rational_sqrt",
    "scheme_from_function", "unweighted_bound", "validate_weight_function",
    "validate_weight_scheme", "weight_from_relation", "weight_stats",
]
