"""Super queries: bundling a k-tuple of queries into one query.

The derived problem has query domain ``Gamma^k`` (tuples in lexicographic
order, repeats included) and alphabet ``Sigma^k``; a symbol
``(x(i_1), ..., x(i_k))`` is encoded as the base-``sigma`` integer with
``x(i_1)`` most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .adversary import WeightFunction, validate_weight_function
from .blackbox import CapError, Problem

SUPER_GAMMA_CAP = 4096


@dataclass(frozen=True)
class SuperProblem:
    base: Problem
    k: int
    problem: Problem
    tuples: tuple[tuple[int, ...], ...]

    def tuple_index(self, I: Sequence[int]) -> int:
        if len(I) != self.k:
            raise ValueError(f"tuple has length {len(I)}, expected {self.k}")
        g = self.base.gamma_size
        idx = 0
        for i in I:
            if not 0 <= i < g:
                raise IndexError(f"query index {i} out of range")
            idx = idx * g + i
        return idx

    def decode(self, symbol: int) -> tuple[int, ...]:
        s = self.base.sigma_size
        out = []
        for _ in range(self.k):
            symbol, r = divmod(symbol, s)
            out.append(r)
        return tuple(reversed(out))


def build_super_problem(problem: Problem, k: int, cap: int = SUPER_GAMMA_CAP) -> SuperProblem:
    if k < 1:
        raise ValueError("k must be a positive integer")
    g, s = problem.gamma_size, problem.sigma_size
    if g ** k > cap:
        raise CapError(f"super query domain {g}^{k} = {g ** k} exceeds cap {cap}")
    tuples = tuple(itertools.product(range(g), repeat=k))

    def superbox(x):
        row = []
        for I in tuples:
            code = 0
            for i in I:
                code = code * s + x[i]
            row.append(code)
        return tuple(row)

    derived = Problem(s ** k, g ** k, tuple(superbox(x) for x in problem.inputs),
                      problem.outputs, f"{problem.name} ^{k}".strip())
    return SuperProblem(problem, k, derived, tuples)


@dataclass(frozen=True)
class LiftedWeight:
    base: WeightFunction
    sp: SuperProblem
    weight: WeightFunction


def lift_weight(w: WeightFunction, sp: SuperProblem) -> LiftedWeight:
    """Carry ``w`` over to the super problem: ``W(kx, ky) = w(x, y)``."""
    if w.problem is not sp.base and w.problem != sp.base:
        raise ValueError("weight function belongs to a different problem")
    ok, violations = validate_weight_function(w)
    if not ok:
        raise ValueError("invalid base weight: " + violations[0])
    return LiftedWeight(w, sp, WeightFunction(sp.problem, w.entries))


@dataclass(frozen=True)
class RatioCheck:
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool
    vacuous: bool = False


def check_super_query_ratio(lw: LiftedWeight, x: int, I: Sequence[int]) -> RatioCheck:
    """Compare ``WT(kx) / V(kx, I)`` with ``(1/k) min_j wt(x) / v(x, i_j)``.

    ``V`` is computed on the materialised super problem and ``v`` on the
    base problem. Indices with ``v(x, i_j) = 0`` drop out of the min.
    """
    sp = lw.sp
    big_v = lw.weight.v(x, sp.tuple_index(I))
    wt = lw.base.wt(x)
    finite = [wt / lw.base.v(x, i) for i in I if lw.base.v(x, i) > 0]
    if big_v == 0:
        return RatioCheck(None, None, holds=True, vacuous=True)
    lhs = lw.weight.wt(x) / big_v
    rhs = Fraction(1, sp.k) * min(finite)
    return RatioCheck(lhs, rhs, lhs >= rhs)


check_facteurk = check_super_query_ratio


def super_v_sum(lw: LiftedWeight, x: int, I: Sequence[int]) -> tuple[Fraction, Fraction]:
    """``(V(kx, I), v(x, i_1) + ... + v(x, i_k))``; the first never exceeds
    the second."""
    return lw.weight.v(x, lw.sp.tuple_index(I)), sum((lw.base.v(x, i) for i in I), Fraction(0))


def two_class_sides(lw: LiftedWeight) -> tuple[Fraction, Fraction]:
    """Both sides of the two-class inequality for the lifted weight.

    Left: the squared weighted adversary minimum on the super problem,
    ``min WT(kx) WT(ky) / (V(kx,I) V(ky,I))`` over ``W > 0`` and
    ``kx(I) != ky(I)``. Right: ``1/k`` times the minimum over ``w(x,y) > 0``
    of ``max(min_i wt(x)/v(x,i), min_i wt(y)/v(y,i))`` on the base.
    """
    W, w = lw.weight, lw.base
    if not w.entries:
        raise ValueError("empty weight function")
    xs = W.problem.inputs
    lhs = None
    for (a, b) in W.entries:
        wa, wb = W.wt(a), W.wt(b)
        va, vb = W.v_row(a), W.v_row(b)
        for t in range(W.problem.gamma_size):
            if xs[a][t] != xs[b][t]:
                r = wa * wb / (va[t] * vb[t])
                if lhs is None or r < lhs:
                    lhs = r

    def best_ratio(x):
        return min(w.wt(x) / v for v in w.v_row(x) if v > 0)

    rhs = min(max(best_ratio(a), best_ratio(b)) for a, b in w.entries)
    return lhs, Fraction(1, lw.sp.k) * rhs


def coarsen_outputs(problem: Problem, mapping: Mapping[int, int]) -> Problem:
    """Relabel outputs through ``mapping``; weights valid for the coarsened
    problem stay valid for the original."""
    missing = sorted(set(problem.outputs) - set(mapping))
    if missing:
        raise ValueError(f"mapping does not cover output labels {missing}")
    return Problem(problem.sigma_size, problem.gamma_size, problem.inputs,
                   tuple(mapping[o] for o in problem.outputs),
                   f"{problem.name} coarsened".strip())
