"""Hand-built certificates for the standard problem families."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .adversary import WeightFunction, weight_from_relation
from .blackbox import (Problem, adjacent_relation, hamming_relation, normalize_family,
                       star_relation, two_swap_relation, _vertices_from_slots)


def star_weight(problem: Problem) -> WeightFunction:
    """Unit weight between the all-zeros box and each unit vector."""
    return weight_from_relation(problem, star_relation(problem))


def adjacent_threshold_weight(problem: Problem) -> WeightFunction:
    """Unit weight on thresholds whose leftmost ones are adjacent."""
    return weight_from_relation(problem, adjacent_relation(problem))


def distance_one_weight(problem: Problem) -> WeightFunction:
    return weight_from_relation(problem, hamming_relation(problem, 1))


def two_swap_weight(problem: Problem) -> WeightFunction:
    """Unit weight on (one cycle, two cycles) pairs related by a 2-edge swap."""
    return weight_from_relation(problem, two_swap_relation(problem))


DEFAULT_WEIGHTS = {
    "unordered_search": star_weight,
    "ordered_search": adjacent_threshold_weight,
    "element_distinctness": distance_one_weight,
    "connectivity": two_swap_weight,
}


def default_weight(family: str, problem: Problem) -> WeightFunction:
    return DEFAULT_WEIGHTS[normalize_family(family)](problem)


@dataclass(frozen=True)
class EdgeSymmetry:
    per_edge: tuple[Fraction, ...]
    max_edge: Fraction
    scaled_total: Fraction

    @property
    def holds(self) -> bool:
        return self.max_edge == self.scaled_total

    @property
    def edge_invariant(self) -> bool:
        return len(set(self.per_edge)) == 1


def edge_symmetry(w: WeightFunction) -> EdgeSymmetry:
    """Per-edge separable weight against ``8 / (n(n-1))`` times the total
    weight, both summed over ordered pairs."""
    problem = w.problem
    n = _vertices_from_slots(problem.gamma_size)
    xs = problem.inputs
    per_edge = [Fraction(0)] * problem.gamma_size
    for (a, b), val in w.entries.items():
        for e in range(problem.gamma_size):
            if xs[a][e] != xs[b][e]:
                per_edge[e] += 2 * val
    total = 2 * w.total()
    return EdgeSymmetry(tuple(per_edge), max(per_edge), Fraction(8, n * (n - 1)) * total)
