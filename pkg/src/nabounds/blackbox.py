"""Finite black-box promise problems and the standard problem families.

A problem is an explicit list of black boxes ``x: Gamma -> Sigma`` (vectors of
length ``gamma_size`` over ``range(sigma_size)``) together with one output
label per box. Query indices are 0-based throughout.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

GAMMA_CAP = 24
INPUT_CAP = 20_000
PAIR_CAP = 2_000_000

FAMILIES = (
    "unordered_search",
    "ordered_search",
    "element_distinctness",
    "connectivity",
    "bipartiteness",
)


class CapError(ValueError):
    """An enumeration would exceed one of the desk-scale caps."""


@dataclass(frozen=True)
class Problem:
    sigma_size: int
    gamma_size: int
    inputs: tuple[tuple[int, ...], ...]
    outputs: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(tuple(int(v) for v in x) for x in self.inputs))
        object.__setattr__(self, "outputs", tuple(int(o) for o in self.outputs))
        if self.sigma_size < 1 or self.gamma_size < 1:
            raise ValueError("sigma_size and gamma_size must be positive")
        if len(self.inputs) != len(self.outputs):
            raise ValueError(
                f"{len(self.inputs)} inputs but {len(self.outputs)} outputs")
        for k, x in enumerate(self.inputs):
            if len(x) != self.gamma_size:
                raise ValueError(f"input {k} has length {len(x)}, expected {self.gamma_size}")
            if any(v < 0 or v >= self.sigma_size for v in x):
                raise ValueError(f"input {k} has an entry outside [0, {self.sigma_size})")
        if len(set(self.inputs)) != len(self.inputs):
            raise ValueError("inputs are not pairwise distinct")

    def __len__(self) -> int:
        return len(self.inputs)

    @property
    def labels(self) -> list[int]:
        return sorted(set(self.outputs))

    def class_members(self, label: int) -> list[int]:
        return [k for k, o in enumerate(self.outputs) if o == label]

    def content_hash(self) -> str:
        payload = json.dumps(
            [self.sigma_size, self.gamma_size, self.inputs, self.outputs],
            separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "sigma_size": self.sigma_size,
            "gamma_size": self.gamma_size,
            "inputs": [list(x) for x in self.inputs],
            "outputs": list(self.outputs),
        }


def differ_mask(x: Sequence[int], y: Sequence[int]) -> int:
    """Bitmask of the positions where ``x`` and ``y`` disagree."""
    mask = 0
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            mask |= 1 << i
    return mask


def differ_indices(problem: Problem, a: int, b: int) -> set[int]:
    x, y = problem.inputs[a], problem.inputs[b]
    return {i for i in range(problem.gamma_size) if x[i] != y[i]}


def cross_pairs(problem: Problem) -> Iterator[tuple[int, int]]:
    """All unordered pairs ``(a, b)``, ``a < b``, with different outputs."""
    out = problem.outputs
    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            if out[a] != out[b]:
                yield a, b


def count_cross_pairs(problem: Problem) -> int:
    total = len(problem.outputs)
    same = sum(c * (c - 1) // 2 for c in
               (problem.outputs.count(s) for s in problem.labels))
    return total * (total - 1) // 2 - same


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class PairRelation:
    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "PairRelation":
        return cls(frozenset((min(a, b), max(a, b)) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def check(self, problem: Problem) -> None:
        n = len(problem)
        for a, b in self.pairs:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError(f"pair ({a}, {b}) is not a pair of distinct inputs")
            if problem.outputs[a] == problem.outputs[b]:
                raise ValueError(f"pair ({a}, {b}) joins inputs with the same output")


@dataclass(frozen=True)
class RelationStats:
    m: int
    m_prime: int
    l: int
    l_prime: int


def relation_stats(problem: Problem, relation: PairRelation, x_class: int) -> RelationStats:
    """Degree statistics of the unweighted adversary relation.

    ``X`` is the set of related inputs whose output is ``x_class``; ``Y`` is
    the set of their partners. Every pair must have exactly one endpoint in X.
    """
    if not relation.pairs:
        raise ValueError("empty relation")
    relation.check(problem)
    partners: dict[int, list[int]] = {}
    for a, b in relation.pairs:
        in_a = problem.outputs[a] == x_class
        in_b = problem.outputs[b] == x_class
        if in_a == in_b:
            raise ValueError(f"pair ({a}, {b}) does not have exactly one endpoint in class {x_class}")
        partners.setdefault(a, []).append(b)
        partners.setdefault(b, []).append(a)

    def side(members: list[int]) -> tuple[int, int]:
        degree = min(len(partners[k]) for k in members)
        worst = 0
        for k in members:
            x = problem.inputs[k]
            for i in range(problem.gamma_size):
                c = sum(1 for j in partners[k] if problem.inputs[j][i] != x[i])
                worst = max(worst, c)
        return degree, worst

    xs = sorted(k for k in partners if problem.outputs[k] == x_class)
    ys = sorted(k for k in partners if problem.outputs[k] != x_class)
    m, l = side(xs)
    m_prime, l_prime = side(ys)
    return RelationStats(m=m, m_prime=m_prime, l=l, l_prime=l_prime)


def star_relation(problem: Problem) -> PairRelation:
    """Pairs (all-zeros, e_i): the unordered-search relation."""
    zero = tuple([0] * problem.gamma_size)
    try:
        z = problem.inputs.index(zero)
    except ValueError:
        raise ValueError("star relation needs the all-zeros input") from None
    return PairRelation.of(
        (z, k) for k, x in enumerate(problem.inputs)
        if sum(1 for v in x if v != 0) == 1 and problem.outputs[k] != problem.outputs[z])


def hamming_relation(problem: Problem, distance: int = 1) -> PairRelation:
    """Cross-class pairs at exactly the given Hamming distance."""
    return PairRelation.of(
        (a, b) for a, b in cross_pairs(problem)
        if bin(differ_mask(problem.inputs[a], problem.inputs[b])).count("1") == distance)


def adjacent_relation(problem: Problem) -> PairRelation:
    """Pairs whose output labels differ by exactly one (adjacent thresholds)."""
    out = problem.outputs
    return PairRelation.of((a, b) for a, b in cross_pairs(problem) if abs(out[a] - out[b]) == 1)


def two_swap_relation(problem: Problem) -> PairRelation:
    """Cycle / two-cycle pairs related by one 2-edge swap.

    ``x`` (one cycle) and ``y`` (two cycles) are related when ``G_x`` loses two
    disjoint edges ``ab, cd`` and gains ``ac, bd``.
    """
    n = _vertices_from_slots(problem.gamma_size)
    slots = edge_slots(n)
    pairs = []
    for a, b in cross_pairs(problem):
        x, y = problem.inputs[a], problem.inputs[b]
        gone = [slots[i] for i in range(len(slots)) if x[i] and not y[i]]
        new = [slots[i] for i in range(len(slots)) if y[i] and not x[i]]
        if len(gone) != 2 or len(new) != 2:
            continue
        if _disjoint(gone) and _disjoint(new) and \
                set(gone[0] + gone[1]) == set(new[0] + new[1]):
            pairs.append((a, b))
    return PairRelation.of(pairs)


def all_pairs_relation(problem: Problem) -> PairRelation:
    return PairRelation.of(cross_pairs(problem))


def _disjoint(edges: list[tuple[int, int]]) -> bool:
    return not set(edges[0]) & set(edges[1])


NAMED_RELATIONS = {
    "star": star_relation,
    "distance1": hamming_relation,
    "adjacent": adjacent_relation,
    "two_swap": two_swap_relation,
    "all": all_pairs_relation,
}


# ---------------------------------------------------------------------------
# graphs as edge-slot bit vectors


def edge_slots(n: int) -> list[tuple[int, int]]:
    """Edge slots ``(i, j)`` with ``j < i``, row-major in ``i``."""
    return [(i, j) for i in range(1, n) for j in range(i)]


def _vertices_from_slots(count: int) -> int:
    n = 1
    while n * (n - 1) // 2 < count:
        n += 1
    if n * (n - 1) // 2 != count:
        raise ValueError(f"{count} is not a triangular number of edge slots")
    return n


def graph_vector(n: int, edges: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    index = {e: k for k, e in enumerate(edge_slots(n))}
    vec = [0] * len(index)
    for u, v in edges:
        vec[index[(max(u, v), min(u, v))]] = 1
    return tuple(vec)


def graph_edges(vec: Sequence[int]) -> list[tuple[int, int]]:
    n = _vertices_from_slots(len(vec))
    return [e for e, bit in zip(edge_slots(n), vec) if bit]


def _cycle_edges(order: Sequence[int]) -> list[tuple[int, int]]:
    return [(order[k], order[(k + 1) % len(order)]) for k in range(len(order))]


def _cycles_on(vertices: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    """Every undirected cycle through all of ``vertices`` (at least 3)."""
    first, rest = vertices[0], vertices[1:]
    for perm in itertools.permutations(rest):
        if perm[0] < perm[-1]:
            yield _cycle_edges((first,) + perm)


def _is_bipartite(n: int, edges: list[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    colour = [-1] * n
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True


# ---------------------------------------------------------------------------
# generators


def _check_gamma(gamma: int, cap: int) -> None:
    if gamma > cap:
        raise CapError(f"query domain size {gamma} exceeds cap {cap}")


def _check_inputs(count: int, cap: int) -> None:
    if count > cap:
        raise CapError(f"input count {count} exceeds cap {cap}")


def _assemble(sigma: int, gamma: int, labelled: Iterable[tuple[tuple[int, ...], int]],
              name: str) -> Problem:
    ordered = sorted(labelled, key=lambda t: (t[1], t[0]))
    return Problem(sigma, gamma, tuple(x for x, _ in ordered),
                   tuple(o for _, o in ordered), name)


def normalize_family(family: str) -> str:
    key = family.strip().lower().replace("-", "_")
    if key not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    return key


def generate(family: str, size: int, *, gamma_cap: int = GAMMA_CAP,
             input_cap: int = INPUT_CAP) -> Problem:
    """Build the complete promise problem for ``family`` at ``size``.

    Inputs are sorted lexicographically within each output class, classes in
    ascending label order.
    """
    family = normalize_family(family)
    if size < 1:
        raise ValueError("size must be positive")
    name = f"{family} {size}"

    if family == "unordered_search":
        _check_gamma(size, gamma_cap)
        _check_inputs(2 ** size, input_cap)
        boxes = itertools.product((0, 1), repeat=size)
        return _assemble(2, size, ((x, int(any(x))) for x in boxes), name)

    if family == "ordered_search":
        _check_gamma(size, gamma_cap)
        _check_inputs(size, input_cap)
        # threshold t (1-based) has ones at positions >= t
        boxes = ((tuple(int(j >= t - 1) for j in range(size)), t) for t in range(1, size + 1))
        return _assemble(2, size, boxes, name)

    if family == "element_distinctness":
        _check_gamma(size, gamma_cap)
        _check_inputs(size ** size, input_cap)
        boxes = itertools.product(range(size), repeat=size)
        return _assemble(size, size, ((x, int(len(set(x)) != size)) for x in boxes), name)

    gamma = size * (size - 1) // 2
    _check_gamma(gamma, gamma_cap)

    if family == "bipartiteness":
        _check_inputs(2 ** gamma, input_cap)
        labelled = []
        for x in itertools.product((0, 1), repeat=gamma):
            labelled.append((x, int(_is_bipartite(size, graph_edges(x)))))
        return _assemble(2, gamma, labelled, name)

    # connectivity
    if size < 6:
        raise ValueError("connectivity needs n >= 6: two disjoint cycles need 3 vertices each")
    vertices = list(range(size))
    one_cycle = [graph_vector(size, c) for c in _cycles_on(vertices)]
    two_cycles = []
    for a in range(3, size - 2):
        for part in itertools.combinations(vertices[1:], a - 1):
            left = [0, *part]
            right = [v for v in vertices if v not in left]
            for c1 in _cycles_on(left):
                for c2 in _cycles_on(right):
                    two_cycles.append(graph_vector(size, c1 + c2))
    _check_inputs(len(one_cycle) + len(two_cycles), input_cap)
    labelled = [(x, 1) for x in one_cycle] + [(x, 0) for x in two_cycles]
    return _assemble(2, gamma, labelled, name)


# ---------------------------------------------------------------------------
# problem files


def problem_from_dict(data: dict, **caps) -> Problem:
    if "family" in data:
        return generate(data["family"], int(data["size"]), **caps)
    for key in ("sigma_size", "gamma_size", "inputs", "outputs"):
        if key not in data:
            raise ValueError(f"problem file is missing {key!r}")

    def exact_int(v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"non-integer value {v!r} in problem file")
        return v

    return Problem(
        sigma_size=exact_int(data["sigma_size"]),
        gamma_size=exact_int(data["gamma_size"]),
        inputs=tuple(tuple(exact_int(v) for v in x) for x in data["inputs"]),
        outputs=tuple(exact_int(v) for v in data["outputs"]),
        name=str(data.get("name", "")),
    )


def load_problem(path, **caps) -> Problem:
    with open(path) as fh:
        return problem_from_dict(json.load(fh), **caps)


def dump_problem(problem: Problem, path) -> None:
    with open(path, "w") as fh:
        json.dump(problem.to_dict(), fh)
        fh.write("\n")
