import itertools

import pytest

from nabounds.blackbox import (CapError, PairRelation, Problem, RelationStats, differ_indices,
                               dump_problem, edge_slots, generate, graph_edges,
                               hamming_relation, load_problem, problem_from_dict,
                               relation_stats, star_relation)

from oracles import bipartite_by_colourings, is_injective, union_find_components


class TestProblem:
    def test_rejects_duplicate_inputs(self):
        with pytest.raises(ValueError, match="distinct"):
            Problem(2, 2, ((0, 1), (0, 1)), (0, 1))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            Problem(2, 2, ((0, 1), (1, 1)), (0,))

    def test_rejects_out_of_alphabet(self):
        with pytest.raises(ValueError):
            Problem(2, 2, ((0, 2),), (0,))

    def test_roundtrip_file(self, tmp_path):
        p = generate("ordered_search", 5)
        dump_problem(p, tmp_path / "p.json")
        assert load_problem(tmp_path / "p.json") == p

    def test_family_reference(self):
        assert problem_from_dict({"family": "unordered-search", "size": 3}) == \
            generate("unordered_search", 3)

    def test_rejects_non_integer_entries(self):
        with pytest.raises(ValueError):
            problem_from_dict({"sigma_size": 2, "gamma_size": 1, "inputs": [[0.5]],
                               "outputs": [0]})


class TestGenerate:
    def test_unordered_search(self):
        p = generate("unordered_search", 3)
        assert len(p) == 8
        assert all(o == int(any(x)) for x, o in zip(p.inputs, p.outputs))
        assert p.inputs[0] == (0, 0, 0)

    def test_ordered_search(self):
        p = generate("ordered_search", 4)
        assert p.inputs == ((1, 1, 1, 1), (0, 1, 1, 1), (0, 0, 1, 1), (0, 0, 0, 1))
        assert p.outputs == (1, 2, 3, 4)

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_ordered_search_adjacent_thresholds_differ_once(self, n):
        p = generate("ordered_search", n)
        for a in range(n - 1):
            assert len(differ_indices(p, a, a + 1)) == 1

    def test_element_distinctness(self):
        p = generate("element_distinctness", 3)
        assert len(p) == 27
        injective = [x for x in itertools.product(range(3), repeat=3) if is_injective(x)]
        assert p.outputs.count(0) == len(injective) == 6
        for x, o in zip(p.inputs, p.outputs):
            assert (o == 0) == is_injective(x)

    def test_connectivity_counts_and_predicate(self):
        n = 6
        p = generate("connectivity", n)
        # brute force over all 2^15 graphs: 2-regular spanning graphs, split by components
        one, two = 0, 0
        for bits in itertools.product((0, 1), repeat=n * (n - 1) // 2):
            edges = graph_edges(bits)
            deg = [0] * n
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            if all(d == 2 for d in deg):
                c = union_find_components(n, edges)
                one += c == 1
                two += c == 2
        assert (one, two) == (60, 10)
        assert p.outputs.count(1) == 60 and p.outputs.count(0) == 10
        for x, o in zip(p.inputs, p.outputs):
            edges = graph_edges(x)
            assert len(edges) == n
            assert union_find_components(n, edges) == (1 if o == 1 else 2)
            deg = [0] * n
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            assert set(deg) == {2}

    def test_connectivity_rejects_small_n(self):
        with pytest.raises(ValueError):
            generate("connectivity", 5)

    def test_bipartiteness(self):
        p = generate("bipartiteness", 4)
        assert len(p) == 64
        for x, o in zip(p.inputs, p.outputs):
            assert o == int(bipartite_by_colourings(4, graph_edges(x)))

    def test_edge_slot_order(self):
        assert edge_slots(4) == [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]

    def test_deterministic(self):
        assert generate("element_distinctness", 3) == generate("element_distinctness", 3)

    def test_class_ordering(self):
        p = generate("unordered_search", 4)
        keyed = list(zip(p.outputs, p.inputs))
        assert keyed == sorted(keyed)

    @pytest.mark.parametrize("family,size", [("unordered_search", 25),
                                             ("element_distinctness", 6),
                                             ("bipartiteness", 6)])
    def test_caps(self, family, size):
        with pytest.raises(CapError):
            generate(family, size)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            generate("simon", 3)


class TestDifferIndices:
    # 0-based positions
    def test_single_bit(self):
        p = generate("unordered_search", 3)
        a, b = p.inputs.index((0, 0, 0)), p.inputs.index((0, 1, 0))
        assert differ_indices(p, a, b) == {1}

    def test_identical(self):
        p = generate("unordered_search", 3)
        assert differ_indices(p, 3, 3) == set()

    def test_complement(self):
        p = generate("unordered_search", 3)
        a, b = p.inputs.index((0, 0, 0)), p.inputs.index((1, 1, 1))
        assert differ_indices(p, a, b) == {0, 1, 2}


class TestRelationStats:
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_unordered_search_star(self, n):
        p = generate("unordered_search", n)
        assert relation_stats(p, star_relation(p), 0) == RelationStats(n, 1, 1, 1)

    @pytest.mark.parametrize("n", [3, 4])
    def test_element_distinctness_distance_one(self, n):
        p = generate("element_distinctness", n)
        rel = hamming_relation(p, 1)
        # X = injective inputs: N(N-1) partners, N-1 of them differ at a given index
        assert relation_stats(p, rel, 0) == RelationStats(n * (n - 1), 2, n - 1, 1)
        # the transposed orientation, as the statements list it
        assert relation_stats(p, rel, 1) == RelationStats(2, n * (n - 1), 1, n - 1)

    def test_singleton(self):
        p = generate("ordered_search", 4)
        assert relation_stats(p, PairRelation.of([(0, 3)]), 1) == RelationStats(1, 1, 1, 1)

    def test_empty(self):
        with pytest.raises(ValueError):
            relation_stats(generate("ordered_search", 3), PairRelation(), 1)

    def test_same_class_pair_rejected(self):
        p = generate("unordered_search", 2)
        with pytest.raises(ValueError):
            relation_stats(p, PairRelation.of([(1, 2)]), 1)

    def test_unordered_storage(self):
        assert PairRelation.of([(3, 1), (1, 3)]).pairs == frozenset({(1, 3)})
