import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nabounds.adversary import WeightFunction, validate_weight_function
from nabounds.applications import adjacent_threshold_weight, star_weight
from nabounds.blackbox import CapError, Problem, count_cross_pairs, generate
from nabounds.superquery import (build_super_problem, check_facteurk, coarsen_outputs,
                                 lift_weight, super_v_sum, two_class_sides)

from oracles import random_problem, random_weight

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def brute_super_v(w, x, I):
    """V(kx, I) straight from the base problem: weight of partners that differ
    somewhere in I."""
    p = w.problem
    total = Fraction(0)
    for (a, b), val in w.entries.items():
        if x in (a, b):
            y = b if a == x else a
            if any(p.inputs[x][i] != p.inputs[y][i] for i in I):
                total += val
    return total


class TestBuild:
    def test_symbols_of_a_single_input(self):
        base = Problem(2, 3, ((0, 1, 0), (1, 1, 1)), (0, 1))
        sp = build_super_problem(base, 2)
        row = sp.problem.inputs[0]
        # tuples (0,0), (0,1), (0,2) come first in lexicographic order
        assert [sp.decode(row[sp.tuple_index(I)]) for I in [(0, 0), (0, 1), (0, 2)]] == \
            [(0, 0), (0, 1), (0, 0)]

    def test_k_one_is_the_base(self):
        p = generate("ordered_search", 5)
        sp = build_super_problem(p, 1)
        assert sp.problem.inputs == p.inputs and sp.problem.outputs == p.outputs

    def test_or2_squared(self):
        sp = build_super_problem(generate("unordered_search", 2), 2)
        assert sp.tuples == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert sp.problem.gamma_size == 4 and sp.problem.sigma_size == 4
        assert len(sp.problem) == 4

    def test_encoding_first_coordinate_most_significant(self):
        sp = build_super_problem(Problem(3, 2, ((2, 1), (0, 0)), (0, 1)), 2)
        assert sp.problem.inputs[0][sp.tuple_index((0, 1))] == 2 * 3 + 1
        assert sp.decode(7) == (2, 1)

    def test_tuple_index_checks(self):
        sp = build_super_problem(generate("unordered_search", 3), 2)
        with pytest.raises(ValueError):
            sp.tuple_index((0,))
        with pytest.raises(IndexError):
            sp.tuple_index((0, 3))

    def test_cap(self):
        with pytest.raises(CapError):
            build_super_problem(generate("unordered_search", 10), 4)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            build_super_problem(generate("unordered_search", 3), 0)


class TestLift:
    def test_total_weight_preserved(self):
        p = generate("unordered_search", 3)
        lw = lift_weight(star_weight(p), build_super_problem(p, 2))
        assert lw.weight.wt(0) == 3
        assert all(lw.weight.wt(x) == lw.base.wt(x) for x in range(len(p)))

    def test_lifted_weight_valid(self):
        p = generate("ordered_search", 3)
        lw = lift_weight(adjacent_threshold_weight(p), build_super_problem(p, 3))
        assert validate_weight_function(lw.weight)[0]

    def test_wrong_problem(self):
        p = generate("unordered_search", 3)
        with pytest.raises(ValueError):
            lift_weight(star_weight(p), build_super_problem(generate("unordered_search", 4), 2))


class TestRatio:
    def test_or3_pair(self):
        p = generate("unordered_search", 3)
        lw = lift_weight(star_weight(p), build_super_problem(p, 2))
        res = check_facteurk(lw, 0, (0, 1))
        assert res.lhs == res.rhs == Fraction(3, 2) and res.holds

    def test_repeated_index(self):
        p = generate("unordered_search", 3)
        lw = lift_weight(star_weight(p), build_super_problem(p, 2))
        res = check_facteurk(lw, 0, (1, 1))
        assert res.lhs == 3 and res.rhs == Fraction(3, 2)

    def test_k_one_is_equality(self):
        p = generate("ordered_search", 6)
        lw = lift_weight(adjacent_threshold_weight(p), build_super_problem(p, 1))
        for x in range(len(p)):
            for i in range(p.gamma_size):
                res = check_facteurk(lw, x, (i,))
                assert res.vacuous or res.lhs == res.rhs

    def test_vacuous_when_no_partner_differs(self):
        p = generate("ordered_search", 4)
        lw = lift_weight(adjacent_threshold_weight(p), build_super_problem(p, 2))
        # input 0 only neighbours input 1, which differs at index 0
        assert check_facteurk(lw, 0, (2, 3)).vacuous

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.sampled_from([2, 3]))
    def test_random(self, seed, k):
        rng = random.Random(seed)
        p = random_problem(rng, max_gamma=4, max_inputs=20)
        w = random_weight(rng, p, 0.4)
        lw = lift_weight(w, build_super_problem(p, k))
        for _ in range(5):
            x = rng.randrange(len(p))
            I = tuple(rng.randrange(p.gamma_size) for _ in range(k))
            big_v, small_sum = super_v_sum(lw, x, I)
            assert big_v == brute_super_v(w, x, I)
            assert big_v <= small_sum
            assert check_facteurk(lw, x, I).holds


class TestTwoClass:
    def test_or3(self):
        p = generate("unordered_search", 3)
        lhs, rhs = two_class_sides(lift_weight(star_weight(p), build_super_problem(p, 2)))
        assert lhs >= rhs
        assert rhs == Fraction(3, 2)

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_random_two_class(self, seed):
        rng = random.Random(seed)
        p = random_problem(rng, max_gamma=3, max_inputs=16, max_classes=2)
        w = random_weight(rng, p, 0.5)
        if not w.entries:
            return
        lhs, rhs = two_class_sides(lift_weight(w, build_super_problem(p, 2)))
        assert lhs >= rhs


class TestCoarsen:
    def test_identity(self):
        p = generate("ordered_search", 4)
        assert coarsen_outputs(p, {o: o for o in range(1, 5)}).outputs == p.outputs

    def test_merge_low_thresholds(self):
        p = generate("ordered_search", 4)
        q = coarsen_outputs(p, {1: 1, 2: 1, 3: 1, 4: 4})
        assert q.outputs == (1, 1, 1, 4)
        w = WeightFunction(q, {(2, 3): 1})
        assert validate_weight_function(w)[0]
        assert validate_weight_function(WeightFunction(p, w.entries))[0]

    def test_all_to_one(self):
        q = coarsen_outputs(generate("ordered_search", 4), {o: 0 for o in range(1, 5)})
        assert count_cross_pairs(q) == 0

    def test_partial_mapping(self):
        with pytest.raises(ValueError):
            coarsen_outputs(generate("ordered_search", 4), {1: 1, 2: 2})
