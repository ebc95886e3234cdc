import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvqa import (
    ABSENT,
    NEG,
    POS,
    BoolFn,
    Cube,
    EsopExpr,
    brute_force_mis,
    brute_force_mvc,
    cofactor,
    constraint_esop,
    eval_esop,
    minimize_esop,
    mis_constraint_fn,
    mvc_constraint_fn,
    shannon_esop,
)
from cvqa.esop import clause_frequency_order, esop_table
from cvqa.graphs import bits_from_string

from conftest import random_graphs


def two_clause_example(n=3):
    """(x1 or x2) and (x2 or x3) on variables indexed 0, 1, 2."""
    return (BoolFn.variable(n, 0) | BoolFn.variable(n, 1)) & (
        BoolFn.variable(n, 1) | BoolFn.variable(n, 2)
    )


# ~x1 x2  ^  x1 ~x2 x3  ^  x1 x2
TWO_CLAUSE_ESOP = EsopExpr(
    3, (Cube.from_string("01-"), Cube.from_string("101"), Cube.from_string("11-"))
)


class TestCube:
    def test_evaluation_is_polarity_match(self):
        c = Cube((POS, NEG, ABSENT))
        assert c.evaluate(0b001) == 1  # x0=1, x1=0
        assert c.evaluate(0b011) == 0
        assert c.evaluate(0b101) == 1  # x2 ignored

    def test_all_absent_is_tautology(self):
        c = Cube.tautology(3)
        assert all(c.evaluate(x) == 1 for x in range(8))
        assert c.width() == 0

    def test_string_round_trip(self):
        assert Cube.from_string("10-").to_string() == "10-"
        assert Cube.from_string("10-").literals == (POS, NEG, ABSENT)

    def test_bad_literal_code(self):
        with pytest.raises(ValueError):
            Cube((0, 1, 3))


class TestCofactor:
    def test_and_with_true(self):
        f = BoolFn.variable(2, 0) & BoolFn.variable(2, 1)
        assert np.array_equal(cofactor(f, 0, 1).table, BoolFn.variable(2, 1).table)

    def test_and_with_false(self):
        f = BoolFn.variable(2, 0) & BoolFn.variable(2, 1)
        assert not cofactor(f, 0, 0).table.any()

    def test_xor_identity(self):
        f = BoolFn(2, BoolFn.variable(2, 0).table ^ BoolFn.variable(2, 1).table)
        assert np.array_equal(cofactor(f, 1, 1).table, (~BoolFn.variable(2, 0)).table)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            cofactor(BoolFn.constant(2, 1), 2, 0)

    def test_result_ignores_fixed_bit(self):
        f = BoolFn(3, np.random.default_rng(5).integers(0, 2, 8).astype(bool))
        g = cofactor(f, 1, 0)
        for x in range(8):
            assert g.table[x] == g.table[x ^ 0b010]


class TestShannon:
    def test_two_clause_worked_example(self):
        e = shannon_esop(two_clause_example(), [0, 1, 2])
        assert np.array_equal(esop_table(e), esop_table(TWO_CLAUSE_ESOP))
        assert np.array_equal(esop_table(e), two_clause_example().table)

    def test_constant_one_single_absent_cube(self):
        e = shannon_esop(BoolFn.constant(3, 1))
        assert len(e.cubes) == 1 and e.cubes[0] == Cube.tautology(3)

    def test_constant_zero_no_cubes(self):
        assert shannon_esop(BoolFn.constant(3, 0)).cubes == ()

    def test_majority_of_three(self):
        idx = np.arange(8)
        maj = (((idx >> 0) & 1) + ((idx >> 1) & 1) + ((idx >> 2) & 1)) >= 2
        e = shannon_esop(BoolFn(3, maj))
        assert np.array_equal(esop_table(e), maj)

    def test_bad_order_rejected(self):
        with pytest.raises(ValueError):
            shannon_esop(BoolFn.constant(2, 1), [0, 0])

    @given(st.integers(0, 2**16 - 1), st.permutations(range(4)))
    @settings(max_examples=80, deadline=None)
    def test_order_independent_semantics(self, bits, order):
        table = np.array([(bits >> k) & 1 for k in range(16)], dtype=bool)
        f = BoolFn(4, table)
        assert np.array_equal(esop_table(shannon_esop(f, order)), table)


class TestMinimize:
    def test_duplicate_pair_cancels(self):
        c = Cube.from_string("10-")
        e = minimize_esop(EsopExpr(3, (c, c)))
        assert e.cubes == ()

    def test_complement_pair_merges_to_tautology(self):
        e = minimize_esop(EsopExpr(1, (Cube.from_string("1"), Cube.from_string("0"))))
        assert e.cubes == (Cube.tautology(1),)

    def test_absorption_flips_polarity(self):
        # c x0 ^ c  =  c ~x0
        e = minimize_esop(EsopExpr(2, (Cube.from_string("11"), Cube.from_string("-1"))))
        assert e.cubes == (Cube.from_string("01"),)

    def test_worked_example_compresses(self):
        m = minimize_esop(TWO_CLAUSE_ESOP)
        assert len(m.cubes) <= 3
        assert np.array_equal(esop_table(m), esop_table(TWO_CLAUSE_ESOP))

    @given(st.integers(1, 6), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_and_idempotence(self, n, rnd):
        table = np.array([rnd.random() < 0.5 for _ in range(1 << n)], dtype=bool)
        f = BoolFn(n, table)
        e = shannon_esop(f, list(rnd.sample(range(n), n)))
        m = minimize_esop(e)
        assert len(m.cubes) <= len(e.cubes)
        assert np.array_equal(esop_table(m), table)
        assert len(minimize_esop(m).cubes) == len(m.cubes)


class TestEval:
    def test_worked_example_values(self):
        # (1,0,0): f = (1 or 0) and (0 or 0) = 0
        assert eval_esop(TWO_CLAUSE_ESOP, "100") == 0
        # (1,1,*): second clause satisfied by x2
        assert eval_esop(TWO_CLAUSE_ESOP, "110") == 1
        assert eval_esop(TWO_CLAUSE_ESOP, "111") == 1

    def test_empty_expression_is_zero(self):
        e = EsopExpr(3, ())
        assert all(eval_esop(e, x) == 0 for x in range(8))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            eval_esop(TWO_CLAUSE_ESOP, "10")

    def test_integer_and_string_agree(self):
        for x in range(8):
            s = "".join("1" if (x >> i) & 1 else "0" for i in range(3))
            assert eval_esop(TWO_CLAUSE_ESOP, x) == eval_esop(TWO_CLAUSE_ESOP, s)


class TestConstraintFunctions:
    def test_single_edge_mvc(self, single_edge):
        f = mvc_constraint_fn(single_edge)
        assert [f(x) for x in range(4)] == [0, 1, 1, 1]

    def test_triangle_mvc(self, triangle):
        f = mvc_constraint_fn(triangle)
        assert f(bits_from_string("110")) == 1
        assert f(bits_from_string("100")) == 0  # edge (1,2) uncovered

    def test_single_edge_mis(self, single_edge):
        f = mis_constraint_fn(single_edge)
        assert [f(x) for x in range(4)] == [1, 1, 1, 0]

    def test_triangle_mis(self, triangle):
        f = mis_constraint_fn(triangle)
        assert f(bits_from_string("100")) == 1
        assert f(bits_from_string("110")) == 0

    def test_matches_brute_force_feasible_sets(self):
        for g in random_graphs([4, 7, 10], 3):
            fv = mvc_constraint_fn(g).table
            expected = brute_force_mvc(g).feasible_set
            got = {
                "".join("1" if (x >> i) & 1 else "0" for i in range(g.n))
                for x in np.flatnonzero(fv)
            }
            assert got == expected
            fm = mis_constraint_fn(g).table
            got = {
                "".join("1" if (x >> i) & 1 else "0" for i in range(g.n))
                for x in np.flatnonzero(fm)
            }
            assert got == brute_force_mis(g).feasible_set


class TestConstraintEsop:
    def test_frequency_order(self, path3):
        assert clause_frequency_order(path3) == [1, 0, 2]

    def test_compiled_expression_matches_for_both_problems(self):
        for g in random_graphs([3, 6, 9], 3):
            for problem, fn in (("MVC", mvc_constraint_fn), ("MIS", mis_constraint_fn)):
                e = constraint_esop(problem, g)
                assert np.array_equal(esop_table(e), fn(g).table)

    def test_minimization_not_worse(self, triangle):
        raw = constraint_esop("MVC", triangle, minimize=False)
        mini = constraint_esop("MVC", triangle)
        assert len(mini.cubes) <= len(raw.cubes)


def test_text_format_round_trip(triangle):
    e = constraint_esop("MVC", triangle)
    text = e.to_text()
    head, *cubes = text.strip().split("\n")
    assert head == f"vars=3 cubes={len(e.cubes)}"
    assert all(set(line) <= set("01-") for line in cubes)
    assert EsopExpr.from_text(text) == e
