import random

import pytest

from nsbox import (
    BellExpression,
    TRIPARTITE_BINARY,
    classical_max,
    enumerate_deterministic,
    evaluate,
    gyni_expression,
    is_no_signaling,
    mix,
    no_signaling_max,
    strategy_behavior,
    uniform_behavior,
    validate,
)
from nsbox.correlators import max_over_ns_correlators
from nsbox.lp import make_lp, solve
from nsbox.behavior import cell_index
from nsbox.rational import Q, ZERO

from test_behavior import random_behavior


class TestGyniExpression:
    def test_four_quarter_coefficients(self):
        expr = gyni_expression()
        assert len(expr.coefficients) == 4
        assert all(v == Q(1, 4) for _, v in expr.coefficients)

    def test_promise_violating_inputs_have_zero_coefficient(self):
        expr = gyni_expression()
        for (outs, ins), _ in expr.coefficients:
            assert sum(ins) % 2 == 0

    def test_winning_cells_match_neighbour_rule(self):
        # a = y, b = z, c = x on every promise input
        expr = gyni_expression()
        cells = dict(expr.coefficients)
        assert cells[((1, 1, 0), (0, 1, 1))] == Q(1, 4)
        for (a, b, c), (x, y, z) in cells:
            assert (a, b, c) == (y, z, x)


class TestEvaluate:
    def test_table1_value(self, box):
        # direct lookup oracle: the four winning cells of table1
        expr = gyni_expression()
        expected = Q(1, 4) * (
            box.prob((0, 0, 0), (0, 0, 0))
            + box.prob((1, 1, 0), (0, 1, 1))
            + box.prob((0, 1, 1), (1, 0, 1))
            + box.prob((1, 0, 1), (1, 1, 0))
        )
        assert expected == Q(1, 8)
        assert evaluate(expr, box) == Q(1, 8)

    def test_uniform(self):
        assert evaluate(gyni_expression(), uniform_behavior(TRIPARTITE_BINARY)) == Q(1, 8)

    def test_all_zero_outputs_strategy(self):
        strategy = enumerate_deterministic(TRIPARTITE_BINARY)[0]
        b = strategy_behavior(TRIPARTITE_BINARY, strategy)
        assert evaluate(gyni_expression(), b) == Q(1, 4)

    def test_scenario_mismatch(self, pr_box):
        with pytest.raises(ValueError):
            evaluate(gyni_expression(), pr_box)

    def test_linear_in_behavior(self):
        rng = random.Random(8)
        expr = gyni_expression()
        b1 = random_behavior(TRIPARTITE_BINARY, rng)
        b2 = random_behavior(TRIPARTITE_BINARY, rng)
        lam = Q(2, 7)
        assert evaluate(expr, mix([(lam, b1), (1 - lam, b2)])) == lam * evaluate(
            expr, b1
        ) + (1 - lam) * evaluate(expr, b2)


def local_polytope_max_lp(expr):
    """Cross-check: LP over the local polytope with explicit behavior cells."""
    scenario = expr.scenario
    strategies = enumerate_deterministic(scenario)
    n_cells = scenario.cell_count
    num_vars = len(strategies) + n_cells  # weights then cells
    equalities = [({j: 1 for j in range(len(strategies))}, 1)]
    rows = [dict() for _ in range(n_cells)]
    for j, s in enumerate(strategies):
        for ins in scenario.input_tuples():
            rows[cell_index(scenario, s.fired_outputs(ins), ins)][j] = 1
    for idx in range(n_cells):
        rows[idx][len(strategies) + idx] = -1
        equalities.append((rows[idx], 0))
    objective = {
        len(strategies) + cell_index(scenario, outs, ins): v
        for (outs, ins), v in expr.coefficients
    }
    return solve(make_lp(num_vars, equalities, objective=objective)).objective_value


class TestClassicalMax:
    def test_gyni_bound(self):
        result = classical_max(gyni_expression())
        assert result.value == Q(1, 4)

    def test_zero_expression(self):
        expr = BellExpression.from_cells(TRIPARTITE_BINARY, {})
        assert classical_max(expr).value == 0

    def test_single_cell(self):
        expr = BellExpression.from_cells(
            TRIPARTITE_BINARY, {((0, 0, 0), (0, 0, 0)): 1}
        )
        result = classical_max(expr)
        assert result.value == 1
        assert result.strategy.fired_outputs((0, 0, 0)) == (0, 0, 0)

    def test_agrees_with_local_polytope_lp(self):
        expr = gyni_expression()
        assert classical_max(expr).value == local_polytope_max_lp(expr)
        rng = random.Random(77)
        cells = {}
        for (outs, ins) in list(TRIPARTITE_BINARY.cells())[::5]:
            cells[(outs, ins)] = Q(rng.randint(-2, 2), 4)
        expr2 = BellExpression.from_cells(TRIPARTITE_BINARY, cells)
        assert classical_max(expr2).value == local_polytope_max_lp(expr2)

    def test_tie_break_lowest_index(self):
        # constant expressions are maximized by the very first strategy
        expr = BellExpression.from_cells(TRIPARTITE_BINARY, {})
        strategies = enumerate_deterministic(TRIPARTITE_BINARY)
        assert classical_max(expr).strategy == strategies[0]


class TestNoSignalingMax:
    def test_gyni_value_cross_checked(self):
        expr = gyni_expression()
        result = no_signaling_max(expr)
        assert result.value == Q(1, 3)
        assert max_over_ns_correlators(TRIPARTITE_BINARY, expr.as_dict()) == Q(1, 3)
        assert validate(result.behavior).valid
        assert is_no_signaling(result.behavior).no_signaling
        assert evaluate(expr, result.behavior) == Q(1, 3)

    def test_single_cell(self):
        expr = BellExpression.from_cells(
            TRIPARTITE_BINARY, {((1, 0, 1), (0, 1, 0)): 1}
        )
        assert no_signaling_max(expr).value == 1

    def test_zero_expression(self):
        expr = BellExpression.from_cells(TRIPARTITE_BINARY, {})
        assert no_signaling_max(expr).value == 0

    def test_classical_never_exceeds_ns(self):
        rng = random.Random(15)
        for _ in range(3):
            cells = {}
            for (outs, ins) in list(TRIPARTITE_BINARY.cells())[:: rng.randint(3, 9)]:
                cells[(outs, ins)] = Q(rng.randint(-3, 3), 6)
            expr = BellExpression.from_cells(TRIPARTITE_BINARY, cells)
            assert classical_max(expr).value <= no_signaling_max(expr).value

    def test_table1_satisfies_gyni(self, box):
        expr = gyni_expression()
        assert evaluate(expr, box) == Q(1, 8) <= classical_max(expr).value == Q(1, 4)
